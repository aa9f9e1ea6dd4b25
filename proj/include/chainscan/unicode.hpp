#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "chainscan/common.hpp"

namespace chainscan::unicode {

struct CodePointRange {
    char32_t first;
    char32_t last;
};

extern const char* const kUnicodeVersion;
extern const CodePointRange kNonPrintableRanges[];
extern const std::size_t kNonPrintableRangeCount;

struct Decoded {
    char32_t code_point;
    std::size_t length;
};

/// Strict UTF-8 decode of the sequence starting at `bytes[0]`: rejects
/// overlong forms, surrogates, values above U+10FFFF and truncated sequences.
std::optional<Decoded> decode_one(ByteView bytes) noexcept;

/// Not Cc (other than TAB, LF, CR), not Cs, not Cn.
bool is_printable(char32_t cp) noexcept;

/// Unicode White_Space property.
bool is_white_space(char32_t cp) noexcept;

/// Code points in a byte string; each undecodable byte counts as one.
std::size_t char_count(ByteView bytes) noexcept;

} // namespace chainscan::unicode
