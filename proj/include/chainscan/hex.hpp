#pragma once

#include "chainscan/common.hpp"

namespace chainscan {

/// Decodes hex text with an optional "0x" prefix. Either letter case is accepted.
/// Throws DecodeError on odd length or a non-hex character.
Bytes hex_to_bytes(std::string_view hex);

/// Lowercase hex, no prefix.
std::string bytes_to_hex(ByteView bytes);

bool is_hex_digit(char c) noexcept;

/// True if every character is a hex digit (empty counts as hex).
bool is_hex(std::string_view text) noexcept;

} // namespace chainscan
