#pragma once

#include <cstddef>
#include <cstdint>

#include "chainscan/common.hpp"
#include "chainscan/unicode.hpp"

// Brute-force printable walk used as an oracle by the tests. At each position
// it tries sequence lengths against the well-formed byte table of RFC 3629; a
// byte that starts no valid sequence counts as one non-printable character.

namespace oracle {

inline std::size_t sequence_length(chainscan::ByteView b, std::size_t i) {
    auto in = [&](std::size_t k, int lo, int hi) { return i + k < b.size() && b[i + k] >= lo && b[i + k] <= hi; };
    int c = b[i];
    if (c <= 0x7F) return 1;
    if (c >= 0xC2 && c <= 0xDF) return in(1, 0x80, 0xBF) ? 2 : 0;
    if (c == 0xE0) return in(1, 0xA0, 0xBF) && in(2, 0x80, 0xBF) ? 3 : 0;
    if ((c >= 0xE1 && c <= 0xEC) || c == 0xEE || c == 0xEF) return in(1, 0x80, 0xBF) && in(2, 0x80, 0xBF) ? 3 : 0;
    if (c == 0xED) return in(1, 0x80, 0x9F) && in(2, 0x80, 0xBF) ? 3 : 0;
    if (c == 0xF0) return in(1, 0x90, 0xBF) && in(2, 0x80, 0xBF) && in(3, 0x80, 0xBF) ? 4 : 0;
    if (c >= 0xF1 && c <= 0xF3) return in(1, 0x80, 0xBF) && in(2, 0x80, 0xBF) && in(3, 0x80, 0xBF) ? 4 : 0;
    if (c == 0xF4) return in(1, 0x80, 0x8F) && in(2, 0x80, 0xBF) && in(3, 0x80, 0xBF) ? 4 : 0;
    return 0;
}

inline char32_t code_point(chainscan::ByteView b, std::size_t i, std::size_t n) {
    if (n == 1) return b[i];
    char32_t cp = b[i] & (0xFF >> (n + 1));
    for (std::size_t k = 1; k < n; ++k) cp = (cp << 6) | (b[i + k] & 0x3F);
    return cp;
}

struct Walk {
    std::size_t printable_bytes = 0;
    std::size_t characters = 0;
};

// Printability per code point comes from the library's category table, which
// the unit tests pin against unicodedata separately.
inline Walk walk(chainscan::ByteView b) {
    Walk w;
    for (std::size_t i = 0; i < b.size();) {
        auto n = sequence_length(b, i);
        ++w.characters;
        if (n == 0) {
            ++i;
            continue;
        }
        if (chainscan::unicode::is_printable(code_point(b, i, n))) w.printable_bytes += n;
        i += n;
    }
    return w;
}

} // namespace oracle
