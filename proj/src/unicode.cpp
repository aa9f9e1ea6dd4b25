#include "chainscan/unicode.hpp"

#include <algorithm>

namespace chainscan::unicode {

std::optional<Decoded> decode_one(ByteView bytes) noexcept {
    if (bytes.empty()) return std::nullopt;
    std::uint8_t lead = bytes[0];
    if (lead < 0x80) return Decoded{lead, 1};

    std::size_t length;
    char32_t cp;
    char32_t min;
    if ((lead & 0xE0) == 0xC0) {
        length = 2, cp = lead & 0x1F, min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        length = 3, cp = lead & 0x0F, min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        length = 4, cp = lead & 0x07, min = 0x10000;
    } else {
        return std::nullopt;
    }
    if (bytes.size() < length) return std::nullopt;
    for (std::size_t i = 1; i < length; ++i) {
        if ((bytes[i] & 0xC0) != 0x80) return std::nullopt;
        cp = cp << 6 | (bytes[i] & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    return Decoded{cp, length};
}

bool is_printable(char32_t cp) noexcept {
    const CodePointRange* begin = kNonPrintableRanges;
    const CodePointRange* end = kNonPrintableRanges + kNonPrintableRangeCount;
    auto it = std::upper_bound(begin, end, cp, [](char32_t v, const CodePointRange& r) { return v < r.first; });
    if (it == begin) return true;
    return cp > std::prev(it)->last;
}

bool is_white_space(char32_t cp) noexcept {
    switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20: case 0x85: case 0xA0:
    case 0x1680: case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
        return true;
    default:
        return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::size_t char_count(ByteView bytes) noexcept {
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        auto decoded = decode_one(bytes.subspan(pos));
        pos += decoded ? decoded->length : 1;
        ++count;
    }
    return count;
}

} // namespace chainscan::unicode
