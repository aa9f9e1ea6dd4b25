#include "chainscan/hex.hpp"

#include <fmt/format.h>

namespace chainscan {

namespace {

int nibble(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

bool is_hex_digit(char c) noexcept { return nibble(c) >= 0; }

bool is_hex(std::string_view text) noexcept {
    for (char c : text) {
        if (!is_hex_digit(c)) return false;
    }
    return true;
}

Bytes hex_to_bytes(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) {
        throw DecodeError(fmt::format("odd-length hex string ({} digits)", hex.size()));
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw DecodeError(fmt::format("invalid hex character at position {}", hi < 0 ? i : i + 1));
        }
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string bytes_to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.resize(bytes.size() * 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[2 * i] = kDigits[bytes[i] >> 4];
        out[2 * i + 1] = kDigits[bytes[i] & 0x0f];
    }
    return out;
}

} // namespace chainscan
