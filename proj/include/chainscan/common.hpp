#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chainscan {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// UTC instant with microsecond resolution (BigQuery TIMESTAMP precision).
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

enum class Chain { Bitcoin, Ethereum };

std::string_view to_string(Chain chain);
Chain chain_from_string(std::string_view text);

/// Base for all data errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A record line could not be parsed. Carries the 1-based line number, or 0 if unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Hex or script token could not be decoded.
class DecodeError : public Error {
public:
    using Error::Error;
};

inline ByteView as_bytes(std::string_view text) {
    return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

inline std::string to_string(ByteView bytes) {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

inline Bytes to_bytes(std::string_view text) {
    auto view = as_bytes(text);
    return {view.begin(), view.end()};
}

} // namespace chainscan
