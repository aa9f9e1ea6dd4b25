#include "chainscan/common.hpp"

#include <fmt/format.h>

namespace chainscan {

std::string_view to_string(Chain chain) {
    return chain == Chain::Bitcoin ? "bitcoin" : "ethereum";
}

Chain chain_from_string(std::string_view text) {
    if (text == "bitcoin" || text == "btc") return Chain::Bitcoin;
    if (text == "ethereum" || text == "eth") return Chain::Ethereum;
    throw Error(fmt::format("unknown chain '{}'", text));
}

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

} // namespace chainscan
