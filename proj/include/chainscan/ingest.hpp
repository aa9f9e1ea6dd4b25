#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <variant>

#include "chainscan/common.hpp"

// Chain-export records. Field names follow the public BigQuery blockchain
// dataset schemas verbatim so that NDJSON exports load without transformation.
// See docs/input-schema.md.

namespace chainscan {

struct ScriptSlot {
    std::string script_asm;
    std::string type;

    bool operator==(const ScriptSlot&) const = default;
};

struct BtcTransaction {
    std::string hash;
    Timestamp block_timestamp;
    std::vector<ScriptSlot> inputs;
    std::vector<ScriptSlot> outputs;

    bool operator==(const BtcTransaction&) const = default;
};

struct BtcBlock {
    std::string hash;
    Timestamp timestamp;
    Bytes coinbase;

    bool operator==(const BtcBlock&) const = default;
};

struct EthTransaction {
    std::string hash;
    Timestamp block_timestamp;
    std::string from_address;
    std::optional<std::string> to_address;
    Bytes input;

    bool operator==(const EthTransaction&) const = default;
};

/// Ethereum block header subset; extra_data is the miner-chosen field (at most 32 bytes on mainnet).
struct EthBlock {
    std::string hash;
    Timestamp timestamp;
    Bytes extra_data;

    bool operator==(const EthBlock&) const = default;
};

using BtcRecord = std::variant<BtcTransaction, BtcBlock>;
using EthRecord = std::variant<EthTransaction, EthBlock>;

// Each parser takes one NDJSON line. `line_no` only decorates error messages.
// Structural problems raise ParseError, bad hex raises DecodeError.
BtcTransaction parse_btc_tx(std::string_view line, std::size_t line_no = 0);
EthTransaction parse_eth_tx(std::string_view line, std::size_t line_no = 0);
BtcBlock parse_btc_block(std::string_view line, std::size_t line_no = 0);
EthBlock parse_eth_block(std::string_view line, std::size_t line_no = 0);

/// Dispatches on field presence: "coinbase_param" marks a block.
BtcRecord parse_btc_record(std::string_view line, std::size_t line_no = 0);
/// Dispatches on field presence: "extra_data" without "input" marks a block.
EthRecord parse_eth_record(std::string_view line, std::size_t line_no = 0);

std::string to_json_line(const BtcTransaction& tx);
std::string to_json_line(const BtcBlock& block);
std::string to_json_line(const EthTransaction& tx);
std::string to_json_line(const EthBlock& block);

/// Line reader over plain or gzip-compressed (".gz" extension) files.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    /// Reads the next line without its terminator. Returns false at end of input.
    bool next(std::string& line);
    std::size_t line_number() const noexcept { return line_no_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t line_no_ = 0;
};

/// I/O failure opening or reading an input file.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace chainscan
