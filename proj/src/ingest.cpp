#include "chainscan/ingest.hpp"

#include <cstdio>
#include <fmt/format.h>
#include <json.hpp>
#include <zlib.h>

#include "chainscan/btcscript.hpp"
#include "chainscan/hex.hpp"
#include "chainscan/timestamp.hpp"

namespace chainscan {

using nlohmann::json;

namespace {

json parse_object(std::string_view line, std::size_t line_no) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("malformed JSON: {}", e.what()), line_no);
    }
    if (!doc.is_object()) throw ParseError("record is not a JSON object", line_no);
    return doc;
}

const json& required(const json& doc, const char* field, std::size_t line_no) {
    auto it = doc.find(field);
    if (it == doc.end() || it->is_null()) {
        throw ParseError(fmt::format("missing required field '{}'", field), line_no);
    }
    return *it;
}

std::string string_field(const json& doc, const char* field, std::size_t line_no) {
    const auto& value = required(doc, field, line_no);
    if (!value.is_string()) throw ParseError(fmt::format("field '{}' is not a string", field), line_no);
    return value.get<std::string>();
}

std::optional<std::string> optional_string(const json& doc, const char* field, std::size_t line_no) {
    auto it = doc.find(field);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(fmt::format("field '{}' is not a string", field), line_no);
    return it->get<std::string>();
}

Timestamp timestamp_field(const json& doc, const char* field, std::size_t line_no) {
    auto text = string_field(doc, field, line_no);
    try {
        return parse_timestamp(text);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no);
    }
}

std::string lowercase(std::string text) {
    for (auto& c : text) {
        if (c >= 'A' && c <= 'F') c = static_cast<char>(c - 'A' + 'a');
    }
    return text;
}

std::string btc_hash(const json& doc, std::size_t line_no) {
    auto hash = string_field(doc, "hash", line_no);
    if (hash.size() != 64 || !is_hex(hash)) {
        throw ParseError(fmt::format("invalid Bitcoin hash '{}'", hash), line_no);
    }
    return lowercase(std::move(hash));
}

std::string prefixed_hex(const json& doc, const char* field, std::size_t digits, std::size_t line_no) {
    auto value = string_field(doc, field, line_no);
    if (value.size() != digits + 2 || !value.starts_with("0x") || !is_hex(std::string_view(value).substr(2))) {
        throw ParseError(fmt::format("field '{}' must be 0x followed by {} hex digits", field, digits), line_no);
    }
    return lowercase(std::move(value));
}

Bytes hex_field(const json& doc, const char* field, std::size_t line_no) {
    auto text = string_field(doc, field, line_no);
    try {
        return hex_to_bytes(text);
    } catch (const DecodeError& e) {
        throw DecodeError(fmt::format("line {}: field '{}': {}", line_no, field, e.what()));
    }
}

std::vector<ScriptSlot> slots(const json& doc, const char* field, std::size_t line_no) {
    std::vector<ScriptSlot> out;
    auto it = doc.find(field);
    if (it == doc.end() || it->is_null()) return out;
    if (!it->is_array()) throw ParseError(fmt::format("field '{}' is not an array", field), line_no);
    out.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& entry = (*it)[i];
        if (!entry.is_object()) throw ParseError(fmt::format("{}[{}] is not an object", field, i), line_no);
        ScriptSlot slot;
        slot.script_asm = optional_string(entry, "script_asm", line_no).value_or("");
        slot.type = optional_string(entry, "type", line_no).value_or("");
        try {
            tokenize(slot.script_asm);
        } catch (const DecodeError& e) {
            throw DecodeError(fmt::format("line {}: {}[{}].script_asm: {}", line_no, field, i, e.what()));
        }
        out.push_back(std::move(slot));
    }
    return out;
}

json slots_json(const std::vector<ScriptSlot>& list) {
    auto out = json::array();
    for (const auto& slot : list) out.push_back({{"script_asm", slot.script_asm}, {"type", slot.type}});
    return out;
}

} // namespace

BtcTransaction parse_btc_tx(std::string_view line, std::size_t line_no) {
    auto doc = parse_object(line, line_no);
    BtcTransaction tx;
    tx.hash = btc_hash(doc, line_no);
    tx.block_timestamp = timestamp_field(doc, "block_timestamp", line_no);
    tx.inputs = slots(doc, "inputs", line_no);
    tx.outputs = slots(doc, "outputs", line_no);
    return tx;
}

BtcBlock parse_btc_block(std::string_view line, std::size_t line_no) {
    auto doc = parse_object(line, line_no);
    BtcBlock block;
    block.hash = btc_hash(doc, line_no);
    block.timestamp = timestamp_field(doc, "timestamp", line_no);
    block.coinbase = hex_field(doc, "coinbase_param", line_no);
    return block;
}

EthTransaction parse_eth_tx(std::string_view line, std::size_t line_no) {
    auto doc = parse_object(line, line_no);
    EthTransaction tx;
    tx.hash = prefixed_hex(doc, "hash", 64, line_no);
    tx.block_timestamp = timestamp_field(doc, "block_timestamp", line_no);
    tx.from_address = prefixed_hex(doc, "from_address", 40, line_no);
    if (doc.contains("to_address") && !doc["to_address"].is_null()) {
        tx.to_address = prefixed_hex(doc, "to_address", 40, line_no);
    }
    tx.input = hex_field(doc, "input", line_no);
    return tx;
}

EthBlock parse_eth_block(std::string_view line, std::size_t line_no) {
    auto doc = parse_object(line, line_no);
    EthBlock block;
    block.hash = prefixed_hex(doc, "hash", 64, line_no);
    block.timestamp = timestamp_field(doc, "timestamp", line_no);
    block.extra_data = hex_field(doc, "extra_data", line_no);
    return block;
}

BtcRecord parse_btc_record(std::string_view line, std::size_t line_no) {
    // Cheap textual probe; the parser re-validates the full object.
    if (line.find("\"coinbase_param\"") != std::string_view::npos) return parse_btc_block(line, line_no);
    return parse_btc_tx(line, line_no);
}

EthRecord parse_eth_record(std::string_view line, std::size_t line_no) {
    if (line.find("\"extra_data\"") != std::string_view::npos && line.find("\"input\"") == std::string_view::npos) {
        return parse_eth_block(line, line_no);
    }
    return parse_eth_tx(line, line_no);
}

std::string to_json_line(const BtcTransaction& tx) {
    json doc = {{"hash", tx.hash},
                {"block_timestamp", format_timestamp(tx.block_timestamp)},
                {"inputs", slots_json(tx.inputs)},
                {"outputs", slots_json(tx.outputs)}};
    return doc.dump();
}

std::string to_json_line(const BtcBlock& block) {
    json doc = {{"hash", block.hash},
                {"timestamp", format_timestamp(block.timestamp)},
                {"coinbase_param", bytes_to_hex(block.coinbase)}};
    return doc.dump();
}

std::string to_json_line(const EthTransaction& tx) {
    json doc = {{"hash", tx.hash},
                {"block_timestamp", format_timestamp(tx.block_timestamp)},
                {"from_address", tx.from_address},
                {"to_address", tx.to_address ? json(*tx.to_address) : json(nullptr)},
                {"input", "0x" + bytes_to_hex(tx.input)}};
    return doc.dump();
}

std::string to_json_line(const EthBlock& block) {
    json doc = {{"hash", block.hash},
                {"timestamp", format_timestamp(block.timestamp)},
                {"extra_data", "0x" + bytes_to_hex(block.extra_data)}};
    return doc.dump();
}

struct LineReader::Impl {
    std::ifstream plain;
    gzFile gz = nullptr;
    std::string path;

    ~Impl() {
        if (gz) gzclose(gz);
    }
};

LineReader::LineReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path.string();
    if (path.extension() == ".gz") {
        impl_->gz = gzopen(impl_->path.c_str(), "rb");
        if (!impl_->gz) throw IoError(fmt::format("cannot open '{}'", impl_->path));
        gzbuffer(impl_->gz, 1 << 17);
    } else {
        impl_->plain.open(path, std::ios::binary);
        if (!impl_->plain) throw IoError(fmt::format("cannot open '{}'", impl_->path));
    }
}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
    line.clear();
    if (impl_->gz) {
        char buf[8192];
        bool got = false;
        while (gzgets(impl_->gz, buf, sizeof buf)) {
            got = true;
            line.append(buf);
            if (!line.empty() && line.back() == '\n') break;
        }
        if (!got) {
            int err = 0;
            gzerror(impl_->gz, &err);
            if (err != Z_OK && err != Z_STREAM_END) throw IoError(fmt::format("gzip read error in '{}'", impl_->path));
            return false;
        }
        if (!line.empty() && line.back() == '\n') line.pop_back();
    } else {
        if (!std::getline(impl_->plain, line)) {
            if (impl_->plain.bad()) throw IoError(fmt::format("read error in '{}'", impl_->path));
            return false;
        }
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no_;
    return true;
}

} // namespace chainscan
