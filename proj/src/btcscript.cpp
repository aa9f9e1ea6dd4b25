#include "chainscan/btcscript.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>
#include <map>

#include "chainscan/hex.hpp"

namespace chainscan {

namespace {

constexpr std::array kChannelNames = {
    std::pair{InsertionChannel::StandardOutput, std::string_view("standard_output")},
    std::pair{InsertionChannel::StandardInput, std::string_view("standard_input")},
    std::pair{InsertionChannel::OpReturnOutput, std::string_view("op_return_output")},
    std::pair{InsertionChannel::NonStandardOutput, std::string_view("nonstandard_output")},
    std::pair{InsertionChannel::NonStandardInput, std::string_view("nonstandard_input")},
    std::pair{InsertionChannel::P2shInput, std::string_view("p2sh_input")},
    std::pair{InsertionChannel::CoinbaseInput, std::string_view("coinbase_input")},
    std::pair{InsertionChannel::EthInput, std::string_view("eth_input")},
    std::pair{InsertionChannel::EthCoinbase, std::string_view("eth_coinbase")},
};

// bitcoind renders signature pushes as "<der>[ALL]"; the suffix is the sighash byte.
std::optional<std::uint8_t> sighash_byte(std::string_view name) {
    static const std::map<std::string_view, std::uint8_t> kSighash = {
        {"ALL", 0x01},
        {"NONE", 0x02},
        {"SINGLE", 0x03},
        {"ALL|ANYONECANPAY", 0x81},
        {"NONE|ANYONECANPAY", 0x82},
        {"SINGLE|ANYONECANPAY", 0x83},
    };
    auto it = kSighash.find(name);
    if (it == kSighash.end()) return std::nullopt;
    return it->second;
}

bool is_small_int_name(std::string_view token) {
    return token == "0" || token == "-1" || (token.size() == 1 && token[0] >= '1' && token[0] <= '9');
}

bool is_whitespace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_push(const ScriptToken& t, std::initializer_list<std::size_t> sizes) {
    if (t.kind != ScriptToken::Kind::Pushdata) return false;
    return std::find(sizes.begin(), sizes.end(), t.bytes.size()) != sizes.end();
}

bool is_op(const ScriptToken& t, std::string_view name) {
    return t.kind == ScriptToken::Kind::Opcode && t.text == name;
}

// OP_1..OP_16, or bitcoind's bare "1".."16" (the two-digit ones tokenize as pushdata).
std::optional<int> small_int(const ScriptToken& t) {
    std::string_view text = t.text;
    if (text.starts_with("OP_")) text.remove_prefix(3);
    if (text.empty() || text.size() > 2) return std::nullopt;
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + (c - '0');
    }
    if (value < 1 || value > 16) return std::nullopt;
    return value;
}

bool is_standard_template(const std::vector<ScriptToken>& t) {
    auto n = t.size();
    // P2PKH
    if (n == 5 && is_op(t[0], "OP_DUP") && is_op(t[1], "OP_HASH160") && is_push(t[2], {20}) &&
        is_op(t[3], "OP_EQUALVERIFY") && is_op(t[4], "OP_CHECKSIG")) {
        return true;
    }
    // P2PK
    if (n == 2 && is_push(t[0], {33, 65}) && is_op(t[1], "OP_CHECKSIG")) return true;
    // P2SH
    if (n == 3 && is_op(t[0], "OP_HASH160") && is_push(t[1], {20}) && is_op(t[2], "OP_EQUAL")) return true;
    // Witness programs: version opcode followed by a single push.
    if (n == 2 && (is_op(t[0], "0") || is_op(t[0], "OP_0") || small_int(t[0])) &&
        t[1].kind == ScriptToken::Kind::Pushdata && t[1].bytes.size() >= 2 && t[1].bytes.size() <= 40) {
        return true;
    }
    // P2MS: m <keys...> n OP_CHECKMULTISIG
    if (n >= 4 && is_op(t[n - 1], "OP_CHECKMULTISIG")) {
        auto m = small_int(t[0]);
        auto keys = small_int(t[n - 2]);
        if (m && keys && static_cast<std::size_t>(*keys) == n - 3 && *m <= *keys) {
            return std::all_of(t.begin() + 1, t.end() - 2, [](const ScriptToken& k) { return is_push(k, {33, 65}); });
        }
    }
    return false;
}

bool is_known_output_type(std::string_view type) {
    return type == "pubkey" || type == "pubkeyhash" || type == "multisig" || type == "scripthash" ||
           type.starts_with("witness_");
}

bool is_known_type(std::string_view type) {
    return type.empty() || type == "nulldata" || type == "nonstandard" || is_known_output_type(type);
}

} // namespace

std::string_view to_string(InsertionChannel channel) {
    for (auto [value, name] : kChannelNames) {
        if (value == channel) return name;
    }
    return "unknown";
}

InsertionChannel channel_from_string(std::string_view text) {
    for (auto [value, name] : kChannelNames) {
        if (name == text) return value;
    }
    throw Error(fmt::format("unknown insertion channel '{}'", text));
}

std::vector<ScriptToken> tokenize(std::string_view script_asm) {
    std::vector<ScriptToken> tokens;
    std::size_t pos = 0;
    while (pos < script_asm.size()) {
        while (pos < script_asm.size() && is_whitespace(script_asm[pos])) ++pos;
        if (pos == script_asm.size()) break;
        auto end = pos;
        while (end < script_asm.size() && !is_whitespace(script_asm[end])) ++end;
        std::string_view text = script_asm.substr(pos, end - pos);
        pos = end;

        if (text.starts_with("OP_") || is_small_int_name(text)) {
            tokens.push_back({ScriptToken::Kind::Opcode, std::string(text), {}});
            continue;
        }

        std::string_view hex = text;
        std::optional<std::uint8_t> suffix;
        if (auto open = text.find('['); open != std::string_view::npos && text.ends_with(']')) {
            suffix = sighash_byte(text.substr(open + 1, text.size() - open - 2));
            if (!suffix) throw DecodeError(fmt::format("unknown sighash annotation in token '{}'", text));
            hex = text.substr(0, open);
        }
        if (!is_hex(hex)) throw DecodeError(fmt::format("non-hex pushdata token '{}'", text));
        if (hex.size() % 2 != 0) throw DecodeError(fmt::format("odd-length pushdata token '{}'", text));
        ScriptToken token{ScriptToken::Kind::Pushdata, std::string(text), hex_to_bytes(hex)};
        if (suffix) token.bytes.push_back(*suffix);
        tokens.push_back(std::move(token));
    }
    return tokens;
}

Bytes mutable_bytes(std::span<const ScriptToken> tokens) {
    Bytes out;
    for (const auto& token : tokens) {
        if (token.kind == ScriptToken::Kind::Pushdata) out.insert(out.end(), token.bytes.begin(), token.bytes.end());
    }
    return out;
}

InsertionChannel classify_slot(const ScriptSlot& slot, bool is_input) {
    const std::string_view type = slot.type;
    bool empty_script = slot.script_asm.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!is_known_type(type) && empty_script) {
        throw ClassificationError(fmt::format("unknown slot type '{}' with empty script", type));
    }

    if (is_input) {
        if (type == "scripthash") return InsertionChannel::P2shInput;
        if (type == "nonstandard") return InsertionChannel::NonStandardInput;
        return InsertionChannel::StandardInput;
    }

    auto tokens = tokenize(slot.script_asm);
    if (type == "nulldata" || (!tokens.empty() && is_op(tokens.front(), "OP_RETURN"))) {
        return InsertionChannel::OpReturnOutput;
    }
    if (is_known_output_type(type)) return InsertionChannel::StandardOutput;
    if (type == "nonstandard") return InsertionChannel::NonStandardOutput;
    return is_standard_template(tokens) ? InsertionChannel::StandardOutput : InsertionChannel::NonStandardOutput;
}

namespace {

// Visits each slot with its channel and mutable bytes; failures become diagnostics.
template <typename Visit>
void for_each_slot(const BtcTransaction& tx, std::vector<SlotDiagnostic>& diagnostics, Visit&& visit) {
    auto walk = [&](const std::vector<ScriptSlot>& list, bool is_input) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            try {
                auto channel = classify_slot(list[i], is_input);
                auto tokens = tokenize(list[i].script_asm);
                visit(channel, mutable_bytes(tokens), is_input);
            } catch (const Error& e) {
                diagnostics.push_back({is_input, i, e.what()});
            }
        }
    };
    walk(tx.inputs, true);
    walk(tx.outputs, false);
}

} // namespace

ChannelPayloads channel_payloads(const BtcTransaction& tx) {
    ChannelPayloads result;
    std::map<InsertionChannel, Bytes> buckets;
    for_each_slot(tx, result.diagnostics, [&](InsertionChannel channel, Bytes bytes, bool) {
        auto& bucket = buckets[channel];
        bucket.insert(bucket.end(), bytes.begin(), bytes.end());
    });
    for (auto& [channel, bytes] : buckets) {
        if (bytes.empty()) continue;
        result.payloads.push_back({channel, std::move(bytes), tx.hash, tx.block_timestamp});
    }
    return result;
}

InsertionChannel SegmentedPayload::channel_at(std::size_t offset) const {
    auto it = std::upper_bound(segments.begin(), segments.end(), offset,
                               [](std::size_t off, const Segment& s) { return off < s.offset; });
    if (it == segments.begin()) throw Error("offset precedes first segment");
    return std::prev(it)->channel;
}

FilePayloads file_payloads(const BtcTransaction& tx) {
    FilePayloads result;
    SegmentedPayload outputs, nonstandard_inputs, p2sh_inputs;
    auto append = [](SegmentedPayload& target, InsertionChannel channel, const Bytes& bytes) {
        if (bytes.empty()) return;
        if (target.segments.empty() || target.segments.back().channel != channel) {
            target.segments.push_back({target.bytes.size(), channel});
        }
        target.bytes.insert(target.bytes.end(), bytes.begin(), bytes.end());
    };
    for_each_slot(tx, result.diagnostics, [&](InsertionChannel channel, Bytes bytes, bool is_input) {
        if (!is_input) {
            append(outputs, channel, bytes);
        } else if (channel == InsertionChannel::NonStandardInput) {
            append(nonstandard_inputs, channel, bytes);
        } else if (channel == InsertionChannel::P2shInput) {
            append(p2sh_inputs, channel, bytes);
        }
    });
    for (auto* group : {&outputs, &nonstandard_inputs, &p2sh_inputs}) {
        if (!group->bytes.empty()) result.payloads.push_back(std::move(*group));
    }
    return result;
}

} // namespace chainscan
