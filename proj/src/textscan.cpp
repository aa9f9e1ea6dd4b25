#include "chainscan/textscan.hpp"

#include <array>
#include <fmt/format.h>
#include <json.hpp>

#include "chainscan/unicode.hpp"
#include "chainscan/urlscan.hpp"

namespace chainscan {

namespace {

constexpr std::array kTypeNames = {
    std::pair{TextualType::Strings, std::string_view("strings")},
    std::pair{TextualType::Texts, std::string_view("texts")},
    std::pair{TextualType::ContainJson, std::string_view("contain_json")},
    std::pair{TextualType::ContainHex, std::string_view("contain_hex")},
    std::pair{TextualType::ContainEmail, std::string_view("contain_email")},
    std::pair{TextualType::ContainUrl, std::string_view("contain_url")},
    std::pair{TextualType::ContainPgp, std::string_view("contain_pgp")},
    std::pair{TextualType::ContainHtmlXml, std::string_view("contain_html_xml")},
    std::pair{TextualType::ContainDataUrl, std::string_view("contain_data_url")},
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (lower(a[i]) != lower(b[i])) return false;
    }
    return true;
}

bool has_white_space(std::string_view text) {
    auto bytes = as_bytes(text);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        auto decoded = unicode::decode_one(bytes.subspan(pos));
        if (!decoded) {
            ++pos;
            continue;
        }
        if (unicode::is_white_space(decoded->code_point)) return true;
        pos += decoded->length;
    }
    return false;
}

// End index (exclusive) of the brace-balanced region opened at `open`, honoring JSON strings.
std::optional<std::size_t> balanced_end(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::nullopt;
}

bool contains_json_object(std::string_view text) {
    for (auto open = text.find('{'); open != std::string_view::npos; open = text.find('{', open + 1)) {
        auto end = balanced_end(text, open);
        if (!end) continue;
        auto doc = nlohmann::json::parse(text.substr(open, *end - open), nullptr, false);
        if (!doc.is_discarded() && doc.is_object() && !doc.empty()) return true;
    }
    return false;
}

bool contains_hex_run(std::string_view text, std::size_t min_chars) {
    std::size_t run = 0;
    auto closes = [&](std::size_t n) { return n >= min_chars && n % 2 == 0; };
    for (char c : text) {
        if (is_digit(c) || (lower(c) >= 'a' && lower(c) <= 'f')) {
            ++run;
        } else {
            if (closes(run)) return true;
            run = 0;
        }
    }
    return closes(run);
}

bool is_email_local(char c) {
    return is_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}

bool is_domain_char(char c) { return is_alnum(c) || c == '.' || c == '-'; }

bool contains_email(std::string_view text) {
    for (auto at = text.find('@'); at != std::string_view::npos; at = text.find('@', at + 1)) {
        if (at == 0 || !is_email_local(text[at - 1])) continue;
        auto end = at + 1;
        while (end < text.size() && is_domain_char(text[end])) ++end;
        // some "x.tld" with at least one character before the dot and two letters after it
        for (auto dot = at + 2; dot + 2 < end; ++dot) {
            if (text[dot] == '.' && is_alpha(text[dot + 1]) && is_alpha(text[dot + 2])) return true;
        }
    }
    return false;
}

bool contains_pgp(std::string_view text) {
    auto begin = text.find("-----BEGIN PGP ");
    if (begin == std::string_view::npos) return false;
    auto header_close = text.find("-----", begin + 15);
    if (header_close == std::string_view::npos) return false;
    auto end = text.find("-----END PGP ", header_close + 5);
    if (end == std::string_view::npos) return false;
    return text.find("-----", end + 13) != std::string_view::npos;
}

bool is_tag_char(char c) { return is_alnum(c) || c == ':' || c == '_' || c == '-' || c == '.'; }

bool contains_html_xml(std::string_view text) {
    for (auto close = text.find("</"); close != std::string_view::npos; close = text.find("</", close + 2)) {
        auto name_begin = close + 2;
        if (name_begin >= text.size() || !is_alpha(text[name_begin])) continue;
        auto name_end = name_begin;
        while (name_end < text.size() && is_tag_char(text[name_end])) ++name_end;
        auto gt = name_end;
        while (gt < text.size() && (text[gt] == ' ' || text[gt] == '\t' || text[gt] == '\n' || text[gt] == '\r')) ++gt;
        if (gt >= text.size() || text[gt] != '>') continue;
        auto name = text.substr(name_begin, name_end - name_begin);

        if (close == 0) continue;
        for (auto open = text.rfind('<', close - 1); open != std::string_view::npos;
             open = open == 0 ? std::string_view::npos : text.rfind('<', open - 1)) {
            auto candidate = text.substr(open + 1, name.size());
            if (open + 1 + name.size() >= close || !iequals(candidate, name)) continue;
            char after = text[open + 1 + name.size()];
            if (after == '>' || after == ' ' || after == '\t' || after == '\n' || after == '\r') {
                auto tag_end = text.find('>', open);
                if (tag_end != std::string_view::npos && tag_end < close && text[tag_end - 1] != '/') return true;
            }
        }
    }
    return false;
}

bool is_base64_char(char c) { return is_alnum(c) || c == '+' || c == '/' || c == '='; }

bool is_media_type_char(char c) {
    return is_alnum(c) || c == '/' || c == ';' || c == '=' || c == '-' || c == '+' || c == '.' || c == '_' ||
           c == '!' || c == '#' || c == '$' || c == '&' || c == '^';
}

} // namespace

void DetectorConfig::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(fmt::format("{} must lie in [0, 1], got {}", name, v));
    };
    check(ratio_threshold_standard_output, "ratio_threshold_standard_output");
    check(ratio_threshold_other, "ratio_threshold_other");
}

std::string_view to_string(TextualType type) {
    for (auto [value, name] : kTypeNames) {
        if (value == type) return name;
    }
    return "unknown";
}

TextualType textual_type_from_string(std::string_view text) {
    for (auto [value, name] : kTypeNames) {
        if (name == text) return value;
    }
    throw Error(fmt::format("unknown textual type '{}'", text));
}

std::size_t printable_bytes(ByteView payload) noexcept {
    std::size_t printable = 0;
    std::size_t pos = 0;
    while (pos < payload.size()) {
        auto decoded = unicode::decode_one(payload.subspan(pos));
        if (!decoded) {
            ++pos;
            continue;
        }
        if (unicode::is_printable(decoded->code_point)) printable += decoded->length;
        pos += decoded->length;
    }
    return printable;
}

double printable_ratio(ByteView payload) {
    if (payload.empty()) throw UndefinedInputError("printable ratio of an empty payload is undefined");
    return static_cast<double>(printable_bytes(payload)) / static_cast<double>(payload.size());
}

std::optional<double> text_threshold(InsertionChannel channel, const DetectorConfig& cfg) {
    switch (channel) {
    case InsertionChannel::StandardOutput:
        return cfg.ratio_threshold_standard_output;
    case InsertionChannel::NonStandardInput:
    case InsertionChannel::OpReturnOutput:
    case InsertionChannel::NonStandardOutput:
    case InsertionChannel::CoinbaseInput:
    case InsertionChannel::EthInput:
        return cfg.ratio_threshold_other;
    case InsertionChannel::StandardInput:
    case InsertionChannel::P2shInput:
        if (cfg.include_standard_inputs) return cfg.ratio_threshold_other;
        return std::nullopt;
    case InsertionChannel::EthCoinbase:
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<TextFinding> detect_text(ByteView payload, double threshold, const DetectorConfig& cfg) {
    if (payload.empty()) return std::nullopt;
    double ratio = printable_ratio(payload);
    if (ratio < threshold) return std::nullopt;
    if (unicode::char_count(payload) < cfg.min_text_chars) return std::nullopt;
    TextFinding finding;
    finding.text = to_string(payload);
    finding.ratio = ratio;
    finding.classes = classify_text(finding.text, cfg.hex_min_chars);
    return finding;
}

std::vector<TextFinding> scan_btc_text(const BtcTransaction& tx, const DetectorConfig& cfg) {
    std::vector<TextFinding> out;
    for (const auto& payload : channel_payloads(tx).payloads) {
        auto threshold = text_threshold(payload.channel, cfg);
        if (!threshold) continue;
        auto finding = detect_text(payload.bytes, *threshold, cfg);
        if (!finding) continue;
        finding->chain = Chain::Bitcoin;
        finding->tx_hash = tx.hash;
        finding->block_timestamp = tx.block_timestamp;
        finding->channel = payload.channel;
        out.push_back(std::move(*finding));
    }
    return out;
}

std::optional<TextFinding> scan_coinbase_text(const BtcBlock& block, const DetectorConfig& cfg) {
    auto finding = detect_text(block.coinbase, cfg.ratio_threshold_other, cfg);
    if (!finding) return std::nullopt;
    finding->chain = Chain::Bitcoin;
    finding->tx_hash = block.hash;
    finding->block_timestamp = block.timestamp;
    finding->channel = InsertionChannel::CoinbaseInput;
    return finding;
}

std::optional<TextFinding> scan_eth_text(const EthTransaction& tx, const DetectorConfig& cfg) {
    auto finding = detect_text(tx.input, cfg.ratio_threshold_other, cfg);
    if (!finding) return std::nullopt;
    finding->chain = Chain::Ethereum;
    finding->tx_hash = tx.hash;
    finding->block_timestamp = tx.block_timestamp;
    finding->channel = InsertionChannel::EthInput;
    return finding;
}

std::set<TextualType> classify_text(std::string_view text, std::size_t hex_min_chars) {
    std::set<TextualType> classes;
    classes.insert(has_white_space(text) ? TextualType::Texts : TextualType::Strings);
    if (contains_json_object(text)) classes.insert(TextualType::ContainJson);
    if (contains_hex_run(text, hex_min_chars)) classes.insert(TextualType::ContainHex);
    if (contains_email(text)) classes.insert(TextualType::ContainEmail);
    if (find_url(as_bytes(text))) classes.insert(TextualType::ContainUrl);
    if (contains_pgp(text)) classes.insert(TextualType::ContainPgp);
    if (contains_html_xml(text)) classes.insert(TextualType::ContainHtmlXml);
    if (!extract_data_urls(text).empty()) classes.insert(TextualType::ContainDataUrl);
    return classes;
}

std::optional<Bytes> decode_base64(std::string_view text) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::size_t padding = 0;
    while (!text.empty() && text.back() == '=') {
        text.remove_suffix(1);
        ++padding;
    }
    if (padding > 2 || text.size() % 4 == 1) return std::nullopt;
    if (padding > 0 && (text.size() + padding) % 4 != 0) return std::nullopt;

    Bytes out;
    out.reserve(text.size() * 3 / 4);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        int v = value(c);
        if (v < 0) return std::nullopt;
        acc = acc << 6 | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>(acc >> bits));
            acc &= (1u << bits) - 1;
        }
    }
    return out;
}

std::vector<DataUrl> extract_data_urls(std::string_view text) {
    std::vector<DataUrl> out;
    for (auto start = text.find("data:"); start != std::string_view::npos; start = text.find("data:", start + 5)) {
        auto header_begin = start + 5;
        auto comma = header_begin;
        while (comma < text.size() && text[comma] != ',' && is_media_type_char(text[comma])) ++comma;
        if (comma >= text.size() || text[comma] != ',') continue;
        auto header = text.substr(header_begin, comma - header_begin);
        if (!header.ends_with(";base64")) continue;
        auto payload_end = comma + 1;
        while (payload_end < text.size() && is_base64_char(text[payload_end])) ++payload_end;
        if (payload_end == comma + 1) continue;

        DataUrl entry;
        entry.offset = start;
        auto semi = header.find(';');
        entry.media_type = std::string(header.substr(0, semi));
        if (entry.media_type.empty()) entry.media_type = "text/plain";
        auto decoded = decode_base64(text.substr(comma + 1, payload_end - comma - 1));
        entry.valid = decoded.has_value();
        if (decoded) entry.data = std::move(*decoded);
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace chainscan
