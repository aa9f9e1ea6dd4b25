#include "chainscan/sqlemit.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "chainscan/hex.hpp"

namespace chainscan {

namespace {

// Mirrors tokenize + mutable_bytes: pushdata tokens concatenated as hex.
constexpr std::string_view kMutableHexUdf = R"sql(CREATE TEMP FUNCTION mutable_hex(script_asm STRING)
RETURNS STRING
LANGUAGE js AS r"""
  if (script_asm === null) return '';
  const sighash = {'ALL': '01', 'NONE': '02', 'SINGLE': '03', 'ALL|ANYONECANPAY': '81',
                   'NONE|ANYONECANPAY': '82', 'SINGLE|ANYONECANPAY': '83'};
  let out = '';
  for (const tok of script_asm.split(/\s+/)) {
    if (tok === '' || tok.startsWith('OP_') || /^(?:-1|[0-9])$/.test(tok)) continue;
    const annotated = /^([0-9a-fA-F]*)\[([A-Z|]+)\]$/.exec(tok);
    if (annotated) {
      out += annotated[1].toLowerCase() + (sighash[annotated[2]] || '');
    } else if (/^(?:[0-9a-fA-F]{2})*$/.test(tok)) {
      out += tok.toLowerCase();
    }
  }
  return out;
""";
)sql";

// Mirrors classify_slot for rows that carry a type (all rows in the public dataset do).
constexpr std::string_view kChannelUdf = R"sql(CREATE TEMP FUNCTION channel_of(is_input BOOL, type STRING, script_asm STRING)
RETURNS STRING
LANGUAGE js AS r"""
  type = type || '';
  if (is_input) {
    if (type === 'scripthash') return 'p2sh_input';
    if (type === 'nonstandard') return 'nonstandard_input';
    return 'standard_input';
  }
  if (type === 'nulldata' || /^\s*OP_RETURN(?:\s|$)/.test(script_asm || '')) return 'op_return_output';
  if (['pubkey', 'pubkeyhash', 'multisig', 'scripthash'].includes(type) || type.startsWith('witness_')) {
    return 'standard_output';
  }
  return 'nonstandard_output';
""";
)sql";

// Strict UTF-8 walk. Printable means not Cc (TAB, LF, CR excepted), not Cs,
// not Cn; Cn follows the Unicode version of the engine's JavaScript runtime.
constexpr std::string_view kTextStatsUdf = R"sql(CREATE TEMP FUNCTION text_stats(payload_hex STRING)
RETURNS STRUCT<ratio FLOAT64, chars INT64>
LANGUAGE js AS r"""
  if (payload_hex === null) return null;
  const hex = payload_hex.startsWith('0x') ? payload_hex.substring(2) : payload_hex;
  if (hex.length === 0) return null;
  const b = [];
  for (let i = 0; i < hex.length; i += 2) b.push(parseInt(hex.substring(i, i + 2), 16));
  const decode = (i) => {
    const c = b[i];
    let len, cp, min;
    if (c < 0x80) return [c, 1];
    if (c >= 0xc2 && c <= 0xdf) { len = 2; cp = c & 0x1f; min = 0x80; }
    else if (c >= 0xe0 && c <= 0xef) { len = 3; cp = c & 0x0f; min = 0x800; }
    else if (c >= 0xf0 && c <= 0xf4) { len = 4; cp = c & 0x07; min = 0x10000; }
    else return null;
    if (i + len > b.length) return null;
    for (let k = 1; k < len; k++) {
      if ((b[i + k] & 0xc0) !== 0x80) return null;
      cp = (cp << 6) | (b[i + k] & 0x3f);
    }
    if (cp < min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return null;
    return [cp, len];
  };
  let printable = 0, chars = 0, i = 0;
  while (i < b.length) {
    const d = decode(i);
    chars++;
    if (d === null) { i++; continue; }
    const [cp, len] = d;
    if (cp === 9 || cp === 10 || cp === 13 || !/[\p{Cc}\p{Cs}\p{Cn}]/u.test(String.fromCodePoint(cp))) printable += len;
    i += len;
  }
  return {ratio: printable / b.length, chars: chars};
""";
)sql";

std::string quoted_list(const std::vector<std::string_view>& items) {
    std::string out;
    for (auto item : items) {
        if (!out.empty()) out += ", ";
        out += fmt::format("'{}'", item);
    }
    return out;
}

std::string header(const QuerySpec& spec) {
    return fmt::format("-- chainscan {} detector, {}\n-- Selects candidate records in the ingest schema for local rescanning.\n",
                       to_string(spec.detector), to_string(spec.chain));
}

// Per-transaction, per-channel payloads of the Bitcoin transactions table.
std::string btc_channel_payloads_cte() {
    return fmt::format(R"sql(slots AS (
  SELECT t.hash, TRUE AS is_input, pos, i.type, i.script_asm
  FROM `{0}` AS t, UNNEST(t.inputs) AS i WITH OFFSET AS pos
  UNION ALL
  SELECT t.hash, FALSE AS is_input, pos, o.type, o.script_asm
  FROM `{0}` AS t, UNNEST(t.outputs) AS o WITH OFFSET AS pos
),
payloads AS (
  SELECT hash, channel_of(is_input, type, script_asm) AS channel,
         STRING_AGG(mutable_hex(script_asm), '' ORDER BY is_input DESC, pos) AS payload_hex
  FROM slots
  GROUP BY hash, channel
))sql",
                       kBtcTransactionsTable);
}

std::string btc_transaction_rows(std::string_view hash_cte) {
    return fmt::format(R"sql(SELECT t.hash, t.block_timestamp,
       ARRAY(SELECT AS STRUCT i.script_asm, i.type FROM UNNEST(t.inputs) AS i) AS inputs,
       ARRAY(SELECT AS STRUCT o.script_asm, o.type FROM UNNEST(t.outputs) AS o) AS outputs
FROM `{}` AS t
WHERE t.hash IN (SELECT hash FROM {})
ORDER BY t.hash;
)sql",
                       kBtcTransactionsTable, hash_cte);
}

std::string fmt_value(double v) { return fmt::format("{}", v); }

std::string text_predicate(std::string_view stats, std::string_view channel, const DetectorConfig& cfg) {
    std::vector<std::string_view> other = {"nonstandard_input", "op_return_output", "nonstandard_output"};
    if (cfg.include_standard_inputs) {
        other.push_back("standard_input");
        other.push_back("p2sh_input");
    }
    return fmt::format(
        "{0}.chars >= {1}\n    AND (({2} = 'standard_output' AND {0}.ratio >= {3})\n         OR ({2} IN ({4}) AND {0}.ratio >= {5}))",
        stats, cfg.min_text_chars, channel, fmt_value(cfg.ratio_threshold_standard_output), quoted_list(other),
        fmt_value(cfg.ratio_threshold_other));
}

std::string text_bitcoin(const QuerySpec& spec, bool urls_only) {
    const auto& cfg = spec.text;
    std::string url_filter;
    std::string coinbase_url_filter;
    if (urls_only) {
        url_filter = fmt::format("\n    AND REGEXP_CONTAINS(SAFE_CONVERT_BYTES_TO_STRING(FROM_HEX(payload_hex)), r'{}')",
                                 url_pattern(spec.url));
        coinbase_url_filter = fmt::format(
            "\n  AND REGEXP_CONTAINS(SAFE_CONVERT_BYTES_TO_STRING(FROM_HEX(b.coinbase_param)), r'{}')",
            url_pattern(spec.url));
    }
    std::string out = header(spec);
    if (urls_only) {
        out += "-- Bitcoin URLs are read from the text detector's results: this is the text\n"
               "-- query with a URL predicate on the detected payloads.\n";
    }
    out += fmt::format("{}\n{}\n{}\n", kMutableHexUdf, kChannelUdf, kTextStatsUdf);
    out += "WITH " + btc_channel_payloads_cte() + ",\n";
    out += fmt::format(R"sql(text_hashes AS (
  SELECT DISTINCT hash
  FROM (SELECT hash, channel, payload_hex, text_stats(payload_hex) AS stats FROM payloads WHERE payload_hex != '')
  WHERE {}{}
)
)sql",
                       text_predicate("stats", "channel", cfg), url_filter);
    out += btc_transaction_rows("text_hashes");
    out += fmt::format(R"sql(
SELECT b.hash, b.timestamp, b.coinbase_param
FROM `{}` AS b
WHERE text_stats(b.coinbase_param).chars >= {}
  AND text_stats(b.coinbase_param).ratio >= {}{}
ORDER BY b.hash;
)sql",
                       kBtcBlocksTable, cfg.min_text_chars, fmt_value(cfg.ratio_threshold_other), coinbase_url_filter);
    return out;
}

std::string text_ethereum(const QuerySpec& spec) {
    const auto& cfg = spec.text;
    std::string out = header(spec);
    out += fmt::format("{}\n", kTextStatsUdf);
    out += fmt::format(R"sql(SELECT t.hash, t.block_timestamp, t.from_address, t.to_address, t.input
FROM `{}` AS t
WHERE t.input != '0x'
  AND text_stats(t.input).chars >= {}
  AND text_stats(t.input).ratio >= {}
ORDER BY t.hash;
)sql",
                       kEthTransactionsTable, cfg.min_text_chars, fmt_value(cfg.ratio_threshold_other));
    return out;
}

std::string url_ethereum(const QuerySpec& spec) {
    std::string out = header(spec);
    out += fmt::format(R"sql(SELECT t.hash, t.block_timestamp, t.from_address, t.to_address, t.input
FROM `{}` AS t
WHERE t.input != '0x'
  AND REGEXP_EXTRACT(SAFE_CONVERT_BYTES_TO_STRING(FROM_HEX(SUBSTR(t.input, 3))), r'{}') IS NOT NULL
ORDER BY t.hash;
)sql",
                       kEthTransactionsTable, url_pattern(spec.url));
    return out;
}

std::string file_bitcoin(const QuerySpec& spec) {
    auto pattern = signature_hex_pattern(spec.file_types);
    std::string out = header(spec);
    out += fmt::format("{}\n{}\n", kMutableHexUdf, kChannelUdf);
    out += "WITH " + btc_channel_payloads_cte() + ",\n";
    // Outputs are concatenated across channels; non-standard and P2SH inputs are scanned separately.
    out += fmt::format(R"sql(file_payloads AS (
  SELECT hash, STRING_AGG(mutable_hex(script_asm), '' ORDER BY pos) AS payload_hex
  FROM slots WHERE NOT is_input GROUP BY hash
  UNION ALL
  SELECT hash, payload_hex FROM payloads WHERE channel IN ('nonstandard_input', 'p2sh_input')
),
file_hashes AS (
  SELECT DISTINCT hash FROM file_payloads
  WHERE REGEXP_CONTAINS(payload_hex, r'{}')
)
)sql",
                       pattern);
    out += btc_transaction_rows("file_hashes");
    out += fmt::format(R"sql(
SELECT b.hash, b.timestamp, b.coinbase_param
FROM `{}` AS b
WHERE REGEXP_CONTAINS(LOWER(b.coinbase_param), r'{}')
ORDER BY b.hash;
)sql",
                       kBtcBlocksTable, pattern);
    return out;
}

std::string file_ethereum(const QuerySpec& spec) {
    std::string out = header(spec);
    out += "-- Block extra_data holds at most 32 bytes and cannot carry a file.\n";
    out += fmt::format(R"sql(SELECT t.hash, t.block_timestamp, t.from_address, t.to_address, t.input
FROM `{}` AS t
WHERE REGEXP_CONTAINS(LOWER(SUBSTR(t.input, 3)), r'{}')
ORDER BY t.hash;
)sql",
                       kEthTransactionsTable, signature_hex_pattern(spec.file_types));
    return out;
}

} // namespace

std::string_view to_string(Detector detector) {
    switch (detector) {
    case Detector::Text: return "text";
    case Detector::Url: return "url";
    case Detector::File: return "file";
    }
    return "unknown";
}

Detector detector_from_string(std::string_view text) {
    if (text == "text") return Detector::Text;
    if (text == "url") return Detector::Url;
    if (text == "file") return Detector::File;
    throw Error(fmt::format("unknown detector '{}'", text));
}

std::string signature_hex_pattern(std::span<const FileType> types) {
    constexpr std::size_t kMinCarve = FileScanConfig{}.min_carve_bytes;
    std::string alternatives;
    for (const auto& sig : signature_table()) {
        if (!types.empty() && std::find(types.begin(), types.end(), sig.file_type) == types.end()) continue;
        std::string alt;
        std::size_t end = 0;
        for (const auto& part : sig.magic) {
            if (part.offset > end) alt += fmt::format("[0-9a-f]{{{}}}", 2 * (part.offset - end));
            alt += bytes_to_hex(part.bytes);
            end = part.offset + part.bytes.size();
        }
        if (end < kMinCarve) alt += fmt::format("[0-9a-f]{{{}}}", 2 * (kMinCarve - end));
        if (!alternatives.empty()) alternatives += '|';
        alternatives += alt;
    }
    if (alternatives.empty()) throw UnsupportedQueryError("no file signatures selected");
    // Lazy whole-byte prefix keeps every match aligned to a byte boundary.
    return "^(?:[0-9a-f]{2})*?(?:" + alternatives + ")";
}

std::string url_pattern(const UrlScanConfig& cfg) {
    if (cfg.min_wildcard_chars == 0 || cfg.min_onion_label_chars == 0) {
        throw UnsupportedQueryError("URL pattern lengths must be positive");
    }
    return fmt::format(R"(((?:https?|ipfs)://[A-Za-z0-9\-._~:/?#\[\]@!$&\x27()*+,;=%]{{{},}}|[A-Za-z0-9]{{{},}}\.onion))",
                       cfg.min_wildcard_chars, cfg.min_onion_label_chars);
}

std::string emit(const QuerySpec& spec) {
    try {
        spec.text.validate();
    } catch (const Error& e) {
        throw UnsupportedQueryError(e.what());
    }
    if (spec.text.min_text_chars == 0) throw UnsupportedQueryError("min_text_chars must be positive");
    switch (spec.detector) {
    case Detector::Text: return spec.chain == Chain::Bitcoin ? text_bitcoin(spec, false) : text_ethereum(spec);
    case Detector::Url: return spec.chain == Chain::Bitcoin ? text_bitcoin(spec, true) : url_ethereum(spec);
    case Detector::File: return spec.chain == Chain::Bitcoin ? file_bitcoin(spec) : file_ethereum(spec);
    }
    throw UnsupportedQueryError("unknown detector");
}

std::string query_file_name(const QuerySpec& spec) {
    return fmt::format("{}_{}.sql", to_string(spec.detector), to_string(spec.chain));
}

} // namespace chainscan
