#pragma once

#include <optional>
#include <set>

#include "chainscan/btcscript.hpp"
#include "chainscan/ingest.hpp"

namespace chainscan {

struct DetectorConfig {
    double ratio_threshold_standard_output = 0.90;
    double ratio_threshold_other = 1.00;
    std::size_t min_text_chars = 2;
    /// Shortest even-length hex run that marks a text as ContainHex.
    std::size_t hex_min_chars = 16;
    /// Also scan StandardInput and P2shInput payloads (at the "other" threshold).
    bool include_standard_inputs = false;

    /// Throws Error if a threshold lies outside [0, 1].
    void validate() const;
};

enum class TextualType {
    Strings,
    Texts,
    ContainJson,
    ContainHex,
    ContainEmail,
    ContainUrl,
    ContainPgp,
    ContainHtmlXml,
    ContainDataUrl,
};

inline constexpr TextualType kAllTextualTypes[] = {
    TextualType::Strings,     TextualType::Texts,     TextualType::ContainJson,
    TextualType::ContainHex,  TextualType::ContainEmail, TextualType::ContainUrl,
    TextualType::ContainPgp,  TextualType::ContainHtmlXml, TextualType::ContainDataUrl,
};

std::string_view to_string(TextualType type);
TextualType textual_type_from_string(std::string_view text);

struct TextFinding {
    Chain chain = Chain::Bitcoin;
    std::string tx_hash;
    Timestamp block_timestamp{};
    InsertionChannel channel = InsertionChannel::OpReturnOutput;
    std::string text;  // raw payload bytes
    double ratio = 0.0;
    std::set<TextualType> classes;

    bool operator==(const TextFinding&) const = default;
};

/// Raised for inputs the ratio is not defined on.
class UndefinedInputError : public Error {
public:
    using Error::Error;
};

/// Fraction of bytes that belong to printable, validly encoded UTF-8 code points.
/// Throws UndefinedInputError on an empty payload.
double printable_ratio(ByteView payload);

/// Number of bytes counted as printable by printable_ratio.
std::size_t printable_bytes(ByteView payload) noexcept;

std::vector<TextFinding> scan_btc_text(const BtcTransaction& tx, const DetectorConfig& cfg = {});
std::optional<TextFinding> scan_coinbase_text(const BtcBlock& block, const DetectorConfig& cfg = {});
std::optional<TextFinding> scan_eth_text(const EthTransaction& tx, const DetectorConfig& cfg = {});

/// Threshold applied to a Bitcoin channel, or nullopt if the channel is not text-scanned.
std::optional<double> text_threshold(InsertionChannel channel, const DetectorConfig& cfg);

/// Runs the threshold and length rules over one payload.
std::optional<TextFinding> detect_text(ByteView payload, double threshold, const DetectorConfig& cfg);

std::set<TextualType> classify_text(std::string_view text, std::size_t hex_min_chars = 16);

struct DataUrl {
    std::string media_type;
    Bytes data;
    bool valid = true;  // false when the base64 payload is malformed
    std::size_t offset = 0;
};

std::vector<DataUrl> extract_data_urls(std::string_view text);

/// Standard base64 (RFC 4648) with optional padding; nullopt when malformed.
std::optional<Bytes> decode_base64(std::string_view text);

} // namespace chainscan
