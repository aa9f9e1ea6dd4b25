#pragma once

#include <optional>

#include "chainscan/common.hpp"
#include "chainscan/ingest.hpp"
#include "chainscan/textscan.hpp"

namespace chainscan {

/// HTTPS is counted under Http.
enum class SchemeClass { Http, Ipfs, Onion };

std::string_view to_string(SchemeClass scheme);
SchemeClass scheme_from_string(std::string_view text);

struct UrlFinding {
    Chain chain = Chain::Ethereum;
    std::string tx_hash;
    Timestamp block_timestamp{};
    std::string url;
    SchemeClass scheme_class = SchemeClass::Http;
    std::size_t offset = 0;  // byte offset of the match within the scanned payload

    bool operator==(const UrlFinding&) const = default;
};

struct UrlScanConfig {
    std::size_t min_wildcard_chars = 5;
    std::size_t min_onion_label_chars = 16;
};

/// RFC 3986 unreserved + reserved characters, plus '%'.
bool is_url_char(std::uint8_t c) noexcept;

/// First "http://", "https://" or "ipfs://" followed by at least
/// `min_wildcard_chars` URL characters. The match runs greedily to the last
/// URL character, so concatenated parameters are swallowed into it.
std::optional<UrlFinding> find_url(ByteView payload, std::size_t min_wildcard_chars = 5);

/// First "<label>.onion" whose alphanumeric label run is at least `min_label_chars` long.
std::optional<UrlFinding> find_onion(ByteView payload, std::size_t min_label_chars = 16);

enum class UrlDropReason { UnknownScheme, ForbiddenCharacter, EmptyAuthority, NoDotInAuthority };

std::string_view to_string(UrlDropReason reason);

struct UrlValidation {
    std::optional<UrlFinding> kept;
    std::optional<UrlDropReason> dropped;
};

/// Assigns the scheme class (".onion" hosts become Onion) and drops hopeless
/// matches. Trailing artifacts such as `"}` are kept.
UrlValidation validate_and_classify(UrlFinding raw);

/// Earliest of find_url / find_onion, validated. At most one finding per payload.
UrlValidation detect_url(ByteView payload, const UrlScanConfig& cfg = {});

/// Ethereum: the raw input field, including binary contract calls.
UrlValidation scan_eth_urls(const EthTransaction& tx, const UrlScanConfig& cfg = {});

/// Bitcoin: the text findings of one transaction (or one coinbase), first match only.
UrlValidation scan_btc_urls(std::span<const TextFinding> findings, const UrlScanConfig& cfg = {});

} // namespace chainscan
