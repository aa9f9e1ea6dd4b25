#pragma once

#include <vector>

#include "chainscan/filescan.hpp"
#include "chainscan/textscan.hpp"
#include "chainscan/urlscan.hpp"

// Renders detector configurations as BigQuery Standard SQL scripts over the
// public blockchain datasets. The scripts select candidate records in the
// ingest schema; the local scanner then does exact detection on the results.

namespace chainscan {

enum class Detector { Text, Url, File };

std::string_view to_string(Detector detector);
Detector detector_from_string(std::string_view text);

struct QuerySpec {
    Detector detector = Detector::Text;
    Chain chain = Chain::Bitcoin;
    DetectorConfig text;
    UrlScanConfig url;
    /// File signatures to search for; empty means every supported type.
    std::vector<FileType> file_types;
};

class UnsupportedQueryError : public Error {
public:
    using Error::Error;
};

inline constexpr std::string_view kBtcTransactionsTable = "bigquery-public-data.crypto_bitcoin.transactions";
inline constexpr std::string_view kBtcBlocksTable = "bigquery-public-data.crypto_bitcoin.blocks";
inline constexpr std::string_view kEthTransactionsTable = "bigquery-public-data.crypto_ethereum.transactions";
inline constexpr std::string_view kEthBlocksTable = "bigquery-public-data.crypto_ethereum.blocks";

/// Deterministic query text. Patterns use at most one capturing group.
/// Throws UnsupportedQueryError for an invalid configuration.
std::string emit(const QuerySpec& spec);

/// "<detector>_<chain>.sql"
std::string query_file_name(const QuerySpec& spec);

/// Byte-aligned regular expression over lowercase hex matching any of the
/// signatures of `types` (all types when empty). No capturing groups.
std::string signature_hex_pattern(std::span<const FileType> types);

/// URL pattern for REGEXP_EXTRACT: one capturing group around the whole match.
std::string url_pattern(const UrlScanConfig& cfg);

} // namespace chainscan
