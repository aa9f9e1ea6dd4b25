#pragma once

#include <filesystem>
#include <optional>

#include "chainscan/filescan.hpp"
#include "chainscan/textscan.hpp"
#include "chainscan/urlscan.hpp"

// NDJSON encodings of findings. Text findings carry payload_hex so arbitrary
// bytes survive the round trip; the "text" field is a display rendering with
// invalid UTF-8 replaced.

namespace chainscan {

std::string to_json_line(const TextFinding& finding);
std::string to_json_line(const UrlFinding& finding);
/// `carve_path` is recorded as given (relative to the findings file), or null.
std::string to_json_line(const FileFinding& finding, const std::optional<std::string>& carve_path);

TextFinding parse_text_finding(std::string_view line, std::size_t line_no = 0);
UrlFinding parse_url_finding(std::string_view line, std::size_t line_no = 0);

/// File findings read back without their bytes; `size` holds the carve length.
struct FileFindingRecord {
    FileFinding finding;
    std::size_t size = 0;
    std::optional<std::string> path;
};
FileFindingRecord parse_file_finding(std::string_view line, std::size_t line_no = 0);

template <typename T>
std::vector<T> read_ndjson(const std::filesystem::path& path, T (*parse)(std::string_view, std::size_t));

inline constexpr std::string_view kTextFindingsFile = "text_findings.ndjson";
inline constexpr std::string_view kUrlFindingsFile = "url_findings.ndjson";
inline constexpr std::string_view kFileFindingsFile = "file_findings.ndjson";

/// "<tx_hash>_<channel>_<offset>.<ext>"; a Bitcoin transaction can carry carves at the same offset of different payloads.
std::string carve_file_name(const FileFinding& finding);

} // namespace chainscan
