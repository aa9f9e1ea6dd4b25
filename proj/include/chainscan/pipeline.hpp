#pragma once

#include <filesystem>

#include "chainscan/filescan.hpp"
#include "chainscan/sqlemit.hpp"
#include "chainscan/textscan.hpp"
#include "chainscan/urlscan.hpp"

// Record-sharded scanning over NDJSON exports. Lines are read in batches;
// each batch is split into contiguous shards scanned on up to `jobs` threads.
// Findings are put in canonical order before they are returned, so results
// do not depend on the parallelism cap.

namespace chainscan {

struct RunConfig {
    Chain chain = Chain::Bitcoin;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out_dir = "out";
    DetectorConfig text;
    UrlScanConfig url;
    FileScanConfig file;
    std::size_t jobs = 1;
    /// Per-record parse errors become fatal.
    bool strict = false;
    /// Write each file carve next to the findings file.
    bool write_carves = true;
    std::size_t batch_lines = 4096;
};

struct ScanStats {
    std::size_t records = 0;  // non-blank input lines
    std::size_t parse_errors = 0;
    std::size_t findings = 0;
    std::size_t dropped_urls = 0;
    std::vector<std::string> error_samples;  // first few per-record errors

    void merge(const ScanStats& other);
};

/// A per-record error under strict mode.
class StrictModeError : public Error {
public:
    using Error::Error;
};

template <typename Finding>
struct ScanOutput {
    std::vector<Finding> findings;
    ScanStats stats;
};

ScanOutput<TextFinding> scan_text_inputs(const RunConfig& cfg);
ScanOutput<UrlFinding> scan_url_inputs(const RunConfig& cfg);
ScanOutput<FileFinding> scan_file_inputs(const RunConfig& cfg);

// Canonical order: (tx_hash, offset, channel), then file type for files.
void canonical_sort(std::vector<TextFinding>& findings);
void canonical_sort(std::vector<UrlFinding>& findings);
void canonical_sort(std::vector<FileFinding>& findings);

/// Scans with `detector`, writes the findings file (and carves) into cfg.out_dir.
ScanStats run_scan(Detector detector, const RunConfig& cfg);

} // namespace chainscan
