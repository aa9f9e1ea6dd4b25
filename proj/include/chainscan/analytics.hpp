#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>

#include "chainscan/filescan.hpp"
#include "chainscan/textscan.hpp"
#include "chainscan/timestamp.hpp"
#include "chainscan/urlscan.hpp"

// Aggregates are commutative monoids: shards can be folded independently and
// merged in any order with the same result as folding the whole stream.

namespace chainscan {

struct MonthlySeries {
    std::vector<std::pair<YearMonth, std::uint64_t>> points;  // strictly increasing, interior months zero-filled
    bool operator==(const MonthlySeries&) const = default;
};

using LengthHistogram = std::map<std::size_t, std::uint64_t>;

struct RankedTexts {
    std::vector<std::pair<std::string, std::uint64_t>> entries;  // occurrences desc, then text asc
    bool operator==(const RankedTexts&) const = default;
};

inline std::size_t chain_index(Chain chain) { return chain == Chain::Bitcoin ? 0 : 1; }

/// Per-type counts, columns indexed by chain_index. A finding increments every class it carries.
struct TypeSummary {
    std::map<TextualType, std::array<std::uint64_t, 2>> counts;
    bool operator==(const TypeSummary&) const = default;
};

struct UrlSummary {
    std::map<SchemeClass, std::array<std::uint64_t, 2>> counts;
    bool operator==(const UrlSummary&) const = default;
};

struct FileRow {
    std::uint64_t bitcoin = 0;
    std::uint64_t ethereum = 0;
    std::uint64_t embedded = 0;  // Ethereum only
    std::uint64_t injected = 0;  // Ethereum only

    std::uint64_t total() const { return bitcoin + ethereum; }
    bool operator==(const FileRow&) const = default;
};

struct FileSummary {
    std::map<FileType, FileRow> rows;
    bool operator==(const FileSummary&) const = default;
};

class TextAggregate {
public:
    void add(const TextFinding& finding);
    void merge(const TextAggregate& other);

    std::uint64_t count(std::optional<Chain> chain = std::nullopt) const;
    MonthlySeries monthly(std::optional<Chain> chain = std::nullopt) const;
    LengthHistogram lengths(std::optional<Chain> chain = std::nullopt) const;
    RankedTexts top(std::size_t n, std::optional<Chain> chain = std::nullopt) const;
    TypeSummary types() const;

    bool operator==(const TextAggregate&) const = default;

private:
    std::array<std::uint64_t, 2> count_{};
    std::array<std::map<YearMonth, std::uint64_t>, 2> months_;
    std::array<LengthHistogram, 2> lengths_;
    std::array<std::map<std::string, std::uint64_t>, 2> texts_;
    TypeSummary types_;
};

class UrlAggregate {
public:
    void add(const UrlFinding& finding);
    void merge(const UrlAggregate& other);
    const UrlSummary& summary() const { return summary_; }
    bool operator==(const UrlAggregate&) const = default;

private:
    UrlSummary summary_;
};

class FileAggregate {
public:
    void add(const FileFinding& finding);
    void merge(const FileAggregate& other);
    const FileSummary& summary() const { return summary_; }
    bool operator==(const FileAggregate&) const = default;

private:
    FileSummary summary_;
};

MonthlySeries monthly_frequency(std::span<const TextFinding> findings);
LengthHistogram length_histogram(std::span<const TextFinding> findings);
RankedTexts top_texts(std::span<const TextFinding> findings, std::size_t n);
TypeSummary type_summary(std::span<const TextFinding> findings);
FileSummary file_summary(std::span<const FileFinding> findings);
UrlSummary url_summary(std::span<const UrlFinding> findings);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view value);

/// Writes the CSV tables and plot-ready series files into `dir`; returns the paths written.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const TextAggregate& texts,
                                                const UrlAggregate& urls, const FileAggregate& files,
                                                std::size_t top_n = 10);

} // namespace chainscan
