#include "chainscan/analytics.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>

#include "chainscan/ingest.hpp"
#include "chainscan/unicode.hpp"

namespace chainscan {

namespace {

template <typename Map>
void add_all(Map& into, const Map& from) {
    for (const auto& [key, value] : from) into[key] += value;
}

template <typename Map>
Map select(const std::array<Map, 2>& per_chain, std::optional<Chain> chain) {
    if (chain) return per_chain[chain_index(*chain)];
    Map out = per_chain[0];
    add_all(out, per_chain[1]);
    return out;
}

constexpr Chain kChains[] = {Chain::Bitcoin, Chain::Ethereum};

} // namespace

void TextAggregate::add(const TextFinding& finding) {
    auto c = chain_index(finding.chain);
    ++count_[c];
    ++months_[c][year_month_of(finding.block_timestamp)];
    ++lengths_[c][unicode::char_count(as_bytes(finding.text))];
    ++texts_[c][finding.text];
    for (auto type : finding.classes) ++types_.counts[type][c];
}

void TextAggregate::merge(const TextAggregate& other) {
    for (std::size_t c = 0; c < 2; ++c) {
        count_[c] += other.count_[c];
        add_all(months_[c], other.months_[c]);
        add_all(lengths_[c], other.lengths_[c]);
        add_all(texts_[c], other.texts_[c]);
    }
    for (const auto& [type, counts] : other.types_.counts) {
        auto& mine = types_.counts[type];
        mine[0] += counts[0];
        mine[1] += counts[1];
    }
}

std::uint64_t TextAggregate::count(std::optional<Chain> chain) const {
    return chain ? count_[chain_index(*chain)] : count_[0] + count_[1];
}

MonthlySeries TextAggregate::monthly(std::optional<Chain> chain) const {
    auto months = select(months_, chain);
    MonthlySeries series;
    if (months.empty()) return series;
    auto last = months.rbegin()->first;
    for (auto ym = months.begin()->first; ym <= last; ym = ym.next()) {
        auto it = months.find(ym);
        series.points.emplace_back(ym, it == months.end() ? 0 : it->second);
    }
    return series;
}

LengthHistogram TextAggregate::lengths(std::optional<Chain> chain) const { return select(lengths_, chain); }

RankedTexts TextAggregate::top(std::size_t n, std::optional<Chain> chain) const {
    auto texts = select(texts_, chain);
    RankedTexts ranked;
    ranked.entries.assign(texts.begin(), texts.end());
    std::stable_sort(ranked.entries.begin(), ranked.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.entries.size() > n) ranked.entries.resize(n);
    return ranked;
}

TypeSummary TextAggregate::types() const {
    TypeSummary out = types_;
    for (auto type : kAllTextualTypes) out.counts.try_emplace(type, std::array<std::uint64_t, 2>{});
    return out;
}

void UrlAggregate::add(const UrlFinding& finding) { ++summary_.counts[finding.scheme_class][chain_index(finding.chain)]; }

void UrlAggregate::merge(const UrlAggregate& other) {
    for (const auto& [scheme, counts] : other.summary_.counts) {
        auto& mine = summary_.counts[scheme];
        mine[0] += counts[0];
        mine[1] += counts[1];
    }
}

void FileAggregate::add(const FileFinding& finding) {
    auto& row = summary_.rows[finding.file_type];
    if (finding.chain == Chain::Bitcoin) {
        ++row.bitcoin;
    } else {
        ++row.ethereum;
        if (finding.insertion_mode == InsertionMode::Embedded) ++row.embedded;
        if (finding.insertion_mode == InsertionMode::Injected) ++row.injected;
    }
}

void FileAggregate::merge(const FileAggregate& other) {
    for (const auto& [type, row] : other.summary_.rows) {
        auto& mine = summary_.rows[type];
        mine.bitcoin += row.bitcoin;
        mine.ethereum += row.ethereum;
        mine.embedded += row.embedded;
        mine.injected += row.injected;
    }
}

MonthlySeries monthly_frequency(std::span<const TextFinding> findings) {
    TextAggregate agg;
    for (const auto& f : findings) agg.add(f);
    return agg.monthly();
}

LengthHistogram length_histogram(std::span<const TextFinding> findings) {
    TextAggregate agg;
    for (const auto& f : findings) agg.add(f);
    return agg.lengths();
}

RankedTexts top_texts(std::span<const TextFinding> findings, std::size_t n) {
    TextAggregate agg;
    for (const auto& f : findings) agg.add(f);
    return agg.top(n);
}

TypeSummary type_summary(std::span<const TextFinding> findings) {
    TextAggregate agg;
    for (const auto& f : findings) agg.add(f);
    return agg.types();
}

FileSummary file_summary(std::span<const FileFinding> findings) {
    FileAggregate agg;
    for (const auto& f : findings) agg.add(f);
    auto out = agg.summary();
    for (auto type : kAllFileTypes) out.rows.try_emplace(type);
    return out;
}

UrlSummary url_summary(std::span<const UrlFinding> findings) {
    UrlAggregate agg;
    for (const auto& f : findings) agg.add(f);
    auto out = agg.summary();
    for (auto scheme : {SchemeClass::Http, SchemeClass::Ipfs, SchemeClass::Onion}) {
        out.counts.try_emplace(scheme, std::array<std::uint64_t, 2>{});
    }
    return out;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const TextAggregate& texts,
                                                const UrlAggregate& urls, const FileAggregate& files,
                                                std::size_t top_n) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::string& name) {
        auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
        written.push_back(path);
        return out;
    };

    {
        auto out = open("text_types.csv");
        out << "type,total,bitcoin,ethereum\n";
        for (const auto& [type, counts] : texts.types().counts) {
            out << to_string(type) << ',' << counts[0] + counts[1] << ',' << counts[0] << ',' << counts[1] << '\n';
        }
    }
    for (auto chain : kChains) {
        auto suffix = std::string(to_string(chain));
        {
            auto out = open("top_texts_" + suffix + ".csv");
            out << "rank,text,occurrences\n";
            std::size_t rank = 0;
            for (const auto& [text, n] : texts.top(top_n, chain).entries) out << ++rank << ',' << csv_field(text) << ',' << n << '\n';
        }
        {
            auto out = open("monthly_" + suffix + ".csv");
            for (const auto& [ym, n] : texts.monthly(chain).points) out << ym.to_string() << ',' << n << '\n';
        }
        {
            auto out = open("text_lengths_" + suffix + ".csv");
            for (const auto& [length, n] : texts.lengths(chain)) out << length << ',' << n << '\n';
        }
    }
    {
        auto out = open("url_types.csv");
        out << "type,total,bitcoin,ethereum\n";
        std::array<std::uint64_t, 2> sum{};
        auto summary = urls.summary();
        for (auto scheme : {SchemeClass::Http, SchemeClass::Ipfs, SchemeClass::Onion}) {
            auto counts = summary.counts[scheme];
            sum[0] += counts[0];
            sum[1] += counts[1];
            out << to_string(scheme) << ',' << counts[0] + counts[1] << ',' << counts[0] << ',' << counts[1] << '\n';
        }
        out << "sum," << sum[0] + sum[1] << ',' << sum[0] << ',' << sum[1] << '\n';
    }
    {
        auto summary = files.summary();
        auto btc = open("file_types_bitcoin.csv");
        auto eth = open("file_types_ethereum.csv");
        btc << "type,total\n";
        eth << "type,total,embedded,injected\n";
        FileRow sum;
        for (auto type : kAllFileTypes) {
            auto row = summary.rows[type];
            sum.bitcoin += row.bitcoin;
            sum.ethereum += row.ethereum;
            sum.embedded += row.embedded;
            sum.injected += row.injected;
            btc << to_string(type) << ',' << row.bitcoin << '\n';
            eth << to_string(type) << ',' << row.ethereum << ',' << row.embedded << ',' << row.injected << '\n';
        }
        btc << "sum," << sum.bitcoin << '\n';
        eth << "sum," << sum.ethereum << ',' << sum.embedded << ',' << sum.injected << '\n';
    }
    return written;
}

} // namespace chainscan
