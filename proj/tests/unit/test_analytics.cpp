#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chainscan/analytics.hpp"
#include "chainscan/timestamp.hpp"

using namespace chainscan;

namespace {

TextFinding text_at(std::string when, std::string text, Chain chain = Chain::Bitcoin,
                    std::set<TextualType> classes = {TextualType::Strings}) {
    TextFinding f;
    f.chain = chain;
    f.block_timestamp = parse_timestamp(when);
    f.text = std::move(text);
    f.classes = std::move(classes);
    return f;
}

TextFinding random_text(std::mt19937_64& rng) {
    static const std::vector<std::string> texts = {"a", "bb", "hello world", "\xe4\xb8\xad", "Bitzlato", "gm", "{\"k\":1}"};
    auto f = text_at("2015-01-01T00:00:00Z", texts[rng() % texts.size()], rng() % 2 ? Chain::Bitcoin : Chain::Ethereum);
    f.block_timestamp += std::chrono::hours(rng() % (24 * 365 * 3));
    f.classes.clear();
    f.classes.insert(rng() % 2 ? TextualType::Strings : TextualType::Texts);
    for (auto t : kAllTextualTypes) {
        if (t != TextualType::Strings && t != TextualType::Texts && rng() % 5 == 0) f.classes.insert(t);
    }
    return f;
}

UrlFinding random_url(std::mt19937_64& rng) {
    UrlFinding u;
    u.chain = rng() % 2 ? Chain::Bitcoin : Chain::Ethereum;
    u.scheme_class = static_cast<SchemeClass>(rng() % 3);
    return u;
}

FileFinding random_file(std::mt19937_64& rng) {
    FileFinding f;
    f.chain = rng() % 2 ? Chain::Bitcoin : Chain::Ethereum;
    f.file_type = kAllFileTypes[rng() % std::size(kAllFileTypes)];
    f.offset = rng() % 2 ? 0 : 68;
    if (f.chain == Chain::Ethereum) f.insertion_mode = f.offset == 0 ? InsertionMode::Embedded : InsertionMode::Injected;
    return f;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("monthly_frequency") {
    std::vector<TextFinding> f = {text_at("2017-06-01T00:00:00Z", "a"), text_at("2017-06-15T00:00:00Z", "a"),
                                  text_at("2017-06-30T23:59:59Z", "a"), text_at("2017-08-01T00:00:00Z", "a")};
    auto series = monthly_frequency(f);
    using P = std::pair<YearMonth, std::uint64_t>;
    CHECK(series.points == std::vector<P>{{{2017, 6}, 3}, {{2017, 7}, 0}, {{2017, 8}, 1}});
    CHECK(monthly_frequency(std::vector<TextFinding>{}).points.empty());
    f.resize(3);
    CHECK(monthly_frequency(f).points == std::vector<P>{{{2017, 6}, 3}});
    std::vector<TextFinding> wrap = {text_at("2017-12-31T00:00:00Z", "a"), text_at("2018-02-01T00:00:00Z", "a")};
    CHECK(monthly_frequency(wrap).points == std::vector<P>{{{2017, 12}, 1}, {{2018, 1}, 0}, {{2018, 2}, 1}});
}

TEST_CASE("length_histogram") {
    std::vector<TextFinding> f = {text_at("2017-06-01T00:00:00Z", "ab"), text_at("2017-06-01T00:00:00Z", "cd"),
                                  text_at("2017-06-01T00:00:00Z", "xyz")};
    CHECK(length_histogram(f) == LengthHistogram{{2, 2}, {3, 1}});
    CHECK(length_histogram(std::vector<TextFinding>{}).empty());
    std::vector<TextFinding> same(100, text_at("2017-06-01T00:00:00Z", "abcdefgh"));
    CHECK(length_histogram(same) == LengthHistogram{{8, 100}});
    // Lengths are in characters, not bytes.
    std::vector<TextFinding> cjk = {text_at("2017-06-01T00:00:00Z", "\xe4\xb8\xad\xe6\x96\x87")};
    CHECK(length_histogram(cjk) == LengthHistogram{{2, 1}});
}

TEST_CASE("top_texts") {
    auto t = [](const char* s) { return text_at("2017-06-01T00:00:00Z", s); };
    std::vector<TextFinding> f = {t("a"), t("a"), t("a"), t("b")};
    using E = std::pair<std::string, std::uint64_t>;
    CHECK(top_texts(f, 1).entries == std::vector<E>{{"a", 3}});
    CHECK(top_texts(f, 10).entries == std::vector<E>{{"a", 3}, {"b", 1}});
    std::vector<TextFinding> tie = {t("b"), t("a"), t("b"), t("a")};
    CHECK(top_texts(tie, 2).entries == std::vector<E>{{"a", 2}, {"b", 2}});
    CHECK(top_texts(f, 0).entries.empty());
}

TEST_CASE("type_summary") {
    std::vector<TextFinding> f = {text_at("2017-06-01T00:00:00Z", "see x", Chain::Bitcoin,
                                          {TextualType::Texts, TextualType::ContainUrl})};
    auto s = type_summary(f);
    CHECK(s.counts.at(TextualType::Texts)[0] == 1);
    CHECK(s.counts.at(TextualType::ContainUrl)[0] == 1);
    CHECK(s.counts.at(TextualType::Strings)[0] == 0);
    CHECK(s.counts.at(TextualType::Texts)[1] == 0);
    auto empty = type_summary(std::vector<TextFinding>{});
    CHECK(empty.counts.size() == std::size(kAllTextualTypes));
    for (const auto& [type, row] : empty.counts) CHECK(row == std::array<std::uint64_t, 2>{0, 0});
}

TEST_CASE("file and url summaries") {
    std::vector<FileFinding> files(3);
    for (auto& f : files) f.file_type = FileType::Png;
    files[0].insertion_mode = files[1].insertion_mode = InsertionMode::Embedded;
    files[2].insertion_mode = InsertionMode::Injected;
    files[2].offset = 68;
    auto s = file_summary(files);
    CHECK(s.rows.at(FileType::Png) == FileRow{0, 3, 2, 1});
    CHECK(s.rows.at(FileType::Png).total() == 3);
    CHECK(s.rows.at(FileType::Gif) == FileRow{});
    CHECK(file_summary(std::vector<FileFinding>{}).rows.size() == std::size(kAllFileTypes));

    UrlFinding onion;
    onion.scheme_class = SchemeClass::Onion;
    auto u = url_summary(std::vector<UrlFinding>{onion});
    CHECK(u.counts.at(SchemeClass::Onion)[1] == 1);
    CHECK(u.counts.at(SchemeClass::Http)[1] == 0);
}

TEST_CASE("sharded aggregation equals whole-stream aggregation") {
    std::mt19937_64 rng(43);
    std::vector<TextFinding> texts;
    std::vector<UrlFinding> urls;
    std::vector<FileFinding> files;
    for (int i = 0; i < 1000; ++i) {
        texts.push_back(random_text(rng));
        urls.push_back(random_url(rng));
        files.push_back(random_file(rng));
    }
    TextAggregate whole_t;
    UrlAggregate whole_u;
    FileAggregate whole_f;
    for (int i = 0; i < 1000; ++i) {
        whole_t.add(texts[i]);
        whole_u.add(urls[i]);
        whole_f.add(files[i]);
    }
    for (std::size_t shards : {2u, 3u, 7u, 64u}) {
        std::vector<TextAggregate> ts(shards);
        std::vector<UrlAggregate> us(shards);
        std::vector<FileAggregate> fs(shards);
        for (int i = 0; i < 1000; ++i) {
            auto s = rng() % shards;
            ts[s].add(texts[i]);
            us[s].add(urls[i]);
            fs[s].add(files[i]);
        }
        TextAggregate mt;
        UrlAggregate mu;
        FileAggregate mf;
        for (std::size_t s = shards; s-- > 0;) {
            mt.merge(ts[s]);
            mu.merge(us[s]);
            mf.merge(fs[s]);
        }
        CHECK(mt == whole_t);
        CHECK(mu == whole_u);
        CHECK(mf == whole_f);
    }

    // Marginals.
    CHECK(whole_t.count() == 1000);
    std::uint64_t month_total = 0;
    for (const auto& [m, c] : whole_t.monthly().points) month_total += c;
    CHECK(month_total == 1000);
    std::uint64_t length_total = 0;
    for (const auto& [l, c] : whole_t.lengths()) length_total += c;
    CHECK(length_total == 1000);
    auto types = whole_t.types();
    CHECK(types.counts.at(TextualType::Strings)[0] + types.counts.at(TextualType::Texts)[0] +
              types.counts.at(TextualType::Strings)[1] + types.counts.at(TextualType::Texts)[1] ==
          1000);
    std::uint64_t url_total = 0;
    for (const auto& [s, row] : whole_u.summary().counts) url_total += row[0] + row[1];
    CHECK(url_total == 1000);
    std::uint64_t file_total = 0, eth_total = 0, mode_total = 0;
    for (const auto& [t, row] : whole_f.summary().rows) {
        file_total += row.total();
        eth_total += row.ethereum;
        mode_total += row.embedded + row.injected;
    }
    CHECK(file_total == 1000);
    CHECK(mode_total == eth_total);
}

TEST_CASE("aggregation is order independent") {
    std::mt19937_64 rng(47);
    std::vector<TextFinding> texts;
    for (int i = 0; i < 300; ++i) texts.push_back(random_text(rng));
    auto base_top = top_texts(texts, 5);
    auto base_monthly = monthly_frequency(texts);
    auto base_types = type_summary(texts);
    for (int round = 0; round < 10; ++round) {
        std::shuffle(texts.begin(), texts.end(), rng);
        CHECK(top_texts(texts, 5) == base_top);
        CHECK(monthly_frequency(texts) == base_monthly);
        CHECK(type_summary(texts) == base_types);
    }
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("write_report emits the tables") {
    auto dir = std::filesystem::temp_directory_path() / "chainscan_report_test";
    std::filesystem::remove_all(dir);
    TextAggregate texts;
    texts.add(text_at("2017-06-01T00:00:00Z", "Bitzlato"));
    texts.add(text_at("2017-08-01T00:00:00Z", "Bitzlato"));
    UrlAggregate urls;
    FileAggregate files;
    auto written = write_report(dir, texts, urls, files);
    CHECK(written.size() >= 8);
    for (const auto& p : written) CHECK(std::filesystem::exists(p));
    CHECK(slurp(dir / "monthly_bitcoin.csv").find("2017-07,0") != std::string::npos);
    CHECK(slurp(dir / "top_texts_bitcoin.csv").find("Bitzlato,2") != std::string::npos);
    std::filesystem::remove_all(dir);
}
