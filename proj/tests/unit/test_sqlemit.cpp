#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "chainscan/sqlemit.hpp"

using namespace chainscan;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in, "missing golden ", p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<QuerySpec> six_specs() {
    std::vector<QuerySpec> specs;
    for (auto d : {Detector::Text, Detector::Url, Detector::File}) {
        for (auto c : {Chain::Bitcoin, Chain::Ethereum}) {
            QuerySpec s;
            s.detector = d;
            s.chain = c;
            specs.push_back(s);
        }
    }
    return specs;
}

// Counts "(" that open a capturing group: unescaped, outside a bracket class, not followed by '?'.
std::size_t capture_groups(std::string_view pattern) {
    std::size_t groups = 0;
    bool in_class = false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        char c = pattern[i];
        if (c == '\\') {
            ++i;
        } else if (in_class) {
            if (c == ']') in_class = false;
        } else if (c == '[') {
            in_class = true;
        } else if (c == '(' && (i + 1 >= pattern.size() || pattern[i + 1] != '?')) {
            ++groups;
        }
    }
    return groups;
}

} // namespace

TEST_CASE("queries match the checked-in goldens") {
    for (const auto& spec : six_specs()) {
        auto path = std::filesystem::path(CHAINSCAN_GOLDEN_DIR) / "sql" / query_file_name(spec);
        CHECK_MESSAGE(emit(spec) == slurp(path), path.string());
    }
}

TEST_CASE("emission is deterministic") {
    for (const auto& spec : six_specs()) CHECK(emit(spec) == emit(spec));
}

TEST_CASE("queries reference the public tables") {
    for (const auto& spec : six_specs()) {
        auto sql = emit(spec);
        auto table = spec.chain == Chain::Bitcoin ? kBtcTransactionsTable : kEthTransactionsTable;
        CHECK(sql.find(table) != std::string::npos);
    }
    QuerySpec text_eth{Detector::Text, Chain::Ethereum, {}, {}, {}};
    CHECK(emit(text_eth).find("input") != std::string::npos);
    QuerySpec text_btc{Detector::Text, Chain::Bitcoin, {}, {}, {}};
    CHECK(emit(text_btc).find(kBtcBlocksTable) != std::string::npos);
}

TEST_CASE("configured thresholds appear verbatim") {
    QuerySpec spec{Detector::Text, Chain::Bitcoin, {}, {}, {}};
    spec.text.ratio_threshold_standard_output = 0.85;
    spec.text.ratio_threshold_other = 0.97;
    auto sql = emit(spec);
    CHECK(sql.find("0.85") != std::string::npos);
    CHECK(sql.find("0.97") != std::string::npos);
    auto defaults = emit(QuerySpec{Detector::Text, Chain::Bitcoin, {}, {}, {}});
    CHECK(defaults.find("0.9") != std::string::npos);
    spec.text.ratio_threshold_other = 2.0;
    CHECK_THROWS_AS(emit(spec), UnsupportedQueryError);
}

TEST_CASE("file queries contain the magic hex") {
    QuerySpec png{Detector::File, Chain::Bitcoin, {}, {}, {FileType::Png}};
    auto sql = emit(png);
    CHECK(sql.find("89504e470d0a1a0a") != std::string::npos);
    CHECK(sql.find("377abcaf271c") == std::string::npos);
    CHECK(emit(QuerySpec{Detector::File, Chain::Ethereum, {}, {}, {}}).find("377abcaf271c") != std::string::npos);
}

TEST_CASE("bitcoin url query notes the text pass-through") {
    auto sql = emit(QuerySpec{Detector::Url, Chain::Bitcoin, {}, {}, {}});
    CHECK(sql.find("text") != std::string::npos);
    CHECK(sql.find("REGEXP") != std::string::npos);
}

TEST_CASE("patterns have at most one capturing group") {
    CHECK(capture_groups(url_pattern({})) == 1);
    CHECK(capture_groups(signature_hex_pattern({})) == 0);
    for (auto t : kAllFileTypes) {
        FileType one[] = {t};
        CHECK(capture_groups(signature_hex_pattern(one)) == 0);
    }
    UrlScanConfig cfg{7, 20};
    auto pattern = url_pattern(cfg);
    CHECK(pattern.find("{7,}") != std::string::npos);
    CHECK(pattern.find("{20,}") != std::string::npos);
}

TEST_CASE("url pattern behaves like the local matcher on simple inputs") {
    std::regex re(url_pattern({}), std::regex::ECMAScript);
    std::smatch m;
    std::string text = "see https://example.org/x now";
    REQUIRE(std::regex_search(text, m, re));
    CHECK(m[1] == "https://example.org/x");
    text = "see abcdefghijklmnop.onion";
    REQUIRE(std::regex_search(text, m, re));
    CHECK(m[1] == "abcdefghijklmnop.onion");
    text = "http://a.b";
    CHECK_FALSE(std::regex_search(text, m, re));
}

TEST_CASE("signature pattern is byte aligned") {
    FileType png[] = {FileType::Png};
    std::regex re(signature_hex_pattern(png), std::regex::ECMAScript);
    std::string hex = "ab89504e470d0a1a0a" + std::string(80, '0');
    CHECK(std::regex_search(hex, re));
    std::string misaligned = "a89504e470d0a1a0a" + std::string(80, '0');
    CHECK_FALSE(std::regex_search(misaligned, re));
}

TEST_CASE("names") {
    CHECK(query_file_name(QuerySpec{Detector::Url, Chain::Ethereum, {}, {}, {}}) == "url_ethereum.sql");
    for (auto d : {Detector::Text, Detector::Url, Detector::File}) CHECK(detector_from_string(to_string(d)) == d);
}
