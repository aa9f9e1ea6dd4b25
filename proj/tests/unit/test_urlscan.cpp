#include <doctest.h>

#include <cctype>
#include <optional>
#include <random>

#include "chainscan/urlscan.hpp"

using namespace chainscan;

namespace {

std::string find_str(std::string_view text, std::size_t min = 5) {
    auto f = find_url(as_bytes(text), min);
    return f ? f->url : std::string("<none>");
}

// Independent matcher: literal prefix search and a hand-written URL alphabet.
bool oracle_url_char(char c) {
    static const std::string extra = "-._~:/?#[]@!$&'()*+,;=%";
    return std::isalnum(static_cast<unsigned char>(c)) || extra.find(c) != std::string::npos;
}

std::optional<std::pair<std::size_t, std::string>> oracle_find(const std::string& text, std::size_t min) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        for (std::string prefix : {"http://", "https://", "ipfs://"}) {
            if (text.compare(i, prefix.size(), prefix) != 0) continue;
            std::size_t end = i + prefix.size();
            while (end < text.size() && oracle_url_char(text[end])) ++end;
            if (end - i - prefix.size() >= min) return std::pair{i, text.substr(i, end - i)};
        }
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("soar.earth concatenated parameters are swallowed") {
    std::string planted =
        "https://file.soar.earth/d4c4540faf449a9a729edbf9e60d3621.jpg/previewGhttps://api.soar.earth/v1/download/"
        "d4c4540faf449a9a729edbf9e60d3621.jpg+POINT(115.6315541267395";
    auto f = find_url(as_bytes(planted + " -31.9)"));
    REQUIRE(f);
    CHECK(f->url == planted);
    CHECK(f->url.size() > planted.find(".jpg") + 4);
}

TEST_CASE("wildcard length floor") {
    CHECK(find_str("see http://ab.cd") == "http://ab.cd");
    CHECK(find_str("see http://a.b") == "<none>");
    for (std::size_t n = 0; n < 10; ++n) {
        std::string text = "x http://" + std::string(n, 'w') + " y";
        auto expected = oracle_find(text, 5);
        CHECK((find_url(as_bytes(text)).has_value() == expected.has_value()));
    }
}

TEST_CASE("first match only") {
    auto f = find_url(as_bytes("http://example.org/x ... http://second.org/y"));
    REQUIRE(f);
    CHECK(f->url == "http://example.org/x");
    CHECK(f->offset == 0);
}

TEST_CASE("find_url agrees with an independent matcher") {
    std::mt19937_64 rng(17);
    const std::vector<std::string> pieces = {"http://", "https://", "ipfs://", "example.org", "/p", " ", "\x01",
                                             "%20", "a", "\"}", "\xff", "ab.cd", "?q=1&r=2"};
    for (int i = 0; i < 5000; ++i) {
        std::string text;
        for (int k = 0, n = static_cast<int>(rng() % 8); k < n; ++k) text += pieces[rng() % pieces.size()];
        auto expected = oracle_find(text, 5);
        auto got = find_url(as_bytes(text));
        REQUIRE(got.has_value() == expected.has_value());
        if (got) {
            CHECK(got->offset == expected->first);
            CHECK(got->url == expected->second);
        }
    }
}

TEST_CASE("first-match determinism under truncation") {
    std::mt19937_64 rng(23);
    const std::vector<std::string> pieces = {"http://", "ipfs://", "host.example", "/x", " ", "\n", "z.onion",
                                             "abcdefghijklmnopq", ".onion", "https://s.io/"};
    for (int i = 0; i < 3000; ++i) {
        std::string text;
        for (int k = 0, n = static_cast<int>(rng() % 10); k < n; ++k) text += pieces[rng() % pieces.size()];
        auto full = detect_url(as_bytes(text));
        if (!full.kept) continue;
        auto end = full.kept->offset + full.kept->url.size();
        auto truncated = detect_url(as_bytes(std::string_view(text).substr(0, end)));
        REQUIRE(truncated.kept);
        CHECK(truncated.kept->url == full.kept->url);
        CHECK(truncated.kept->offset == full.kept->offset);
    }
}

TEST_CASE("onion labels") {
    auto f = find_onion(as_bytes("visit abcdefghijklmnop.onion now"));
    REQUIRE(f);
    CHECK(f->url == "abcdefghijklmnop.onion");
    CHECK(f->offset == 6);
    CHECK_FALSE(find_onion(as_bytes("short.onion")));
    CHECK_FALSE(find_onion(as_bytes("abcdefghijklmno.onion")));  // 15

    std::mt19937_64 rng(29);
    const std::string base32 = "abcdefghijklmnopqrstuvwxyz234567";
    for (int i = 0; i < 200; ++i) {
        std::string label(56, 'a');
        for (auto& c : label) c = base32[rng() % base32.size()];
        std::string text = "mirror: " + label + ".onion/index";
        auto got = find_onion(as_bytes(text));
        REQUIRE(got);
        CHECK(got->url == label + ".onion");
        CHECK(got->offset == 8);
    }
}

TEST_CASE("validate_and_classify") {
    auto classify = [](std::string url) {
        UrlFinding raw;
        raw.url = std::move(url);
        return validate_and_classify(raw);
    };
    CHECK(classify("ipfs://bafybeigdyrzt5sfp7udm7hu76uh7y26nf3efuylqabf3oclgtqy55fbzdi/file").kept->scheme_class ==
          SchemeClass::Ipfs);
    CHECK(classify("https://example.org").kept->scheme_class == SchemeClass::Http);
    CHECK(classify("http://abcdefghijklmnop.onion/x").kept->scheme_class == SchemeClass::Onion);
    CHECK(classify("abcdefghijklmnop.onion").kept->scheme_class == SchemeClass::Onion);
    auto dropped = classify("https://x");
    CHECK_FALSE(dropped.kept);
    CHECK(dropped.dropped == UrlDropReason::NoDotInAuthority);
    auto artifact = classify("http://example.org/a\"}");
    REQUIRE(artifact.kept);
    CHECK(artifact.kept->url == "http://example.org/a\"}");
}

TEST_CASE("detect_url prefers the earliest match") {
    auto r = detect_url(as_bytes("abcdefghijklmnop.onion then http://example.org"));
    REQUIRE(r.kept);
    CHECK(r.kept->scheme_class == SchemeClass::Onion);
    r = detect_url(as_bytes("http://example.org then abcdefghijklmnop.onion"));
    REQUIRE(r.kept);
    CHECK(r.kept->scheme_class == SchemeClass::Http);
    CHECK_FALSE(detect_url(as_bytes("no links")).kept);
}

TEST_CASE("ethereum urls inside binary calldata") {
    Bytes input = {0xa9, 0x05, 0x9c, 0xbb, 0x00, 0x00};
    std::string url = "https://example.org/token/1.json";
    input.insert(input.end(), url.begin(), url.end());
    input.push_back(0x00);
    EthTransaction tx{"0x" + std::string(64, 'e'), {}, "0x" + std::string(40, 'c'), std::nullopt, input};
    auto r = scan_eth_urls(tx);
    REQUIRE(r.kept);
    CHECK(r.kept->url == url);
    CHECK(r.kept->offset == 6);
    CHECK(r.kept->chain == Chain::Ethereum);
    CHECK(r.kept->tx_hash == tx.hash);
}

TEST_CASE("bitcoin urls come from text findings") {
    TextFinding t;
    t.tx_hash = std::string(64, 'a');
    t.text = "see http://example.org/x";
    auto r = scan_btc_urls(std::vector<TextFinding>{t});
    REQUIRE(r.kept);
    CHECK(r.kept->chain == Chain::Bitcoin);
    CHECK(r.kept->offset == 4);
    CHECK_FALSE(scan_btc_urls(std::vector<TextFinding>{}).kept);
}

TEST_CASE("url alphabet") {
    for (char c : std::string("-._~:/?#[]@!$&'()*+,;=%")) CHECK(is_url_char(static_cast<std::uint8_t>(c)));
    for (char c : std::string(" \"<>\\^`{|}")) CHECK_FALSE(is_url_char(static_cast<std::uint8_t>(c)));
    CHECK_FALSE(is_url_char(0x80));
    for (auto s : {SchemeClass::Http, SchemeClass::Ipfs, SchemeClass::Onion}) CHECK(scheme_from_string(to_string(s)) == s);
}
