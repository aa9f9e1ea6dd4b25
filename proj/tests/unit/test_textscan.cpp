#include <doctest.h>

#include <random>

#include "chainscan/hex.hpp"
#include "chainscan/textscan.hpp"
#include "chainscan/unicode.hpp"
#include "oracles/printable_walk.hpp"

using namespace chainscan;

namespace {

struct FrozenRow {
    const char* hex;
    std::size_t printable;
};

const FrozenRow kFrozen[] = {
#include "frozen_printable.inc"
};

std::size_t oracle_printable(ByteView b) { return oracle::walk(b).printable_bytes; }

Bytes random_payload(std::mt19937_64& rng) {
    Bytes out(1 + rng() % 96);
    // Mix uniform bytes with ASCII and multi-byte lead/continuation bytes.
    for (auto& b : out) {
        switch (rng() % 4) {
        case 0: b = static_cast<std::uint8_t>(rng()); break;
        case 1: b = static_cast<std::uint8_t>(0x20 + rng() % 95); break;
        case 2: b = static_cast<std::uint8_t>(0x80 + rng() % 64); break;
        default: b = static_cast<std::uint8_t>(0xC0 + rng() % 64); break;
        }
    }
    return out;
}

BtcTransaction tx_with_output(const std::string& script, const std::string& type) {
    return {std::string(64, 'a'), {}, {}, {{script, type}}};
}

EthTransaction eth_tx(Bytes input) {
    return {"0x" + std::string(64, 'b'), {}, "0x" + std::string(40, 'c'), std::nullopt, std::move(input)};
}

using TT = TextualType;

} // namespace

TEST_CASE("unicode tables match the frozen version") {
    CHECK(std::string(unicode::kUnicodeVersion) == "13.0.0");
}

TEST_CASE("printable code points per plane match unicodedata 13.0.0") {
    // Frozen from Python's unicodedata with the same category rule.
    const std::size_t expected[17] = {61841, 22279, 60866, 4939, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 337, 65534, 65534};
    for (char32_t plane = 0; plane < 17; ++plane) {
        std::size_t count = 0;
        for (char32_t cp = plane * 0x10000; cp < (plane + 1) * 0x10000; ++cp) count += unicode::is_printable(cp);
        CHECK_MESSAGE(count == expected[plane], "plane ", static_cast<unsigned>(plane));
    }
}

TEST_CASE("printable_ratio basics") {
    CHECK(printable_ratio(as_bytes("hello")) == 1.0);
    Bytes half = {0, 0, 0, 0, 'h', 'e', 'l', 'l'};
    CHECK(printable_ratio(half) == 0.5);
    CHECK(printable_ratio(as_bytes("tab\tnew\nline\r")) == 1.0);
    CHECK(printable_ratio(as_bytes("\xe4\xb8\xad\xe6\x96\x87")) == 1.0);  // CJK
    CHECK(printable_ratio(as_bytes("\xed\xa0\x80")) == 0.0);              // encoded surrogate
    CHECK(printable_ratio(as_bytes("\xc0\xaf")) == 0.0);                  // overlong
    CHECK_THROWS_AS(printable_ratio(Bytes{}), UndefinedInputError);
}

TEST_CASE("printable_bytes matches frozen oracle rows") {
    for (const auto& row : kFrozen) {
        auto bytes = hex_to_bytes(row.hex);
        CHECK_MESSAGE(printable_bytes(bytes) == row.printable, row.hex);
    }
}

TEST_CASE("printable_bytes agrees with the character walk on 10^5 random payloads") {
    std::mt19937_64 rng(2024);
    std::size_t mismatches = 0;
    for (int i = 0; i < 100000; ++i) {
        auto payload = random_payload(rng);
        if (printable_bytes(payload) != oracle_printable(payload)) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("scan_btc_text thresholds") {
    SUBCASE("OP_RETURN Hello World") {
        auto found = scan_btc_text(tx_with_output("OP_RETURN " + bytes_to_hex(as_bytes("Hello World")), "nulldata"));
        REQUIRE(found.size() == 1);
        CHECK(found[0].channel == InsertionChannel::OpReturnOutput);
        CHECK(found[0].ratio == 1.0);
        CHECK(found[0].text == "Hello World");
    }
    SUBCASE("OP_RETURN with one zero byte among 20") {
        Bytes payload(20, 'x');
        payload[7] = 0;
        CHECK(scan_btc_text(tx_with_output("OP_RETURN " + bytes_to_hex(payload), "nulldata")).empty());
    }
    SUBCASE("standard output at exactly 90 percent") {
        Bytes payload(20, 'A');
        payload[3] = 0x01;
        payload[12] = 0x02;
        std::string script = "OP_DUP OP_HASH160 " + bytes_to_hex(payload) + " OP_EQUALVERIFY OP_CHECKSIG";
        auto found = scan_btc_text(tx_with_output(script, "pubkeyhash"));
        REQUIRE(found.size() == 1);
        CHECK(found[0].channel == InsertionChannel::StandardOutput);
        CHECK(found[0].ratio == doctest::Approx(0.9));
        payload[5] = 0x03;
        script = "OP_DUP OP_HASH160 " + bytes_to_hex(payload) + " OP_EQUALVERIFY OP_CHECKSIG";
        CHECK(scan_btc_text(tx_with_output(script, "pubkeyhash")).empty());
    }
    SUBCASE("standard inputs excluded by default") {
        BtcTransaction tx{std::string(64, 'a'), {}, {{bytes_to_hex(as_bytes("printable")), "pubkeyhash"}}, {}};
        CHECK(scan_btc_text(tx).empty());
        DetectorConfig cfg;
        cfg.include_standard_inputs = true;
        CHECK(scan_btc_text(tx, cfg).size() == 1);
    }
    SUBCASE("single characters are below min_text_chars") {
        CHECK(scan_btc_text(tx_with_output("OP_RETURN 41", "nulldata")).empty());
    }
}

TEST_CASE("scan_coinbase_text") {
    BtcBlock block{std::string(64, 'd'), {}, to_bytes("/Foundry USA Pool/")};
    auto found = scan_coinbase_text(block);
    REQUIRE(found);
    CHECK(found->channel == InsertionChannel::CoinbaseInput);
    block.coinbase = Bytes{0x03, 0x4f, 0x2a, 0x0b};
    auto tail = to_bytes("/Foundry USA Pool/");
    block.coinbase.insert(block.coinbase.end(), tail.begin(), tail.end());
    CHECK_FALSE(scan_coinbase_text(block));
    block.coinbase.clear();
    CHECK_FALSE(scan_coinbase_text(block));
}

TEST_CASE("scan_eth_text") {
    auto found = scan_eth_text(eth_tx(to_bytes("BFX_REFILL_SWEEP")));
    REQUIRE(found);
    CHECK(found->channel == InsertionChannel::EthInput);
    CHECK(found->chain == Chain::Ethereum);
    CHECK(found->classes == std::set<TT>{TT::Strings});
    CHECK_FALSE(scan_eth_text(eth_tx({})));
    Bytes call = {0xa9, 0x05, 0x9c, 0xbb};
    auto tail = to_bytes("printable tail");
    call.insert(call.end(), tail.begin(), tail.end());
    CHECK_FALSE(scan_eth_text(eth_tx(call)));
}

TEST_CASE("threshold monotonicity") {
    std::mt19937_64 rng(5);
    const double thresholds[] = {0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0};
    for (int round = 0; round < 2000; ++round) {
        auto payload = random_payload(rng);
        if (rng() % 2) {
            for (auto& b : payload) {
                if (rng() % 8) b = static_cast<std::uint8_t>('a' + rng() % 26);
            }
        }
        DetectorConfig cfg;
        bool previous = true;
        for (double t : thresholds) {
            bool found = detect_text(payload, t, cfg).has_value();
            CHECK_FALSE((found && !previous));
            previous = found;
        }
    }
}

TEST_CASE("classify_text fixtures") {
    CHECK(classify_text("Bitzlato") == std::set<TT>{TT::Strings});
    CHECK(classify_text("503: Bitcoin over capacity!") == std::set<TT>{TT::Texts});
    CHECK(classify_text("\"2265861855@qq.com\"}") == std::set<TT>{TT::Strings, TT::ContainEmail});
}

TEST_CASE("classify_text categories") {
    CHECK(classify_text("{\"a\":1}").count(TT::ContainJson));
    CHECK_FALSE(classify_text("[1,2,3]").count(TT::ContainJson));
    CHECK_FALSE(classify_text("{}").count(TT::ContainJson));
    CHECK(classify_text("id:0123456789abcdef").count(TT::ContainHex));
    CHECK_FALSE(classify_text("id:0123456789abcde").count(TT::ContainHex));   // 15 chars
    CHECK_FALSE(classify_text("id:0123456789abcdef0").count(TT::ContainHex)); // odd run
    CHECK(classify_text("visit https://example.org now").count(TT::ContainUrl));
    CHECK(classify_text("ipfs://bafybeigdyrzt").count(TT::ContainUrl));
    CHECK(classify_text("<b>bold</b>").count(TT::ContainHtmlXml));
    CHECK_FALSE(classify_text("<b>bold</i>").count(TT::ContainHtmlXml));
    CHECK(classify_text("-----BEGIN PGP SIGNATURE-----\nabc\n-----END PGP SIGNATURE-----").count(TT::ContainPgp));
    CHECK_FALSE(classify_text("-----BEGIN PGP SIGNATURE----- only").count(TT::ContainPgp));
    CHECK(classify_text("data:image/gif;base64,R0lGODlhAQABAAAAACw=").count(TT::ContainDataUrl));
}

TEST_CASE("classify_text emits exactly one of Strings and Texts") {
    std::mt19937_64 rng(9);
    const std::string alphabet = "ab {}\"@.:/<>-\t\n0123456789";
    for (int i = 0; i < 3000; ++i) {
        std::string text(rng() % 40, ' ');
        for (auto& c : text) c = alphabet[rng() % alphabet.size()];
        auto classes = classify_text(text);
        CHECK(classes.count(TT::Strings) + classes.count(TT::Texts) == 1);
    }
}

TEST_CASE("data URLs") {
    auto urls = extract_data_urls("x data:image/gif;base64,R0lGODlhAQABAAAAACw= y");
    REQUIRE(urls.size() == 1);
    CHECK(urls[0].media_type == "image/gif");
    CHECK(urls[0].valid);
    // Decoded with Python's base64 module.
    CHECK(urls[0].data == hex_to_bytes("474946383961010001000000002c"));
    CHECK(urls[0].offset == 2);
    CHECK(extract_data_urls("nothing here").empty());
    auto broken = extract_data_urls("data:image/png;base64,iVBOR=w");
    REQUIRE(broken.size() == 1);
    CHECK_FALSE(broken[0].valid);
}

TEST_CASE("decode_base64") {
    CHECK(decode_base64("aGVsbG8=") == to_bytes("hello"));
    CHECK(decode_base64("aGVsbG8") == to_bytes("hello"));
    CHECK(decode_base64("") == Bytes{});
    CHECK_FALSE(decode_base64("a"));
    CHECK_FALSE(decode_base64("aGV*bG8="));
}

TEST_CASE("config validation and type names") {
    DetectorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.ratio_threshold_other = 1.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    for (auto t : kAllTextualTypes) CHECK(textual_type_from_string(to_string(t)) == t);
}
