#include <doctest.h>

#include <random>

#include "chainscan/hex.hpp"
#include "chainscan/timestamp.hpp"

using namespace chainscan;
using namespace std::chrono;

TEST_CASE("hex_to_bytes decodes with and without prefix") {
    CHECK(hex_to_bytes("0x68656c6c6f") == to_bytes("hello"));
    CHECK(hex_to_bytes("68656C6C6F") == to_bytes("hello"));
    CHECK(hex_to_bytes("").empty());
    CHECK(hex_to_bytes("0x").empty());
}

TEST_CASE("hex_to_bytes rejects odd length and non-hex") {
    CHECK_THROWS_AS(hex_to_bytes("0x1"), DecodeError);
    CHECK_THROWS_AS(hex_to_bytes("zz"), DecodeError);
    CHECK_THROWS_AS(hex_to_bytes("0xzz"), DecodeError);
    CHECK_THROWS_AS(hex_to_bytes("12 4"), DecodeError);
}

TEST_CASE("hex round trip over random byte strings") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Bytes bytes(rng() % 100);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        auto hex = bytes_to_hex(bytes);
        CHECK(hex.size() == 2 * bytes.size());
        CHECK(hex_to_bytes(hex) == bytes);
    }
}

TEST_CASE("timestamps in ISO and BigQuery renderings") {
    auto expected = Timestamp{sys_days{2017y / June / 1} + 12h};
    CHECK(parse_timestamp("2017-06-01T12:00:00Z") == expected);
    CHECK(parse_timestamp("2017-06-01 12:00:00 UTC") == expected);
    CHECK(parse_timestamp("2017-06-01T12:00:00") == expected);
    CHECK(parse_timestamp("2017-06-01T14:00:00+02:00") == expected);
    CHECK(parse_timestamp("2017-06-01 12:00:00+00") == expected);
    CHECK(parse_timestamp("2017-06-01T12:00:00.5Z") == expected + 500ms);
    CHECK(parse_timestamp("2017-06-01T12:00:00.1234567Z") == expected + 123456us);
    CHECK_THROWS_AS(parse_timestamp("2017-13-01T00:00:00Z"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("yesterday"), ParseError);
}

TEST_CASE("format_timestamp round trips") {
    auto ts = Timestamp{sys_days{2020y / February / 29} + 23h + 59min + 58s + 250us};
    CHECK(format_timestamp(ts) == "2020-02-29T23:59:58.000250Z");
    CHECK(parse_timestamp(format_timestamp(ts)) == ts);
    CHECK(format_timestamp(Timestamp{sys_days{2009y / January / 3}}) == "2009-01-03T00:00:00Z");
}

TEST_CASE("year-month stepping") {
    YearMonth dec{2017, 12};
    CHECK(dec.next() == YearMonth{2018, 1});
    CHECK(YearMonth{2017, 6}.to_string() == "2017-06");
    CHECK(year_month_of(parse_timestamp("2017-08-31T23:59:59Z")) == YearMonth{2017, 8});
    CHECK(YearMonth{2017, 6} < YearMonth{2017, 7});
}

TEST_CASE("chain names") {
    CHECK(to_string(Chain::Bitcoin) == "bitcoin");
    CHECK(chain_from_string("ethereum") == Chain::Ethereum);
    CHECK_THROWS_AS(chain_from_string("dogecoin"), Error);
}
