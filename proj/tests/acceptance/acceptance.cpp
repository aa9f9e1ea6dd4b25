// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "chainscan/analytics.hpp"
#include "chainscan/corpusgen.hpp"
#include "chainscan/findings_io.hpp"
#include "chainscan/hex.hpp"
#include "chainscan/pipeline.hpp"
#include "chainscan/sqlemit.hpp"
#include "chainscan/timestamp.hpp"
#include "oracles/printable_walk.hpp"

using namespace chainscan;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kRoundTripMaxSeconds = 30.0;
constexpr std::size_t kRoundTripRecords = 10000;
constexpr std::size_t kNoiseRecords = 100000;
constexpr double kNoiseSigmas = 3.0;
constexpr std::uint64_t kNoiseSeed = 20230517;
constexpr std::size_t kMonoidFindings = 1000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / fmt::format("chainscan_acceptance_{}", name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<fs::path> inputs_for(const fs::path& corpus, Chain chain) {
    if (chain == Chain::Bitcoin) return {corpus / kBtcTransactionsFile, corpus / kBtcBlocksFile};
    return {corpus / kEthTransactionsFile, corpus / kEthBlocksFile};
}

std::size_t hardware_jobs() { return std::max(2u, std::thread::hardware_concurrency()); }

// Runs the three detectors on both chains into out/<chain>.
void scan_all(const fs::path& corpus, const fs::path& out, std::size_t jobs, std::size_t batch_lines = 4096) {
    for (auto chain : {Chain::Bitcoin, Chain::Ethereum}) {
        RunConfig cfg;
        cfg.chain = chain;
        cfg.inputs = inputs_for(corpus, chain);
        cfg.out_dir = out / std::string(to_string(chain));
        cfg.jobs = jobs;
        cfg.batch_lines = batch_lines;
        for (auto d : {Detector::Text, Detector::Url, Detector::File}) run_scan(d, cfg);
    }
}

Outcome corpus_round_trip() {
    PlantCounts counts;  // 240 texts, 32 URLs, one round of every sample file
    auto base = generate(1, counts, 0).record_count();
    auto corpus_data = generate(1, counts, kRoundTripRecords > base ? kRoundTripRecords - base : 0);
    auto dir = scratch("roundtrip");
    write_corpus(corpus_data, dir / "corpus");

    auto start = std::chrono::steady_clock::now();
    scan_all(dir / "corpus", dir / "out", hardware_jobs());
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::map<std::string, std::vector<TextFinding>> texts;
    std::map<std::string, std::vector<UrlFinding>> urls;
    std::map<std::string, std::vector<FileFindingRecord>> files;
    for (auto chain : {"bitcoin", "ethereum"}) {
        auto out = dir / "out" / chain;
        for (auto& f : read_ndjson(out / kTextFindingsFile, &parse_text_finding)) texts[f.tx_hash].push_back(f);
        for (auto& f : read_ndjson(out / kUrlFindingsFile, &parse_url_finding)) urls[f.tx_hash].push_back(f);
        for (auto& r : read_ndjson(out / kFileFindingsFile, &parse_file_finding)) {
            files[r.finding.tx_hash].push_back(r);
        }
    }

    std::size_t plants = 0, recovered = 0;
    std::map<PlantKind, std::size_t> by_kind;
    std::set<InsertionChannel> text_channels;
    std::set<SchemeClass> schemes;
    std::set<std::pair<FileType, InsertionMode>> eth_modes;
    std::vector<std::string> misses;
    for (const auto& e : corpus_data.manifest) {
        ++plants;
        ++by_kind[e.kind];
        bool ok = false;
        switch (e.kind) {
        case PlantKind::Text:
            text_channels.insert(e.channel);
            for (const auto& f : texts[e.tx_hash]) {
                ok |= f.chain == e.chain && f.channel == e.channel && as_bytes(f.text).size() == e.payload.size() &&
                      std::equal(e.payload.begin(), e.payload.end(), as_bytes(f.text).begin()) && f.classes == e.classes;
            }
            break;
        case PlantKind::Url:
            schemes.insert(*e.scheme_class);
            for (const auto& f : urls[e.tx_hash]) {
                ok |= f.chain == e.chain && f.url == to_string(e.payload) && f.offset == e.offset &&
                      f.scheme_class == e.scheme_class;
            }
            break;
        case PlantKind::File:
            if (e.insertion_mode) eth_modes.insert({*e.file_type, *e.insertion_mode});
            for (const auto& r : files[e.tx_hash]) {
                const auto& f = r.finding;
                if (f.chain != e.chain || f.channel != e.channel || f.offset != e.offset || f.file_type != e.file_type ||
                    f.insertion_mode != e.insertion_mode || f.valid != ValidationStatus::Validated || !r.path) {
                    continue;
                }
                auto carve = slurp(dir / "out" / std::string(to_string(e.chain)) / *r.path);
                ok |= to_bytes(carve) == e.payload;
            }
            break;
        }
        if (ok) {
            ++recovered;
        } else if (misses.size() < 3) {
            misses.push_back(fmt::format("{} {} {}", to_string(e.kind), to_string(e.channel), e.tx_hash));
        }
    }

    bool coverage = by_kind[PlantKind::Text] >= 200 && by_kind[PlantKind::Url] >= 30 && text_channels.size() == 6 &&
                    schemes.size() == 3;
    for (auto t : kAllFileTypes) {
        coverage &= eth_modes.count({t, InsertionMode::Embedded}) && eth_modes.count({t, InsertionMode::Injected});
    }
    fs::remove_all(dir);
    Outcome o;
    o.pass = coverage && recovered == plants && seconds < kRoundTripMaxSeconds &&
             corpus_data.record_count() >= kRoundTripRecords;
    o.detail = fmt::format("recall {}/{} (texts {}, urls {}, files {}), {} records in {:.2f}s (limit {}s)", recovered,
                           plants, by_kind[PlantKind::Text], by_kind[PlantKind::Url], by_kind[PlantKind::File],
                           corpus_data.record_count(), seconds, kRoundTripMaxSeconds);
    if (!coverage) o.detail += "; plant coverage incomplete";
    for (const auto& m : misses) o.detail += "; missed " + m;
    return o;
}

bool oracle_detects(ByteView payload) {
    if (payload.empty()) return false;
    auto w = oracle::walk(payload);
    return w.printable_bytes == payload.size() && w.characters >= 2;
}

Outcome noise_precision() {
    auto corpus_data = generate(kNoiseSeed, PlantCounts{0, 0, 0}, kNoiseRecords);
    auto dir = scratch("noise");
    write_corpus(corpus_data, dir);

    // Oracle over the same records: every payload scanned at the 100% threshold.
    DetectorConfig cfg;
    std::size_t candidates = 0, expected = 0;
    auto consider = [&](ByteView payload) {
        if (payload.empty()) return;
        ++candidates;
        expected += oracle_detects(payload);
    };
    for (const auto& tx : corpus_data.btc_transactions) {
        for (const auto& p : channel_payloads(tx).payloads) {
            if (text_threshold(p.channel, cfg) == 1.0) consider(p.bytes);
        }
    }
    for (const auto& b : corpus_data.btc_blocks) consider(b.coinbase);
    for (const auto& tx : corpus_data.eth_transactions) consider(tx.input);

    std::size_t observed = 0, validated_files = 0, file_candidates = 0;
    for (auto chain : {Chain::Bitcoin, Chain::Ethereum}) {
        RunConfig rc;
        rc.chain = chain;
        rc.inputs = inputs_for(dir, chain);
        rc.jobs = hardware_jobs();
        for (const auto& f : scan_text_inputs(rc).findings) {
            if (chain == Chain::Ethereum || text_threshold(f.channel, cfg) == 1.0) ++observed;
        }
        for (const auto& f : scan_file_inputs(rc).findings) {
            ++file_candidates;
            validated_files += f.valid == ValidationStatus::Validated;
        }
    }
    fs::remove_all(dir);

    double p = candidates ? static_cast<double>(expected) / static_cast<double>(candidates) : 0.0;
    double sigma = std::max(1.0, std::sqrt(static_cast<double>(candidates) * p * (1.0 - p)));
    double deviation = std::abs(static_cast<double>(observed) - static_cast<double>(expected));
    Outcome o;
    o.pass = validated_files == 0 && deviation <= kNoiseSigmas * sigma && corpus_data.record_count() == kNoiseRecords;
    o.detail = fmt::format("{} records: {} validated files ({} candidates); text at 100% channels {} vs oracle {} "
                           "over {} payloads (sigma {:.2f}, |d| {:.0f} <= {}sigma)",
                           corpus_data.record_count(), validated_files, file_candidates, observed, expected, candidates,
                           sigma, deviation, kNoiseSigmas);
    return o;
}

Outcome threshold_behavior() {
    Bytes payload(20, 'A');
    payload[4] = 0x01;
    payload[15] = 0x02;  // 18 of 20 bytes printable
    auto p2pkh = "OP_DUP OP_HASH160 " + bytes_to_hex(payload) + " OP_EQUALVERIFY OP_CHECKSIG";
    BtcTransaction standard{std::string(64, 'a'), {}, {}, {{p2pkh, "pubkeyhash"}}};
    BtcTransaction op_return{std::string(64, 'b'), {}, {}, {{"OP_RETURN " + bytes_to_hex(payload), "nulldata"}}};
    BtcTransaction nonstandard{std::string(64, 'c'), {}, {}, {{bytes_to_hex(payload) + " OP_DROP", "nonstandard"}}};
    auto a = scan_btc_text(standard);
    auto b = scan_btc_text(op_return);
    auto c = scan_btc_text(nonstandard);
    bool detected = a.size() == 1 && a[0].channel == InsertionChannel::StandardOutput && a[0].ratio == 0.9;
    Outcome o;
    o.pass = detected && b.empty() && c.empty();
    o.detail = fmt::format("ratio {:.2f}: standard_output {} finding(s), op_return_output {}, nonstandard_output {}",
                           printable_ratio(payload), a.size(), b.size(), c.size());
    return o;
}

Outcome url_limitations() {
    const std::string match =
        "https://file.soar.earth/d4c4540faf449a9a729edbf9e60d3621.jpg/previewGhttps://api.soar.earth/v1/download/"
        "d4c4540faf449a9a729edbf9e60d3621.jpg+POINT(115.6315541267395";
    // Concatenated string parameters inside a contract call.
    Bytes call = {0x3f, 0x1c, 0x7d, 0x2a};
    call.resize(4 + 64, 0);
    auto tail = to_bytes(match + " -31.9512)");
    call.insert(call.end(), tail.begin(), tail.end());
    call.resize(call.size() + 9, 0);
    EthTransaction tx{"0x" + std::string(64, 'd'), {}, "0x" + std::string(40, 'e'), std::nullopt, call};
    auto soar = scan_eth_urls(tx);
    bool greedy = soar.kept && soar.kept->url == match && soar.kept->offset == 68 &&
                  soar.kept->url.size() > soar.kept->url.find(".jpg") + 4;

    auto two = to_bytes("first http://example.org/x and then http://second.org/y");
    EthTransaction tx2{"0x" + std::string(64, 'f'), {}, "0x" + std::string(40, 'e'), std::nullopt, two};
    auto first_eth = scan_eth_urls(tx2);
    BtcTransaction btc{std::string(64, 'a'), {}, {}, {{"OP_RETURN " + bytes_to_hex(two), "nulldata"}}};
    auto first_btc = scan_btc_urls(scan_btc_text(btc));
    bool first_only = first_eth.kept && first_eth.kept->url == "http://example.org/x" && first_btc.kept &&
                      first_btc.kept->url == "http://example.org/x";

    Outcome o;
    o.pass = greedy && first_only;
    o.detail = fmt::format("greedy match {} ({} chars); two-URL payload -> '{}' / '{}'", greedy ? "exact" : "wrong",
                           soar.kept ? soar.kept->url.size() : 0, first_eth.kept ? first_eth.kept->url : "none",
                           first_btc.kept ? first_btc.kept->url : "none");
    return o;
}

Outcome classification_fixtures() {
    using TT = TextualType;
    const std::vector<std::pair<std::string, std::set<TT>>> fixtures = {
        {"Bitzlato", {TT::Strings}},
        {"503: Bitcoin over capacity!", {TT::Texts}},
        {"\"2265861855@qq.com\"}", {TT::Strings, TT::ContainEmail}},
    };
    std::size_t ok = 0;
    std::string detail;
    for (const auto& [text, expected] : fixtures) {
        auto direct = classify_text(text);
        BtcTransaction tx{std::string(64, '1'), {}, {}, {{"OP_RETURN " + bytes_to_hex(as_bytes(text)), "nulldata"}}};
        auto found = scan_btc_text(tx);
        bool pass = direct == expected && found.size() == 1 && found[0].classes == expected;
        ok += pass;
        std::string names;
        for (auto t : direct) names += (names.empty() ? "" : "+") + std::string(to_string(t));
        detail += fmt::format("{}'{}' -> {}", detail.empty() ? "" : "; ", text, names);
    }
    return {ok == fixtures.size(), detail};
}

Outcome eth_extra_data() {
    std::mt19937_64 rng(77);
    std::size_t findings = 0, blocks = 0;
    EthBlock block{"0x" + std::string(64, '2'), {}, {}};
    // Random fills, then every signature's magic placed at every offset that fits.
    for (int i = 0; i < 100000; ++i) {
        block.extra_data.resize(rng() % 33);
        for (auto& b : block.extra_data) b = static_cast<std::uint8_t>(rng());
        findings += scan_eth_block_files(block).size();
        ++blocks;
    }
    for (const auto& sig : signature_table()) {
        for (std::size_t shift = 0; shift < 32; ++shift) {
            block.extra_data.assign(32, 0);
            for (const auto& part : sig.magic) {
                for (std::size_t k = 0; k < part.bytes.size(); ++k) {
                    if (shift + part.offset + k < 32) block.extra_data[shift + part.offset + k] = part.bytes[k];
                }
            }
            findings += scan_eth_block_files(block).size();
            ++blocks;
        }
    }
    // And through the pipeline over generated block records.
    auto dir = scratch("extra_data");
    write_corpus(generate(5, {}, 5000), dir);
    RunConfig rc;
    rc.chain = Chain::Ethereum;
    rc.inputs = {dir / kEthBlocksFile};
    auto scanned = scan_file_inputs(rc);
    fs::remove_all(dir);
    findings += scanned.findings.size();
    blocks += scanned.stats.records;
    return {findings == 0, fmt::format("{} file findings over {} extra_data fields of at most 32 bytes", findings, blocks)};
}

Outcome analytics_monoid() {
    std::mt19937_64 rng(1000);
    const std::vector<std::string> pool = {"gm", "hello world", "Bitzlato", "\xe4\xb8\xad\xe6\x96\x87", "a b c", "{\"x\":1}"};
    std::vector<TextFinding> texts(kMonoidFindings);
    std::vector<UrlFinding> urls(kMonoidFindings);
    std::vector<FileFinding> files(kMonoidFindings);
    auto t0 = parse_timestamp("2013-01-01T00:00:00Z");
    for (std::size_t i = 0; i < kMonoidFindings; ++i) {
        auto& t = texts[i];
        t.chain = rng() % 2 ? Chain::Bitcoin : Chain::Ethereum;
        t.block_timestamp = t0 + std::chrono::hours(rng() % (24 * 365 * 8));
        t.text = pool[rng() % pool.size()];
        t.classes = {rng() % 2 ? TextualType::Strings : TextualType::Texts};
        if (rng() % 3 == 0) t.classes.insert(kAllTextualTypes[2 + rng() % 7]);
        urls[i].chain = rng() % 2 ? Chain::Bitcoin : Chain::Ethereum;
        urls[i].scheme_class = static_cast<SchemeClass>(rng() % 3);
        files[i].chain = rng() % 2 ? Chain::Bitcoin : Chain::Ethereum;
        files[i].file_type = kAllFileTypes[rng() % std::size(kAllFileTypes)];
        if (files[i].chain == Chain::Ethereum) {
            files[i].insertion_mode = rng() % 2 ? InsertionMode::Embedded : InsertionMode::Injected;
        }
    }
    TextAggregate wt;
    UrlAggregate wu;
    FileAggregate wf;
    for (std::size_t i = 0; i < kMonoidFindings; ++i) {
        wt.add(texts[i]);
        wu.add(urls[i]);
        wf.add(files[i]);
    }
    bool merged_equal = true;
    for (std::size_t shards : {2u, 5u, 16u, 1000u}) {
        std::vector<TextAggregate> st(shards);
        std::vector<UrlAggregate> su(shards);
        std::vector<FileAggregate> sf(shards);
        for (std::size_t i = 0; i < kMonoidFindings; ++i) {
            auto s = rng() % shards;
            st[s].add(texts[i]);
            su[s].add(urls[i]);
            sf[s].add(files[i]);
        }
        TextAggregate mt;
        UrlAggregate mu;
        FileAggregate mf;
        std::vector<std::size_t> order(shards);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (auto s : order) {
            mt.merge(st[s]);
            mu.merge(su[s]);
            mf.merge(sf[s]);
        }
        merged_equal &= mt == wt && mu == wu && mf == wf;
    }

    std::uint64_t month_sum = 0, length_sum = 0, primary_sum = 0, url_sum = 0, file_sum = 0, eth_files = 0,
                  mode_sum = 0, top_sum = 0;
    for (const auto& [m, c] : wt.monthly().points) month_sum += c;
    for (const auto& [l, c] : wt.lengths()) length_sum += c;
    for (const auto& [type, row] : wt.types().counts) {
        if (type == TextualType::Strings || type == TextualType::Texts) primary_sum += row[0] + row[1];
    }
    for (const auto& [text, c] : wt.top(pool.size()).entries) top_sum += c;
    for (const auto& [s, row] : wu.summary().counts) url_sum += row[0] + row[1];
    for (const auto& [t, row] : wf.summary().rows) {
        file_sum += row.total();
        eth_files += row.ethereum;
        mode_sum += row.embedded + row.injected;
    }
    bool marginals = month_sum == kMonoidFindings && length_sum == kMonoidFindings &&
                     primary_sum == kMonoidFindings && top_sum == kMonoidFindings && url_sum == kMonoidFindings &&
                     file_sum == kMonoidFindings && mode_sum == eth_files && wt.count() == kMonoidFindings;
    return {merged_equal && marginals,
            fmt::format("shard merges {}; marginals months={} lengths={} strings+texts={} urls={} files={} "
                        "(embedded+injected {} of {} ethereum)",
                        merged_equal ? "equal" : "differ", month_sum, length_sum, primary_sum, url_sum, file_sum,
                        mode_sum, eth_files)};
}

Outcome sql_goldens() {
    std::size_t matched = 0, literals = 0, total = 0;
    std::string detail;
    for (auto d : {Detector::Text, Detector::Url, Detector::File}) {
        for (auto c : {Chain::Bitcoin, Chain::Ethereum}) {
            QuerySpec spec;
            spec.detector = d;
            spec.chain = c;
            ++total;
            auto sql = emit(spec);
            auto golden = slurp(fs::path(CHAINSCAN_GOLDEN_DIR) / "sql" / query_file_name(spec));
            matched += sql == golden;
            std::vector<std::string> needles;
            if (d == Detector::Text || (d == Detector::Url && c == Chain::Bitcoin)) {
                needles.push_back(fmt::format(">= {}", spec.text.ratio_threshold_other));
                if (c == Chain::Bitcoin) needles.push_back(fmt::format(">= {}", spec.text.ratio_threshold_standard_output));
            }
            if (d == Detector::Url) {
                needles.push_back(fmt::format("{{{},}}", spec.url.min_wildcard_chars));
                needles.push_back(fmt::format("{{{},}}", spec.url.min_onion_label_chars));
            }
            if (d == Detector::File) needles = {"89504e470d0a1a0a", "377abcaf271c", "ffd8ff"};
            bool all = std::all_of(needles.begin(), needles.end(),
                                   [&](const std::string& n) { return sql.find(n) != std::string::npos; });
            literals += all;
            if (sql != golden || !all) detail += fmt::format(" {}", query_file_name(spec));
        }
    }
    return {matched == total && literals == total,
            fmt::format("{}/{} match goldens, {}/{} contain their literals{}", matched, total, literals, total,
                        detail.empty() ? "" : "; failing:" + detail)};
}

Outcome determinism() {
    auto dir = scratch("determinism");
    write_corpus(generate(9, {}, 3000), dir / "corpus");
    scan_all(dir / "corpus", dir / "serial", 1);
    scan_all(dir / "corpus", dir / "parallel", 8, 97);
    std::size_t files = 0, identical = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "serial")) {
        if (!entry.is_regular_file()) continue;
        ++files;
        auto other = dir / "parallel" / fs::relative(entry.path(), dir / "serial");
        identical += fs::exists(other) && slurp(entry.path()) == slurp(other);
    }
    std::size_t parallel_files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "parallel")) parallel_files += entry.is_regular_file();
    fs::remove_all(dir);
    return {files > 6 && identical == files && parallel_files == files,
            fmt::format("{}/{} output files byte-identical between jobs=1 and jobs=8 (batch 97)", identical, files)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"corpus round-trip", corpus_round_trip},
        {"noise precision", noise_precision},
        {"threshold behavior", threshold_behavior},
        {"url limitations", url_limitations},
        {"classification fixtures", classification_fixtures},
        {"ethereum extra_data files", eth_extra_data},
        {"analytics monoid", analytics_monoid},
        {"sql goldens", sql_goldens},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failed += !o.pass;
        fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed;
}
