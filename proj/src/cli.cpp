#include "chainscan/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>

#include "chainscan/analytics.hpp"
#include "chainscan/corpusgen.hpp"
#include "chainscan/findings_io.hpp"
#include "chainscan/ingest.hpp"
#include "chainscan/liveness.hpp"
#include "chainscan/pipeline.hpp"
#include "chainscan/sqlemit.hpp"

namespace chainscan::cli {

namespace {

namespace fs = std::filesystem;

std::string default_out_dir() {
    const char* env = std::getenv(kOutEnv);
    return env && *env ? env : "out";
}

struct DetectorOptions {
    DetectorConfig text;
    UrlScanConfig url;
    FileScanConfig file;
};

void add_text_flags(CLI::App* cmd, DetectorConfig& text) {
    cmd->add_option("--std-threshold", text.ratio_threshold_standard_output,
                    "printable ratio threshold for standard outputs")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threshold", text.ratio_threshold_other, "printable ratio threshold for the other channels")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--min-chars", text.min_text_chars, "shortest reported text, in characters");
    cmd->add_option("--hex-min", text.hex_min_chars, "shortest hex run that marks contain_hex");
    cmd->add_flag("--include-standard-inputs", text.include_standard_inputs,
                  "also scan standard and P2SH inputs for text");
}

void add_url_flags(CLI::App* cmd, UrlScanConfig& url) {
    cmd->add_option("--min-wildcard", url.min_wildcard_chars, "URL characters required after the scheme");
    cmd->add_option("--min-onion-label", url.min_onion_label_chars, "shortest onion label");
}

struct ScanCommand {
    explicit ScanCommand(Detector d) : detector(d) {}

    Detector detector;
    RunConfig cfg;
    std::string chain;
    bool no_carves = false;
    CLI::App* app = nullptr;
};

void add_scan_command(CLI::App& app, ScanCommand& sc, const std::string& name, const std::string& description) {
    auto* cmd = app.add_subcommand(name, description);
    sc.app = cmd;
    sc.cfg.out_dir = default_out_dir();
    cmd->add_option("--chain", sc.chain, "bitcoin or ethereum")->required()->check(CLI::IsMember({"bitcoin", "ethereum"}));
    cmd->add_option("--input", sc.cfg.inputs, "NDJSON export, optionally .gz (repeatable)")->required();
    cmd->add_option("--out", sc.cfg.out_dir, fmt::format("output directory (default ${} or ./out)", kOutEnv));
    cmd->add_option("--jobs", sc.cfg.jobs, "parallelism cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--strict", sc.cfg.strict, "treat per-record parse errors as fatal");
    if (sc.detector != Detector::File) add_text_flags(cmd, sc.cfg.text);
    if (sc.detector == Detector::Url) add_url_flags(cmd, sc.cfg.url);
    if (sc.detector == Detector::File) {
        cmd->add_option("--min-carve", sc.cfg.file.min_carve_bytes, "shortest carve reported, in bytes");
        cmd->add_flag("--no-carves", sc.no_carves, "do not write carved files");
    }
}

int do_scan(ScanCommand& sc, std::ostream& out, std::ostream& err) {
    sc.cfg.chain = chain_from_string(sc.chain);
    sc.cfg.write_carves = !sc.no_carves;
    auto stats = run_scan(sc.detector, sc.cfg);
    out << fmt::format("{}: {} records, {} findings, {} parse errors", sc.app->get_name(), stats.records,
                       stats.findings, stats.parse_errors);
    if (sc.detector == Detector::Url) out << fmt::format(", {} dropped urls", stats.dropped_urls);
    out << '\n';
    for (const auto& e : stats.error_samples) err << "warning: " << e << '\n';
    return kExitOk;
}

struct ReportCommand {
    std::vector<std::string> in_dirs;
    std::string out_dir;
    std::size_t top = 10;
    bool include_unvalidated = false;
};

int do_report(const ReportCommand& rc, std::ostream& out) {
    TextAggregate texts;
    UrlAggregate urls;
    FileAggregate files;
    std::size_t n_text = 0, n_url = 0, n_file = 0;
    for (const auto& dir : rc.in_dirs) {
        fs::path base(dir);
        if (!fs::is_directory(base)) throw IoError(fmt::format("findings directory '{}' does not exist", dir));
        if (auto p = base / kTextFindingsFile; fs::exists(p)) {
            for (const auto& f : read_ndjson(p, &parse_text_finding)) {
                texts.add(f);
                ++n_text;
            }
        }
        if (auto p = base / kUrlFindingsFile; fs::exists(p)) {
            for (const auto& f : read_ndjson(p, &parse_url_finding)) {
                urls.add(f);
                ++n_url;
            }
        }
        if (auto p = base / kFileFindingsFile; fs::exists(p)) {
            // Only structurally valid files count as viewable unless asked otherwise.
            for (const auto& r : read_ndjson(p, &parse_file_finding)) {
                if (!rc.include_unvalidated && r.finding.valid != ValidationStatus::Validated) continue;
                files.add(r.finding);
                ++n_file;
            }
        }
    }
    auto written = write_report(rc.out_dir, texts, urls, files, rc.top);
    out << fmt::format("report: {} texts, {} urls, {} {}files; {} tables in {}\n", n_text, n_url, n_file,
                       rc.include_unvalidated ? "" : "validated ", written.size(), rc.out_dir);
    return kExitOk;
}

struct CorpusCommand {
    std::uint64_t seed = 1;
    std::string out_dir;
    PlantCounts counts;
    std::size_t noise = 0;
};

int do_gen_corpus(const CorpusCommand& cc, std::ostream& out) {
    auto corpus = generate(cc.seed, cc.counts, cc.noise);
    write_corpus(corpus, cc.out_dir);
    out << fmt::format("gen-corpus: {} records, {} plants in {}\n", corpus.record_count(), corpus.manifest.size(),
                       cc.out_dir);
    return kExitOk;
}

struct SqlCommand {
    std::string out_dir;
    std::vector<std::string> detectors;
    std::vector<std::string> chains;
    std::vector<std::string> file_types;
    DetectorOptions options;
};

int do_emit_sql(const SqlCommand& sq, std::ostream& out) {
    std::vector<Detector> detectors;
    for (const auto& d : sq.detectors) detectors.push_back(detector_from_string(d));
    if (detectors.empty()) detectors = {Detector::Text, Detector::Url, Detector::File};
    std::vector<Chain> chains;
    for (const auto& c : sq.chains) chains.push_back(chain_from_string(c));
    if (chains.empty()) chains = {Chain::Bitcoin, Chain::Ethereum};
    std::vector<FileType> types;
    for (const auto& t : sq.file_types) types.push_back(file_type_from_string(t));

    auto dir = fs::path(sq.out_dir) / "queries";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    std::size_t n = 0;
    for (auto detector : detectors) {
        for (auto chain : chains) {
            QuerySpec spec{detector, chain, sq.options.text, sq.options.url, types};
            auto path = dir / query_file_name(spec);
            std::ofstream file(path, std::ios::binary);
            file << emit(spec);
            if (!file) throw IoError(fmt::format("cannot write '{}'", path.string()));
            ++n;
        }
    }
    out << fmt::format("emit-sql: {} queries in {}\n", n, dir.string());
    return kExitOk;
}

struct LinksCommand {
    std::vector<std::string> inputs;
    std::string out_dir;
    bool allow_network = false;
    std::size_t jobs = 4;
    int timeout_ms = 5000;
    std::string ipfs_gateway = LivenessOptions{}.ipfs_gateway;
};

int do_check_links(const LinksCommand& lc, std::ostream& out, std::ostream& err) {
    if (!lc.allow_network) {
        err << "check-links contacts the URLs' hosts; pass --allow-network to proceed\n";
        return kExitUsage;
    }
    std::vector<std::string> urls;
    for (const auto& input : lc.inputs) {
        for (const auto& f : read_ndjson(fs::path(input), &parse_url_finding)) urls.push_back(f.url);
    }
    LivenessOptions options;
    options.timeout = std::chrono::milliseconds(lc.timeout_ms);
    options.ipfs_gateway = lc.ipfs_gateway;
    auto results = check_liveness_all(urls, lc.jobs, options);

    fs::create_directories(lc.out_dir);
    auto path = fs::path(lc.out_dir) / "liveness.ndjson";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError(fmt::format("cannot write '{}'", path.string()));
    std::map<Liveness, std::size_t> counts;
    for (const auto& r : results) {
        ++counts[r.status];
        nlohmann::json doc = {{"url", r.url},
                              {"status", to_string(r.status)},
                              {"http_status", r.http_status},
                              {"detail", r.detail}};
        file << doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
    out << fmt::format("check-links: {} urls, {} alive, {} dead, {} restricted\n", results.size(),
                       counts[Liveness::Alive], counts[Liveness::Dead], counts[Liveness::Restricted]);
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Scanner for non-financial content in Bitcoin and Ethereum transaction exports", "chainscan");
    app.require_subcommand(1);

    ScanCommand scan_text(Detector::Text);
    ScanCommand scan_urls(Detector::Url);
    ScanCommand scan_files(Detector::File);
    add_scan_command(app, scan_text, "scan-text", "detect printable text in insertion channels");
    add_scan_command(app, scan_urls, "scan-urls", "detect HTTP, IPFS and onion URLs");
    add_scan_command(app, scan_files, "scan-files", "carve and validate embedded files");

    ReportCommand report;
    report.out_dir = default_out_dir() + "/report";
    auto* report_cmd = app.add_subcommand("report", "aggregate findings into CSV tables and series files");
    report_cmd->add_option("--in", report.in_dirs, "findings directory (repeatable)")->required();
    report_cmd->add_option("--out", report.out_dir, "report directory");
    report_cmd->add_option("--top", report.top, "entries in the top-texts tables");
    report_cmd->add_flag("--include-unvalidated", report.include_unvalidated,
                         "count Broken and ManualReview file findings too");

    CorpusCommand corpus;
    corpus.out_dir = default_out_dir();
    auto* corpus_cmd = app.add_subcommand("gen-corpus", "generate a synthetic export with a plant manifest");
    corpus_cmd->add_option("--seed", corpus.seed, "generator seed");
    corpus_cmd->add_option("--out", corpus.out_dir, "output directory");
    corpus_cmd->add_option("--texts", corpus.counts.texts, "text plants");
    corpus_cmd->add_option("--urls", corpus.counts.urls, "URL plants");
    corpus_cmd->add_option("--file-rounds", corpus.counts.file_rounds, "rounds of the sample file set");
    corpus_cmd->add_option("--noise", corpus.noise, "random noise records");

    SqlCommand sql;
    sql.out_dir = default_out_dir();
    auto* sql_cmd = app.add_subcommand("emit-sql", "write BigQuery queries for the detector configurations");
    sql_cmd->add_option("--out", sql.out_dir, "output directory; queries go to <out>/queries");
    sql_cmd->add_option("--detector", sql.detectors, "text, url or file (repeatable; default all)")
        ->check(CLI::IsMember({"text", "url", "file"}));
    sql_cmd->add_option("--chain", sql.chains, "bitcoin or ethereum (repeatable; default both)")
        ->check(CLI::IsMember({"bitcoin", "ethereum"}));
    sql_cmd->add_option("--file-type", sql.file_types, "restrict file signatures (repeatable)");
    add_text_flags(sql_cmd, sql.options.text);
    add_url_flags(sql_cmd, sql.options.url);

    LinksCommand links;
    links.out_dir = default_out_dir();
    auto* links_cmd = app.add_subcommand("check-links", "probe liveness of URL findings (network access)");
    links_cmd->add_option("--input", links.inputs, "url_findings.ndjson (repeatable)")->required();
    links_cmd->add_option("--out", links.out_dir, "output directory");
    links_cmd->add_flag("--allow-network", links.allow_network, "permit outbound requests");
    links_cmd->add_option("--jobs", links.jobs, "concurrent requests")->check(CLI::PositiveNumber);
    links_cmd->add_option("--timeout-ms", links.timeout_ms, "per-request timeout")->check(CLI::PositiveNumber);
    links_cmd->add_option("--ipfs-gateway", links.ipfs_gateway, "HTTP gateway for ipfs:// URLs");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*scan_text.app) return do_scan(scan_text, out, err);
        if (*scan_urls.app) return do_scan(scan_urls, out, err);
        if (*scan_files.app) return do_scan(scan_files, out, err);
        if (*report_cmd) return do_report(report, out);
        if (*corpus_cmd) return do_gen_corpus(corpus, out);
        if (*sql_cmd) return do_emit_sql(sql, out);
        if (*links_cmd) return do_check_links(links, out, err);
    } catch (const StrictModeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitStrict;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace chainscan::cli
