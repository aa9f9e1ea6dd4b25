#include "chainscan/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <fmt/format.h>
#include <fstream>
#include <thread>
#include <tuple>

#include "chainscan/findings_io.hpp"
#include "chainscan/ingest.hpp"

namespace chainscan {

namespace {

constexpr std::size_t kMaxErrorSamples = 10;

struct Line {
    std::string text;
    std::string source;  // "<path>:<line>"
};

template <typename Finding, typename PerRecord>
ScanOutput<Finding> scan_inputs(const RunConfig& cfg, PerRecord per_record) {
    ScanOutput<Finding> total;
    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    const std::size_t batch_lines = std::max<std::size_t>(1, cfg.batch_lines);

    auto run_batch = [&](std::vector<Line>& batch) {
        const std::size_t shards = std::min(jobs, batch.size());
        std::vector<ScanOutput<Finding>> partial(shards);
        auto work = [&](std::size_t shard) {
            auto begin = batch.size() * shard / shards;
            auto end = batch.size() * (shard + 1) / shards;
            auto& out = partial[shard];
            for (auto i = begin; i < end; ++i) {
                ++out.stats.records;
                try {
                    per_record(batch[i].text, out);
                } catch (const Error& e) {
                    ++out.stats.parse_errors;
                    if (out.stats.error_samples.size() < kMaxErrorSamples) {
                        out.stats.error_samples.push_back(fmt::format("{}: {}", batch[i].source, e.what()));
                    }
                }
            }
        };
        if (shards <= 1) {
            if (shards == 1) work(0);
        } else {
            std::vector<std::jthread> threads;
            threads.reserve(shards - 1);
            for (std::size_t s = 1; s < shards; ++s) threads.emplace_back(work, s);
            work(0);
        }
        for (auto& p : partial) {
            total.stats.merge(p.stats);
            std::move(p.findings.begin(), p.findings.end(), std::back_inserter(total.findings));
        }
        batch.clear();
        if (cfg.strict && total.stats.parse_errors > 0) {
            throw StrictModeError(fmt::format("strict mode: {}", total.stats.error_samples.front()));
        }
    };

    std::vector<Line> batch;
    for (const auto& path : cfg.inputs) {
        LineReader reader(path);
        std::string text;
        while (reader.next(text)) {
            if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
            batch.push_back({std::move(text), fmt::format("{}:{}", path.string(), reader.line_number())});
            if (batch.size() == batch_lines) run_batch(batch);
        }
    }
    if (!batch.empty()) run_batch(batch);

    canonical_sort(total.findings);
    total.stats.findings = total.findings.size();
    return total;
}

template <typename T>
void append(std::vector<T>& out, std::vector<T>&& more) {
    std::move(more.begin(), more.end(), std::back_inserter(out));
}

void scan_text_record(const RunConfig& cfg, std::string_view line, ScanOutput<TextFinding>& out) {
    if (cfg.chain == Chain::Bitcoin) {
        auto record = parse_btc_record(line);
        if (auto* tx = std::get_if<BtcTransaction>(&record)) {
            append(out.findings, scan_btc_text(*tx, cfg.text));
        } else if (auto f = scan_coinbase_text(std::get<BtcBlock>(record), cfg.text)) {
            out.findings.push_back(std::move(*f));
        }
        return;
    }
    auto record = parse_eth_record(line);
    if (auto* tx = std::get_if<EthTransaction>(&record)) {
        if (auto f = scan_eth_text(*tx, cfg.text)) out.findings.push_back(std::move(*f));
    }
}

void keep_url(UrlValidation result, ScanOutput<UrlFinding>& out) {
    if (result.kept) out.findings.push_back(std::move(*result.kept));
    if (result.dropped) ++out.stats.dropped_urls;
}

void scan_url_record(const RunConfig& cfg, std::string_view line, ScanOutput<UrlFinding>& out) {
    if (cfg.chain == Chain::Bitcoin) {
        auto record = parse_btc_record(line);
        std::vector<TextFinding> texts;
        if (auto* tx = std::get_if<BtcTransaction>(&record)) {
            texts = scan_btc_text(*tx, cfg.text);
        } else if (auto f = scan_coinbase_text(std::get<BtcBlock>(record), cfg.text)) {
            texts.push_back(std::move(*f));
        }
        keep_url(scan_btc_urls(texts, cfg.url), out);
        return;
    }
    auto record = parse_eth_record(line);
    if (auto* tx = std::get_if<EthTransaction>(&record)) keep_url(scan_eth_urls(*tx, cfg.url), out);
}

void scan_file_record(const RunConfig& cfg, std::string_view line, ScanOutput<FileFinding>& out) {
    if (cfg.chain == Chain::Bitcoin) {
        auto record = parse_btc_record(line);
        if (auto* tx = std::get_if<BtcTransaction>(&record)) {
            append(out.findings, scan_btc_files(*tx, cfg.file));
        } else {
            append(out.findings, scan_coinbase_files(std::get<BtcBlock>(record), cfg.file));
        }
        return;
    }
    auto record = parse_eth_record(line);
    if (auto* tx = std::get_if<EthTransaction>(&record)) {
        append(out.findings, scan_eth_files(*tx, cfg.file));
    } else {
        append(out.findings, scan_eth_block_files(std::get<EthBlock>(record), cfg.file));
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
    if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

template <typename Finding>
void write_lines(const std::filesystem::path& path, const std::vector<Finding>& findings) {
    auto out = open_output(path);
    for (const auto& f : findings) out << to_json_line(f) << '\n';
    out.flush();
    check_written(out, path);
}

void prepare_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
}

} // namespace

void ScanStats::merge(const ScanStats& other) {
    records += other.records;
    parse_errors += other.parse_errors;
    findings += other.findings;
    dropped_urls += other.dropped_urls;
    for (const auto& e : other.error_samples) {
        if (error_samples.size() < kMaxErrorSamples) error_samples.push_back(e);
    }
}

void canonical_sort(std::vector<TextFinding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const TextFinding& a, const TextFinding& b) {
        return std::tie(a.tx_hash, a.channel) < std::tie(b.tx_hash, b.channel);
    });
}

void canonical_sort(std::vector<UrlFinding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const UrlFinding& a, const UrlFinding& b) {
        return std::tie(a.tx_hash, a.offset) < std::tie(b.tx_hash, b.offset);
    });
}

void canonical_sort(std::vector<FileFinding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const FileFinding& a, const FileFinding& b) {
        return std::tie(a.tx_hash, a.offset, a.channel, a.file_type) < std::tie(b.tx_hash, b.offset, b.channel, b.file_type);
    });
}

ScanOutput<TextFinding> scan_text_inputs(const RunConfig& cfg) {
    cfg.text.validate();
    return scan_inputs<TextFinding>(cfg, [&](std::string_view line, ScanOutput<TextFinding>& out) {
        scan_text_record(cfg, line, out);
    });
}

ScanOutput<UrlFinding> scan_url_inputs(const RunConfig& cfg) {
    cfg.text.validate();
    return scan_inputs<UrlFinding>(cfg, [&](std::string_view line, ScanOutput<UrlFinding>& out) {
        scan_url_record(cfg, line, out);
    });
}

ScanOutput<FileFinding> scan_file_inputs(const RunConfig& cfg) {
    return scan_inputs<FileFinding>(cfg, [&](std::string_view line, ScanOutput<FileFinding>& out) {
        scan_file_record(cfg, line, out);
    });
}

ScanStats run_scan(Detector detector, const RunConfig& cfg) {
    prepare_out_dir(cfg.out_dir);
    switch (detector) {
    case Detector::Text: {
        auto result = scan_text_inputs(cfg);
        write_lines(cfg.out_dir / kTextFindingsFile, result.findings);
        return result.stats;
    }
    case Detector::Url: {
        auto result = scan_url_inputs(cfg);
        write_lines(cfg.out_dir / kUrlFindingsFile, result.findings);
        return result.stats;
    }
    case Detector::File: {
        auto result = scan_file_inputs(cfg);
        auto findings_path = cfg.out_dir / kFileFindingsFile;
        auto out = open_output(findings_path);
        if (cfg.write_carves && !result.findings.empty()) prepare_out_dir(cfg.out_dir / "files");
        for (const auto& f : result.findings) {
            std::optional<std::string> carve_path;
            if (cfg.write_carves) {
                carve_path = "files/" + carve_file_name(f);
                auto path = cfg.out_dir / *carve_path;
                auto carve = open_output(path);
                carve.write(reinterpret_cast<const char*>(f.bytes.data()), static_cast<std::streamsize>(f.bytes.size()));
                check_written(carve, path);
            }
            out << to_json_line(f, carve_path) << '\n';
        }
        out.flush();
        check_written(out, findings_path);
        return result.stats;
    }
    }
    return {};
}

} // namespace chainscan
