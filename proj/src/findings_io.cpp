#include "chainscan/findings_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "chainscan/hex.hpp"
#include "chainscan/timestamp.hpp"

namespace chainscan {

using json = nlohmann::json;

namespace {

std::string dump(const json& doc) { return doc.dump(-1, ' ', false, json::error_handler_t::replace); }

template <typename F>
auto parse_with(std::string_view line, std::size_t line_no, F&& body) {
    try {
        return body(json::parse(line));
    } catch (const json::exception& e) {
        throw ParseError(e.what(), line_no);
    }
}

} // namespace

std::string to_json_line(const TextFinding& f) {
    json classes = json::array();
    for (auto type : f.classes) classes.push_back(to_string(type));
    return dump({{"chain", to_string(f.chain)},
                 {"tx_hash", f.tx_hash},
                 {"block_timestamp", format_timestamp(f.block_timestamp)},
                 {"channel", to_string(f.channel)},
                 {"ratio", f.ratio},
                 {"text", f.text},
                 {"payload_hex", bytes_to_hex(as_bytes(f.text))},
                 {"classes", std::move(classes)}});
}

std::string to_json_line(const UrlFinding& f) {
    return dump({{"chain", to_string(f.chain)},
                 {"tx_hash", f.tx_hash},
                 {"block_timestamp", format_timestamp(f.block_timestamp)},
                 {"url", f.url},
                 {"scheme_class", to_string(f.scheme_class)},
                 {"offset", f.offset}});
}

std::string to_json_line(const FileFinding& f, const std::optional<std::string>& carve_path) {
    return dump({{"chain", to_string(f.chain)},
                 {"tx_hash", f.tx_hash},
                 {"block_timestamp", format_timestamp(f.block_timestamp)},
                 {"channel", to_string(f.channel)},
                 {"file_type", to_string(f.file_type)},
                 {"offset", f.offset},
                 {"size", f.bytes.size()},
                 {"insertion_mode", f.insertion_mode ? json(to_string(*f.insertion_mode)) : json(nullptr)},
                 {"valid", to_string(f.valid)},
                 {"path", carve_path ? json(*carve_path) : json(nullptr)}});
}

TextFinding parse_text_finding(std::string_view line, std::size_t line_no) {
    return parse_with(line, line_no, [](const json& doc) {
        TextFinding f;
        f.chain = chain_from_string(doc.at("chain").get<std::string>());
        f.tx_hash = doc.at("tx_hash").get<std::string>();
        f.block_timestamp = parse_timestamp(doc.at("block_timestamp").get<std::string>());
        f.channel = channel_from_string(doc.at("channel").get<std::string>());
        f.ratio = doc.at("ratio").get<double>();
        f.text = to_string(hex_to_bytes(doc.at("payload_hex").get<std::string>()));
        for (const auto& c : doc.at("classes")) f.classes.insert(textual_type_from_string(c.get<std::string>()));
        return f;
    });
}

UrlFinding parse_url_finding(std::string_view line, std::size_t line_no) {
    return parse_with(line, line_no, [](const json& doc) {
        UrlFinding f;
        f.chain = chain_from_string(doc.at("chain").get<std::string>());
        f.tx_hash = doc.at("tx_hash").get<std::string>();
        f.block_timestamp = parse_timestamp(doc.at("block_timestamp").get<std::string>());
        f.url = doc.at("url").get<std::string>();
        f.scheme_class = scheme_from_string(doc.at("scheme_class").get<std::string>());
        f.offset = doc.at("offset").get<std::size_t>();
        return f;
    });
}

FileFindingRecord parse_file_finding(std::string_view line, std::size_t line_no) {
    return parse_with(line, line_no, [](const json& doc) {
        FileFindingRecord r;
        auto& f = r.finding;
        f.chain = chain_from_string(doc.at("chain").get<std::string>());
        f.tx_hash = doc.at("tx_hash").get<std::string>();
        f.block_timestamp = parse_timestamp(doc.at("block_timestamp").get<std::string>());
        f.channel = channel_from_string(doc.at("channel").get<std::string>());
        f.file_type = file_type_from_string(doc.at("file_type").get<std::string>());
        f.offset = doc.at("offset").get<std::size_t>();
        if (!doc.at("insertion_mode").is_null()) {
            f.insertion_mode = insertion_mode_from_string(doc["insertion_mode"].get<std::string>());
        }
        f.valid = validation_status_from_string(doc.at("valid").get<std::string>());
        r.size = doc.at("size").get<std::size_t>();
        if (!doc.at("path").is_null()) r.path = doc["path"].get<std::string>();
        return r;
    });
}

template <typename T>
std::vector<T> read_ndjson(const std::filesystem::path& path, T (*parse)(std::string_view, std::size_t)) {
    LineReader reader(path);
    std::vector<T> out;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        out.push_back(parse(line, reader.line_number()));
    }
    return out;
}

template std::vector<TextFinding> read_ndjson(const std::filesystem::path&, TextFinding (*)(std::string_view, std::size_t));
template std::vector<UrlFinding> read_ndjson(const std::filesystem::path&, UrlFinding (*)(std::string_view, std::size_t));
template std::vector<FileFindingRecord> read_ndjson(const std::filesystem::path&,
                                                    FileFindingRecord (*)(std::string_view, std::size_t));

std::string carve_file_name(const FileFinding& finding) {
    std::string_view hash = finding.tx_hash;
    if (hash.starts_with("0x")) hash.remove_prefix(2);
    return fmt::format("{}_{}_{}.{}", hash, to_string(finding.channel), finding.offset, file_extension(finding));
}

} // namespace chainscan
