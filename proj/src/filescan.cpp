#include "chainscan/filescan.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>
#include <functional>
#include <map>

namespace chainscan {

namespace {

constexpr std::array kTypeNames = {
    std::pair{FileType::Png, std::string_view("png")},      std::pair{FileType::Jpeg, std::string_view("jpeg")},
    std::pair{FileType::Gif, std::string_view("gif")},      std::pair{FileType::Pdf, std::string_view("pdf")},
    std::pair{FileType::Zip, std::string_view("zip")},      std::pair{FileType::SevenZip, std::string_view("7z")},
    std::pair{FileType::Webp, std::string_view("webp")},    std::pair{FileType::Doc, std::string_view("doc")},
    std::pair{FileType::Mp3, std::string_view("mp3")},      std::pair{FileType::Mp4, std::string_view("mp4")},
    std::pair{FileType::Mov, std::string_view("mov")},      std::pair{FileType::Wav, std::string_view("wav")},
    std::pair{FileType::Avi, std::string_view("avi")},      std::pair{FileType::Rar, std::string_view("rar")},
    std::pair{FileType::Tar, std::string_view("tar")},
};

MagicPart part(std::size_t offset, std::string_view text) { return {offset, to_bytes(text)}; }

using namespace std::string_view_literals;

std::vector<FileSignature> build_table() {
    return {
        {FileType::Png, {part(0, "\x89PNG\r\n\x1a\n"sv)}},
        {FileType::Jpeg, {part(0, "\xff\xd8\xff"sv)}},
        {FileType::Gif, {part(0, "GIF87a")}},
        {FileType::Gif, {part(0, "GIF89a")}},
        {FileType::Pdf, {part(0, "%PDF-")}},
        {FileType::Zip, {part(0, "PK\x03\x04"sv)}},
        {FileType::SevenZip, {part(0, "7z\xbc\xaf\x27\x1c"sv)}},
        {FileType::Webp, {part(0, "RIFF"), part(8, "WEBP")}},
        {FileType::Doc, {part(0, "\xd0\xcf\x11\xe0\xa1\xb1\x1a\xe1"sv)}},
        {FileType::Mp3, {part(0, "ID3")}},
        {FileType::Mp4, {part(4, "ftyp")}},
        {FileType::Mov, {part(4, "ftypqt  ")}},
        {FileType::Wav, {part(0, "RIFF"), part(8, "WAVE")}},
        {FileType::Avi, {part(0, "RIFF"), part(8, "AVI ")}},
        {FileType::Rar, {part(0, "Rar!\x1a\x07\x00"sv)}},
        {FileType::Rar, {part(0, "Rar!\x1a\x07\x01\x00"sv)}},
        {FileType::Tar, {part(257, "ustar")}},
    };
}

bool matches(ByteView payload, std::size_t start, const MagicPart& p) {
    if (start + p.offset + p.bytes.size() > payload.size()) return false;
    return std::equal(p.bytes.begin(), p.bytes.end(), payload.begin() + start + p.offset);
}

bool is_eth_channel(InsertionChannel channel) {
    return channel == InsertionChannel::EthInput || channel == InsertionChannel::EthCoinbase;
}

std::vector<FileFinding> finish(std::vector<FileFinding> findings) {
    for (auto& f : findings) f = reclassify_doc(validate(std::move(f)));
    return findings;
}

} // namespace

std::string_view to_string(FileType type) {
    for (auto [value, name] : kTypeNames) {
        if (value == type) return name;
    }
    return "unknown";
}

FileType file_type_from_string(std::string_view text) {
    for (auto [value, name] : kTypeNames) {
        if (name == text) return value;
    }
    throw Error(fmt::format("unknown file type '{}'", text));
}

std::string_view to_string(InsertionMode mode) { return mode == InsertionMode::Embedded ? "embedded" : "injected"; }

InsertionMode insertion_mode_from_string(std::string_view text) {
    if (text == "embedded") return InsertionMode::Embedded;
    if (text == "injected") return InsertionMode::Injected;
    throw Error(fmt::format("unknown insertion mode '{}'", text));
}

std::string_view to_string(ValidationStatus status) {
    switch (status) {
    case ValidationStatus::Validated: return "validated";
    case ValidationStatus::Broken: return "broken";
    case ValidationStatus::ManualReview: return "manual_review";
    }
    return "unknown";
}

ValidationStatus validation_status_from_string(std::string_view text) {
    if (text == "validated") return ValidationStatus::Validated;
    if (text == "broken") return ValidationStatus::Broken;
    if (text == "manual_review") return ValidationStatus::ManualReview;
    throw Error(fmt::format("unknown validation status '{}'", text));
}

std::size_t FileSignature::min_signature_len() const {
    std::size_t total = 0;
    for (const auto& p : magic) total += p.bytes.size();
    return total;
}

const std::vector<FileSignature>& signature_table() {
    static const std::vector<FileSignature> table = build_table();
    return table;
}

std::vector<FileFinding> scan_payload(ByteView payload, InsertionChannel channel, const FileScanConfig& cfg) {
    // start offset -> index of the most specific signature matching there
    std::map<std::size_t, std::size_t> best;
    const auto& table = signature_table();
    for (std::size_t s = 0; s < table.size(); ++s) {
        const auto& sig = table[s];
        const auto& anchor = sig.magic.front();
        std::boyer_moore_horspool_searcher searcher(anchor.bytes.begin(), anchor.bytes.end());
        auto it = payload.begin();
        while (true) {
            it = std::search(it, payload.end(), searcher);
            if (it == payload.end()) break;
            auto pos = static_cast<std::size_t>(it - payload.begin());
            ++it;
            if (pos < anchor.offset) continue;
            auto start = pos - anchor.offset;
            if (payload.size() - start < cfg.min_carve_bytes) continue;
            if (!std::all_of(sig.magic.begin(), sig.magic.end(),
                             [&](const MagicPart& p) { return matches(payload, start, p); })) {
                continue;
            }
            auto [slot, inserted] = best.try_emplace(start, s);
            if (!inserted && table[slot->second].min_signature_len() < sig.min_signature_len()) slot->second = s;
        }
    }

    std::vector<FileFinding> out;
    out.reserve(best.size());
    for (auto [start, s] : best) {
        FileFinding finding;
        finding.channel = channel;
        finding.file_type = table[s].file_type;
        finding.offset = start;
        finding.bytes.assign(payload.begin() + start, payload.end());
        if (is_eth_channel(channel)) {
            finding.chain = Chain::Ethereum;
            finding.insertion_mode = start == 0 ? InsertionMode::Embedded : InsertionMode::Injected;
        } else {
            finding.chain = Chain::Bitcoin;
        }
        out.push_back(std::move(finding));
    }
    return out;
}

std::vector<FileFinding> scan_segmented(const SegmentedPayload& payload, const FileScanConfig& cfg) {
    if (payload.segments.empty()) return {};
    auto findings = scan_payload(payload.bytes, payload.segments.front().channel, cfg);
    for (auto& f : findings) f.channel = payload.channel_at(f.offset);
    return findings;
}

FileFinding validate(FileFinding finding) {
    finding.valid = validate_bytes(finding.file_type, finding.bytes);
    return finding;
}

FileFinding reclassify_doc(FileFinding finding) {
    if (finding.file_type != FileType::Zip || finding.valid != ValidationStatus::Validated) return finding;
    auto names = zip_member_names(finding.bytes);
    if (!names) return finding;
    bool word_package = std::any_of(names->begin(), names->end(), [](const std::string& name) {
        return name == "word/document.xml" || name.starts_with("word/");
    });
    if (word_package) finding.file_type = FileType::Doc;
    return finding;
}

std::vector<FileFinding> scan_btc_files(const BtcTransaction& tx, const FileScanConfig& cfg) {
    std::vector<FileFinding> out;
    for (const auto& payload : file_payloads(tx).payloads) {
        for (auto& f : scan_segmented(payload, cfg)) {
            f.tx_hash = tx.hash;
            f.block_timestamp = tx.block_timestamp;
            out.push_back(std::move(f));
        }
    }
    return finish(std::move(out));
}

std::vector<FileFinding> scan_coinbase_files(const BtcBlock& block, const FileScanConfig& cfg) {
    auto out = scan_payload(block.coinbase, InsertionChannel::CoinbaseInput, cfg);
    for (auto& f : out) {
        f.tx_hash = block.hash;
        f.block_timestamp = block.timestamp;
    }
    return finish(std::move(out));
}

std::vector<FileFinding> scan_eth_files(const EthTransaction& tx, const FileScanConfig& cfg) {
    auto out = scan_payload(tx.input, InsertionChannel::EthInput, cfg);
    for (auto& f : out) {
        f.tx_hash = tx.hash;
        f.block_timestamp = tx.block_timestamp;
    }
    return finish(std::move(out));
}

std::vector<FileFinding> scan_eth_block_files(const EthBlock& block, const FileScanConfig& cfg) {
    auto out = scan_payload(block.extra_data, InsertionChannel::EthCoinbase, cfg);
    for (auto& f : out) {
        f.tx_hash = block.hash;
        f.block_timestamp = block.timestamp;
    }
    return finish(std::move(out));
}

std::string_view file_extension(const FileFinding& finding) {
    if (finding.file_type == FileType::Doc && finding.bytes.size() >= 2 && finding.bytes[0] == 'P' &&
        finding.bytes[1] == 'K') {
        return "docx";
    }
    if (finding.file_type == FileType::Jpeg) return "jpg";
    return to_string(finding.file_type);
}

} // namespace chainscan
