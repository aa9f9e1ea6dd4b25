#include "chainscan/corpusgen.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>

#include "chainscan/hex.hpp"
#include "chainscan/sample_files.hpp"

namespace chainscan {

using json = nlohmann::json;

namespace {

constexpr std::size_t kMaxPush = 520;
constexpr std::size_t kP2pkhChunk = 20;
constexpr std::size_t kP2msKey = 65;
// Filler for the last standard-output slot: printable, not white space, not a
// URL, hex, e-mail or markup character, so it leaves the text classes alone.
constexpr std::uint8_t kPadByte = '|';

constexpr std::int64_t kBtcEpochStart = 1262304000;  // 2010-01-01
constexpr std::int64_t kEthEpochStart = 1438905600;  // 2015-08-07
constexpr std::int64_t kEpochEnd = 1672531199;       // 2022-12-31T23:59:59

constexpr InsertionChannel kBtcTextChannels[] = {
    InsertionChannel::StandardOutput, InsertionChannel::NonStandardInput, InsertionChannel::OpReturnOutput,
    InsertionChannel::NonStandardOutput, InsertionChannel::CoinbaseInput,
};

std::string hex_of(ByteView bytes) { return bytes_to_hex(bytes); }

std::string push(ByteView bytes) { return hex_of(bytes); }

// Pushes of at most kMaxPush bytes, space separated.
std::string pushes(ByteView payload) {
    std::string out;
    for (std::size_t pos = 0; pos < payload.size(); pos += kMaxPush) {
        if (!out.empty()) out += ' ';
        out += push(payload.subspan(pos, std::min(kMaxPush, payload.size() - pos)));
    }
    return out;
}

ScriptSlot p2pkh_output(ByteView hash160) {
    return {fmt::format("OP_DUP OP_HASH160 {} OP_EQUALVERIFY OP_CHECKSIG", push(hash160)), "pubkeyhash"};
}

ScriptSlot change_output(CorpusRng& rng) { return p2pkh_output(rng.bytes(kP2pkhChunk)); }

ScriptSlot standard_input(CorpusRng& rng) {
    auto sig = rng.bytes(70);
    sig[0] = 0x30;
    auto key = rng.bytes(33);
    key[0] = 0x02;
    return {fmt::format("{}[ALL] {}", hex_of(sig), hex_of(key)), "pubkeyhash"};
}

Timestamp draw_timestamp(CorpusRng& rng, std::int64_t start) {
    auto seconds = static_cast<std::int64_t>(rng.between(static_cast<std::uint64_t>(start), kEpochEnd));
    return Timestamp{std::chrono::seconds(seconds)};
}

std::string eth_hash(CorpusRng& rng) { return "0x" + rng.hex_hash(); }
std::string eth_address(CorpusRng& rng) { return "0x" + hex_of(rng.bytes(20)); }

std::string random_from(CorpusRng& rng, std::string_view alphabet, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += alphabet[rng.below(alphabet.size())];
    return out;
}

constexpr std::string_view kLowerHex = "0123456789abcdef";
constexpr std::string_view kBase32 = "abcdefghijklmnopqrstuvwxyz234567";
constexpr std::string_view kBase58 = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

struct TextTemplate {
    std::string text;
    std::set<TextualType> classes;
};

using TT = TextualType;

// Each template's class set is written out by hand; the counter `n` never
// extends a hex run to 16 characters.
TextTemplate draw_text(CorpusRng& rng, std::size_t n) {
    switch (rng.below(14)) {
    case 0: return {"Bitzlato", {TT::Strings}};
    case 1: return {"503: Bitcoin over capacity!", {TT::Texts}};
    case 2: return {"\"2265861855@qq.com\"}", {TT::Strings, TT::ContainEmail}};
    case 3: return {fmt::format("Hello from block explorer #{}", n), {TT::Texts}};
    case 4: return {fmt::format("{{\"op\":\"mint\",\"amt\":{}}}", n), {TT::Strings, TT::ContainJson}};
    case 5: return {"id:" + random_from(rng, kLowerHex, 32), {TT::Strings, TT::ContainHex}};
    case 6: return {fmt::format("<b>gm {}</b>", n), {TT::Texts, TT::ContainHtmlXml}};
    case 7: return {"data:text/plain;base64,SGVsbG8gd29ybGQ=", {TT::Strings, TT::ContainDataUrl}};
    case 8: return {fmt::format("see https://example.org/n{}", n), {TT::Texts, TT::ContainUrl}};
    case 9:
        return {fmt::format("-----BEGIN PGP MESSAGE-----\n\nhQEMA{}\n-----END PGP MESSAGE-----", n),
                {TT::Texts, TT::ContainPgp}};
    case 10: return {fmt::format("中本聪 {}", n), {TT::Texts}};
    case 11: return {fmt::format("Satoshi{}", n), {TT::Strings}};
    case 12: return {fmt::format("contact: alice{}@example.com", n), {TT::Texts, TT::ContainEmail}};
    default:
        return {fmt::format("RIP Hal Finney. In memory of a cypherpunk, {} blocks later.", n), {TT::Texts}};
    }
}

struct UrlTemplate {
    std::string url;
    SchemeClass scheme;
};

UrlTemplate draw_url(CorpusRng& rng, std::size_t n) {
    switch (n % 3) {
    case 0:
        if (rng.below(2) == 0) return {fmt::format("http://example{}.org/page?id={}", n, rng.below(100000)), SchemeClass::Http};
        return {fmt::format("https://blog{}.example.com/post/{}", n, rng.below(100000)), SchemeClass::Http};
    case 1: return {"ipfs://Qm" + random_from(rng, kBase58, 44), SchemeClass::Ipfs};
    default:
        if (rng.below(2) == 0) return {random_from(rng, kBase32, 16) + ".onion", SchemeClass::Onion};
        return {"http://" + random_from(rng, kBase32, 56) + ".onion/index", SchemeClass::Onion};
    }
}

struct SampleInfo {
    samples::Sample sample;
    FileType type;
    InsertionChannel btc_channel;
};

// Bitcoin routing: every sample goes to a channel that can hold it.
constexpr SampleInfo kSamples[] = {
    {samples::Sample::Png, FileType::Png, InsertionChannel::OpReturnOutput},
    {samples::Sample::Jpeg, FileType::Jpeg, InsertionChannel::NonStandardInput},
    {samples::Sample::Gif, FileType::Gif, InsertionChannel::CoinbaseInput},
    {samples::Sample::Pdf, FileType::Pdf, InsertionChannel::P2shInput},
    {samples::Sample::Zip, FileType::Zip, InsertionChannel::NonStandardOutput},
    {samples::Sample::SevenZip, FileType::SevenZip, InsertionChannel::OpReturnOutput},
    {samples::Sample::Webp, FileType::Webp, InsertionChannel::CoinbaseInput},
    {samples::Sample::Doc, FileType::Doc, InsertionChannel::StandardOutput},
    {samples::Sample::Mp3, FileType::Mp3, InsertionChannel::StandardOutput},
    {samples::Sample::Mp4, FileType::Mp4, InsertionChannel::NonStandardOutput},
    {samples::Sample::Mov, FileType::Mov, InsertionChannel::P2shInput},
    {samples::Sample::Wav, FileType::Wav, InsertionChannel::OpReturnOutput},
    {samples::Sample::Avi, FileType::Avi, InsertionChannel::CoinbaseInput},
    {samples::Sample::Rar, FileType::Rar, InsertionChannel::NonStandardInput},
    {samples::Sample::Tar, FileType::Tar, InsertionChannel::StandardOutput},
    {samples::Sample::Docx, FileType::Doc, InsertionChannel::NonStandardOutput},
};

// Outputs scanned for files are concatenated, so the change output's hash comes first.
bool has_change_prefix(InsertionChannel channel) {
    return channel == InsertionChannel::OpReturnOutput || channel == InsertionChannel::NonStandardOutput;
}

// Standard outputs hand out data in whole slots; the last one is padded.
Bytes padded_standard_payload(ByteView payload) {
    auto chunk = payload.size() > 200 ? 2 * kP2msKey : kP2pkhChunk;
    Bytes out(payload.begin(), payload.end());
    if (out.size() % chunk != 0) out.resize(out.size() + chunk - out.size() % chunk, kPadByte);
    return out;
}

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    void plant_text(std::size_t n) {
        auto channel_index = n % 6;
        auto tmpl = draw_text(rng_, n);
        if (channel_index == 5) {
            auto& tx = eth_tx(to_bytes(tmpl.text));
            add_entry(tx.hash, Chain::Ethereum, InsertionChannel::EthInput, PlantKind::Text, to_bytes(tmpl.text), 0)
                .classes = tmpl.classes;
            return;
        }
        auto channel = kBtcTextChannels[channel_index];
        while (tmpl.text.size() > channel_capacity(channel)) tmpl = draw_text(rng_, n);
        auto payload = to_bytes(tmpl.text);
        if (channel == InsertionChannel::StandardOutput) payload = padded_standard_payload(payload);
        auto hash = btc_record(channel, payload);
        add_entry(hash, Chain::Bitcoin, channel, PlantKind::Text, payload, 0).classes = tmpl.classes;
    }

    void plant_url(std::size_t n) {
        auto tmpl = draw_url(rng_, n);
        auto text = to_bytes("see " + tmpl.url);
        if (n % 2 == 1) {
            auto& tx = eth_tx(abi_wrap(text, rng_));
            add_entry(tx.hash, Chain::Ethereum, InsertionChannel::EthInput, PlantKind::Url, to_bytes(tmpl.url),
                      kAbiPayloadOffset + 4)
                .scheme_class = tmpl.scheme;
            return;
        }
        auto channel = text.size() <= channel_capacity(InsertionChannel::OpReturnOutput)
                           ? InsertionChannel::OpReturnOutput
                           : InsertionChannel::NonStandardOutput;
        auto hash = btc_record(channel, text);
        add_entry(hash, Chain::Bitcoin, channel, PlantKind::Url, to_bytes(tmpl.url), 4).scheme_class = tmpl.scheme;
    }

    void plant_files() {
        for (const auto& info : kSamples) {
            auto file = samples::sample(info.sample);

            auto payload = Bytes(file.begin(), file.end());
            if (info.btc_channel == InsertionChannel::StandardOutput) payload = padded_standard_payload(payload);
            auto hash = btc_record(info.btc_channel, payload);
            auto& btc = add_entry(hash, Chain::Bitcoin, info.btc_channel, PlantKind::File, payload,
                                  has_change_prefix(info.btc_channel) ? kP2pkhChunk : 0);
            btc.file_type = info.type;

            auto& embedded_tx = eth_tx(Bytes(file.begin(), file.end()));
            auto& embedded = add_entry(embedded_tx.hash, Chain::Ethereum, InsertionChannel::EthInput, PlantKind::File,
                                       Bytes(file.begin(), file.end()), 0);
            embedded.file_type = info.type;
            embedded.insertion_mode = InsertionMode::Embedded;

            auto wrapped = abi_wrap(file, rng_);
            auto& injected_tx = eth_tx(wrapped);
            auto& injected = add_entry(injected_tx.hash, Chain::Ethereum, InsertionChannel::EthInput, PlantKind::File,
                                       Bytes(wrapped.begin() + kAbiPayloadOffset, wrapped.end()), kAbiPayloadOffset);
            injected.file_type = info.type;
            injected.insertion_mode = InsertionMode::Injected;
        }
    }

    // Random bytes in a random place; no filtering, so some noise reads as text.
    void noise() {
        auto length = static_cast<std::size_t>(rng_.between(4, 128));
        auto bytes = rng_.bytes(length);
        switch (rng_.below(8)) {
        case 0: btc_record(InsertionChannel::StandardOutput, rng_.bytes((length + kP2pkhChunk - 1) / kP2pkhChunk * kP2pkhChunk)); break;
        case 1: btc_record(InsertionChannel::OpReturnOutput, Bytes(bytes.begin(), bytes.begin() + std::min<std::size_t>(length, 80))); break;
        case 2: btc_record(InsertionChannel::NonStandardOutput, bytes); break;
        case 3: btc_record(InsertionChannel::NonStandardInput, bytes); break;
        case 4: btc_record(InsertionChannel::P2shInput, bytes); break;
        case 5: btc_record(InsertionChannel::CoinbaseInput, Bytes(bytes.begin(), bytes.begin() + std::min<std::size_t>(length, 100))); break;
        case 6: eth_tx(std::move(bytes)); break;
        default: {
            EthBlock block;
            block.hash = eth_hash(rng_);
            block.timestamp = draw_timestamp(rng_, kEthEpochStart);
            block.extra_data.assign(bytes.begin(), bytes.begin() + std::min<std::size_t>(length, 32));
            corpus_.eth_blocks.push_back(std::move(block));
        }
        }
    }

    Corpus take() { return std::move(corpus_); }

private:
    PlantEntry& add_entry(std::string hash, Chain chain, InsertionChannel channel, PlantKind kind, Bytes payload,
                          std::size_t offset) {
        PlantEntry entry;
        entry.tx_hash = std::move(hash);
        entry.chain = chain;
        entry.channel = channel;
        entry.kind = kind;
        entry.payload = std::move(payload);
        entry.offset = offset;
        return corpus_.manifest.emplace_back(std::move(entry));
    }

    // Standard-output payloads must already be padded to whole slots.
    std::string btc_record(InsertionChannel channel, ByteView payload) {
        auto hash = rng_.hex_hash();
        auto ts = draw_timestamp(rng_, kBtcEpochStart);
        if (channel == InsertionChannel::CoinbaseInput) {
            if (payload.size() > channel_capacity(channel)) {
                throw CapacityError(fmt::format("payload of {} bytes exceeds channel {}", payload.size(), to_string(channel)));
            }
            corpus_.btc_blocks.push_back(encode_coinbase_payload(payload, hash, ts));
        } else {
            corpus_.btc_transactions.push_back(encode_btc_payload(channel, payload, hash, ts, rng_));
        }
        return hash;
    }

    EthTransaction& eth_tx(Bytes input) {
        EthTransaction tx;
        tx.hash = eth_hash(rng_);
        tx.block_timestamp = draw_timestamp(rng_, kEthEpochStart);
        tx.from_address = eth_address(rng_);
        tx.to_address = eth_address(rng_);
        tx.input = std::move(input);
        return corpus_.eth_transactions.emplace_back(std::move(tx));
    }

    CorpusRng rng_;
    Corpus corpus_;
};

} // namespace

std::string_view to_string(PlantKind kind) {
    switch (kind) {
    case PlantKind::Text: return "text";
    case PlantKind::Url: return "url";
    case PlantKind::File: return "file";
    }
    return "unknown";
}

PlantKind plant_kind_from_string(std::string_view text) {
    if (text == "text") return PlantKind::Text;
    if (text == "url") return PlantKind::Url;
    if (text == "file") return PlantKind::File;
    throw Error(fmt::format("unknown plant kind '{}'", text));
}

Bytes CorpusRng::bytes(std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(engine_() >> 56);
    return out;
}

std::string CorpusRng::hex_hash() { return bytes_to_hex(bytes(32)); }

std::size_t channel_capacity(InsertionChannel channel) {
    switch (channel) {
    case InsertionChannel::OpReturnOutput: return 80;
    case InsertionChannel::CoinbaseInput: return 100;
    case InsertionChannel::NonStandardInput:
    case InsertionChannel::P2shInput: return 1650;
    case InsertionChannel::NonStandardOutput: return 10000;
    case InsertionChannel::StandardOutput: return 100000;
    default: return 0;
    }
}

BtcTransaction encode_btc_payload(InsertionChannel channel, ByteView payload, std::string hash, Timestamp ts,
                                  CorpusRng& rng) {
    if (payload.size() > channel_capacity(channel)) {
        throw CapacityError(fmt::format("payload of {} bytes exceeds channel {} (limit {})", payload.size(),
                                        to_string(channel), channel_capacity(channel)));
    }
    BtcTransaction tx;
    tx.hash = std::move(hash);
    tx.block_timestamp = ts;
    switch (channel) {
    case InsertionChannel::StandardOutput: {
        // No change output: its hash would dilute the concatenated text.
        tx.inputs.push_back(standard_input(rng));
        // Short payloads ride in P2PKH hash slots, long ones in 1-of-2 multisig key slots.
        std::size_t chunk = payload.size() > 200 ? 2 * kP2msKey : kP2pkhChunk;
        if (payload.size() % chunk != 0) {
            throw CapacityError(fmt::format("payload of {} bytes is not a whole number of {}-byte {} slots",
                                            payload.size(), chunk, to_string(channel)));
        }
        for (std::size_t pos = 0; pos < payload.size(); pos += chunk) {
            auto piece = payload.subspan(pos, chunk);
            if (chunk == kP2pkhChunk) {
                tx.outputs.push_back(p2pkh_output(piece));
            } else {
                tx.outputs.push_back({fmt::format("1 {} {} 2 OP_CHECKMULTISIG", push(piece.first(kP2msKey)),
                                                  push(piece.subspan(kP2msKey))),
                                      "multisig"});
            }
        }
        break;
    }
    case InsertionChannel::OpReturnOutput:
        tx.inputs.push_back(standard_input(rng));
        tx.outputs.push_back(change_output(rng));
        tx.outputs.push_back({"OP_RETURN " + push(payload), "nulldata"});
        break;
    case InsertionChannel::NonStandardOutput:
        tx.inputs.push_back(standard_input(rng));
        tx.outputs.push_back(change_output(rng));
        tx.outputs.push_back({pushes(payload) + " OP_DROP OP_TRUE", "nonstandard"});
        break;
    case InsertionChannel::NonStandardInput:
        tx.inputs.push_back({pushes(payload), "nonstandard"});
        tx.outputs.push_back(change_output(rng));
        break;
    case InsertionChannel::P2shInput:
        tx.inputs.push_back({pushes(payload), "scripthash"});
        tx.outputs.push_back(change_output(rng));
        break;
    default:
        throw CapacityError(fmt::format("channel {} cannot carry a transaction plant", to_string(channel)));
    }
    return tx;
}

BtcBlock encode_coinbase_payload(ByteView payload, std::string hash, Timestamp ts) {
    if (payload.size() > channel_capacity(InsertionChannel::CoinbaseInput)) {
        throw CapacityError(fmt::format("payload of {} bytes exceeds channel {}", payload.size(),
                                        to_string(InsertionChannel::CoinbaseInput)));
    }
    return {std::move(hash), ts, Bytes(payload.begin(), payload.end())};
}

Bytes abi_wrap(ByteView payload, CorpusRng& rng) {
    Bytes out = rng.bytes(4);
    Bytes offset_word(32, 0);
    offset_word[31] = 0x20;
    out.insert(out.end(), offset_word.begin(), offset_word.end());
    Bytes length_word(32, 0);
    auto length = payload.size();
    for (int i = 31; i >= 24 && length > 0; --i, length >>= 8) length_word[i] = static_cast<std::uint8_t>(length & 0xff);
    out.insert(out.end(), length_word.begin(), length_word.end());
    out.insert(out.end(), payload.begin(), payload.end());
    out.resize(out.size() + (32 - payload.size() % 32) % 32, 0);
    return out;
}

Corpus generate(std::uint64_t seed, const PlantCounts& counts, std::size_t noise_records) {
    Generator gen(seed);
    for (std::size_t i = 0; i < counts.texts; ++i) gen.plant_text(i);
    for (std::size_t i = 0; i < counts.urls; ++i) gen.plant_url(i);
    for (std::size_t i = 0; i < counts.file_rounds; ++i) gen.plant_files();
    for (std::size_t i = 0; i < noise_records; ++i) gen.noise();
    return gen.take();
}

std::string to_json_line(const PlantEntry& entry) {
    json doc = {{"tx_hash", entry.tx_hash},
                {"chain", to_string(entry.chain)},
                {"channel", to_string(entry.channel)},
                {"kind", to_string(entry.kind)},
                {"payload_hex", bytes_to_hex(entry.payload)},
                {"offset", entry.offset}};
    if (entry.kind == PlantKind::Text) {
        json classes = json::array();
        for (auto type : entry.classes) classes.push_back(to_string(type));
        doc["classes"] = std::move(classes);
    }
    if (entry.scheme_class) doc["scheme_class"] = to_string(*entry.scheme_class);
    if (entry.file_type) doc["file_type"] = to_string(*entry.file_type);
    if (entry.insertion_mode) doc["insertion_mode"] = to_string(*entry.insertion_mode);
    return doc.dump();
}

PlantEntry parse_plant_entry(std::string_view line, std::size_t line_no) {
    try {
        auto doc = json::parse(line);
        PlantEntry entry;
        entry.tx_hash = doc.at("tx_hash").get<std::string>();
        entry.chain = chain_from_string(doc.at("chain").get<std::string>());
        entry.channel = channel_from_string(doc.at("channel").get<std::string>());
        entry.kind = plant_kind_from_string(doc.at("kind").get<std::string>());
        entry.payload = hex_to_bytes(doc.at("payload_hex").get<std::string>());
        entry.offset = doc.at("offset").get<std::size_t>();
        if (doc.contains("classes")) {
            for (const auto& c : doc["classes"]) entry.classes.insert(textual_type_from_string(c.get<std::string>()));
        }
        if (doc.contains("scheme_class")) entry.scheme_class = scheme_from_string(doc["scheme_class"].get<std::string>());
        if (doc.contains("file_type")) entry.file_type = file_type_from_string(doc["file_type"].get<std::string>());
        if (doc.contains("insertion_mode")) {
            entry.insertion_mode = insertion_mode_from_string(doc["insertion_mode"].get<std::string>());
        }
        return entry;
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("manifest entry: {}", e.what()), line_no);
    }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](std::string_view name, const auto& records) {
        auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
        for (const auto& r : records) out << to_json_line(r) << '\n';
        if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
    };
    write(kBtcTransactionsFile, corpus.btc_transactions);
    write(kBtcBlocksFile, corpus.btc_blocks);
    write(kEthTransactionsFile, corpus.eth_transactions);
    write(kEthBlocksFile, corpus.eth_blocks);
    write(kManifestFile, corpus.manifest);
}

std::vector<PlantEntry> read_manifest(const std::filesystem::path& path) {
    LineReader reader(path);
    std::vector<PlantEntry> out;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        out.push_back(parse_plant_entry(line, reader.line_number()));
    }
    return out;
}

} // namespace chainscan
