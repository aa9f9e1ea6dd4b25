#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <set>

#include "chainscan/btcscript.hpp"
#include "chainscan/filescan.hpp"
#include "chainscan/ingest.hpp"
#include "chainscan/textscan.hpp"
#include "chainscan/urlscan.hpp"

// Synthetic chain exports with a ground-truth manifest of everything planted.
// Output is a pure function of (seed, counts, noise).

namespace chainscan {

enum class PlantKind { Text, Url, File };

std::string_view to_string(PlantKind kind);
PlantKind plant_kind_from_string(std::string_view text);

/// One planted item and what a correct scan must report for it.
struct PlantEntry {
    std::string tx_hash;
    Chain chain = Chain::Bitcoin;
    InsertionChannel channel = InsertionChannel::OpReturnOutput;
    PlantKind kind = PlantKind::Text;
    /// Text: the whole channel payload. Url: the match string. File: the carve.
    Bytes payload;
    /// Url: offset within the scanned payload. File: carve start within the scanned payload.
    std::size_t offset = 0;
    std::set<TextualType> classes;             // Text
    std::optional<SchemeClass> scheme_class;   // Url
    std::optional<FileType> file_type;         // File
    std::optional<InsertionMode> insertion_mode;  // File on Ethereum

    bool operator==(const PlantEntry&) const = default;
};

std::string to_json_line(const PlantEntry& entry);
PlantEntry parse_plant_entry(std::string_view line, std::size_t line_no = 0);

struct PlantCounts {
    /// Round-robin over the five Bitcoin text channels, then Ethereum input.
    std::size_t texts = 240;
    /// Cycles HTTP, IPFS, onion; alternates Bitcoin and Ethereum.
    std::size_t urls = 32;
    /// Rounds of the sample-file set; each round plants every sample on
    /// Bitcoin once and on Ethereum once per insertion mode.
    std::size_t file_rounds = 1;
};

struct Corpus {
    std::vector<BtcTransaction> btc_transactions;
    std::vector<BtcBlock> btc_blocks;
    std::vector<EthTransaction> eth_transactions;
    std::vector<EthBlock> eth_blocks;
    std::vector<PlantEntry> manifest;

    std::size_t record_count() const {
        return btc_transactions.size() + btc_blocks.size() + eth_transactions.size() + eth_blocks.size();
    }
};

/// A payload does not fit the channel it was routed to.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Largest payload each Bitcoin channel accepts from the generator.
std::size_t channel_capacity(InsertionChannel channel);

/// Deterministic draws. Bounded draws use modulo reduction rather than
/// std::uniform_int_distribution, whose output is not specified across
/// standard libraries.
class CorpusRng {
public:
    explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    Bytes bytes(std::size_t n);
    std::string hex_hash();

private:
    std::mt19937_64 engine_;
};

/// Encoders put `payload` into the named channel, laid out the way real
/// transactions carry data. OP_RETURN and non-standard output plants get a
/// change output first, so the payload starts at byte 20 of the concatenated
/// output scripts. Standard-output payloads must fill whole slots.
BtcTransaction encode_btc_payload(InsertionChannel channel, ByteView payload, std::string hash, Timestamp ts,
                                  CorpusRng& rng);
BtcBlock encode_coinbase_payload(ByteView payload, std::string hash, Timestamp ts);

/// Contract call with `payload` as a trailing dynamic bytes argument.
Bytes abi_wrap(ByteView payload, CorpusRng& rng);
/// Offset of the payload inside abi_wrap's output.
inline constexpr std::size_t kAbiPayloadOffset = 4 + 32 + 32;

Corpus generate(std::uint64_t seed, const PlantCounts& counts = {}, std::size_t noise_records = 0);

inline constexpr std::string_view kBtcTransactionsFile = "btc_transactions.ndjson";
inline constexpr std::string_view kBtcBlocksFile = "btc_blocks.ndjson";
inline constexpr std::string_view kEthTransactionsFile = "eth_transactions.ndjson";
inline constexpr std::string_view kEthBlocksFile = "eth_blocks.ndjson";
inline constexpr std::string_view kManifestFile = "manifest.ndjson";

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
std::vector<PlantEntry> read_manifest(const std::filesystem::path& path);

} // namespace chainscan
