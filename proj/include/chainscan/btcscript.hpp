#pragma once

#include <optional>

#include "chainscan/common.hpp"
#include "chainscan/ingest.hpp"

namespace chainscan {

/// Where in a transaction a payload was inserted.
enum class InsertionChannel {
    StandardOutput,    // P2PK, P2PKH, P2MS (and the other standard templates)
    StandardInput,
    OpReturnOutput,
    NonStandardOutput,
    NonStandardInput,
    P2shInput,
    CoinbaseInput,
    EthInput,
    EthCoinbase,
};

std::string_view to_string(InsertionChannel channel);
InsertionChannel channel_from_string(std::string_view text);

struct ScriptToken {
    enum class Kind { Opcode, Pushdata };

    Kind kind;
    std::string text;
    Bytes bytes;  // empty for opcodes

    bool operator==(const ScriptToken&) const = default;
};

/// Splits script_asm on whitespace. Tokens starting with "OP_" are opcodes, as
/// are bitcoind's small-integer names that cannot be hex ("0", "-1", "1".."9").
/// Everything else is hex pushdata; a trailing sighash annotation such as
/// "[ALL]" is folded back into its byte. Throws DecodeError on bad pushdata.
std::vector<ScriptToken> tokenize(std::string_view script_asm);

/// In-order concatenation of pushdata bytes.
Bytes mutable_bytes(std::span<const ScriptToken> tokens);

/// Raised when a slot's type is unknown and its script gives nothing to inspect.
class ClassificationError : public Error {
public:
    using Error::Error;
};

InsertionChannel classify_slot(const ScriptSlot& slot, bool is_input);

struct ChannelPayload {
    InsertionChannel channel;
    Bytes bytes;
    std::string tx_hash;
    Timestamp block_timestamp;
};

struct SlotDiagnostic {
    bool is_input;
    std::size_t index;
    std::string message;
};

struct ChannelPayloads {
    std::vector<ChannelPayload> payloads;  // ordered by channel
    std::vector<SlotDiagnostic> diagnostics;
};

/// One payload per channel holding mutable bytes; bad slots become diagnostics.
ChannelPayloads channel_payloads(const BtcTransaction& tx);

/// A contiguous piece of a concatenated payload and the channel it came from.
struct Segment {
    std::size_t offset;
    InsertionChannel channel;
};

struct SegmentedPayload {
    Bytes bytes;
    std::vector<Segment> segments;  // ascending offsets, first at 0

    InsertionChannel channel_at(std::size_t offset) const;
};

struct FilePayloads {
    std::vector<SegmentedPayload> payloads;
    std::vector<SlotDiagnostic> diagnostics;
};

/// Payloads scanned for files: all outputs concatenated, then non-standard
/// inputs, then P2SH inputs. Empty groups are omitted.
FilePayloads file_payloads(const BtcTransaction& tx);

} // namespace chainscan
