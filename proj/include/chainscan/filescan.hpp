#pragma once

#include <optional>

#include "chainscan/btcscript.hpp"
#include "chainscan/ingest.hpp"

namespace chainscan {

enum class FileType { Png, Jpeg, Gif, Pdf, Zip, SevenZip, Webp, Doc, Mp3, Mp4, Mov, Wav, Avi, Rar, Tar };

inline constexpr FileType kAllFileTypes[] = {
    FileType::Png, FileType::Jpeg, FileType::Gif, FileType::Pdf, FileType::Zip,
    FileType::SevenZip, FileType::Webp, FileType::Doc, FileType::Mp3, FileType::Mp4,
    FileType::Mov, FileType::Wav, FileType::Avi, FileType::Rar, FileType::Tar,
};

std::string_view to_string(FileType type);
FileType file_type_from_string(std::string_view text);

/// Fixed bytes expected at `offset` from the start of the file.
struct MagicPart {
    std::size_t offset;
    Bytes bytes;
};

struct FileSignature {
    FileType file_type;
    std::vector<MagicPart> magic;  // all parts must match

    /// Total fixed bytes; used to prefer the most specific match at one offset.
    std::size_t min_signature_len() const;
};

/// Signatures for every supported file type. Immutable, shareable across threads.
const std::vector<FileSignature>& signature_table();

enum class InsertionMode { Embedded, Injected };
enum class ValidationStatus { Validated, Broken, ManualReview };

std::string_view to_string(InsertionMode mode);
InsertionMode insertion_mode_from_string(std::string_view text);
std::string_view to_string(ValidationStatus status);
ValidationStatus validation_status_from_string(std::string_view text);

struct FileFinding {
    Chain chain = Chain::Ethereum;
    std::string tx_hash;
    Timestamp block_timestamp{};
    InsertionChannel channel = InsertionChannel::EthInput;
    FileType file_type = FileType::Png;
    std::size_t offset = 0;
    Bytes bytes;  // carve: signature start to end of payload
    std::optional<InsertionMode> insertion_mode;  // Ethereum only
    ValidationStatus valid = ValidationStatus::ManualReview;

    bool operator==(const FileFinding&) const = default;
};

struct FileScanConfig {
    /// Carves shorter than this are not reported. 32 bytes cannot hold a complete file.
    std::size_t min_carve_bytes = 33;
};

/// One unvalidated finding per signature occurrence, ordered by offset. For
/// Ethereum channels the insertion mode is Embedded iff the offset is 0.
std::vector<FileFinding> scan_payload(ByteView payload, InsertionChannel channel, const FileScanConfig& cfg = {});

/// As scan_payload, labelling each finding with the channel its first byte came from.
std::vector<FileFinding> scan_segmented(const SegmentedPayload& payload, const FileScanConfig& cfg = {});

/// Structural check of the carve. Trailing bytes after the file are tolerated.
FileFinding validate(FileFinding finding);

/// Validated ZIPs whose members form a word-processing package become DOC.
FileFinding reclassify_doc(FileFinding finding);

/// Member names of a ZIP that starts at byte 0, or nullopt if the structure does not parse.
std::optional<std::vector<std::string>> zip_member_names(ByteView bytes);

ValidationStatus validate_bytes(FileType type, ByteView bytes);

// Record-level scans: scan, validate and reclassify.
std::vector<FileFinding> scan_btc_files(const BtcTransaction& tx, const FileScanConfig& cfg = {});
std::vector<FileFinding> scan_coinbase_files(const BtcBlock& block, const FileScanConfig& cfg = {});
std::vector<FileFinding> scan_eth_files(const EthTransaction& tx, const FileScanConfig& cfg = {});
std::vector<FileFinding> scan_eth_block_files(const EthBlock& block, const FileScanConfig& cfg = {});

/// File name extension for carved output ("docx" for DOC findings that are ZIP packages).
std::string_view file_extension(const FileFinding& finding);

} // namespace chainscan
