// Lightweight structural validators for carved files. Each walks just enough
// of the container to tell a real file from a signature that occurred by chance.

#include <algorithm>
#include <zlib.h>

#include "chainscan/filescan.hpp"

namespace chainscan {

namespace {

using Status = ValidationStatus;

std::uint32_t crc32_of(ByteView bytes) {
    return static_cast<std::uint32_t>(::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::uint16_t le16(ByteView b, std::size_t at) { return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8); }
std::uint32_t le32(ByteView b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
           static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}
std::uint64_t le64(ByteView b, std::size_t at) {
    return static_cast<std::uint64_t>(le32(b, at)) | static_cast<std::uint64_t>(le32(b, at + 4)) << 32;
}
std::uint16_t be16(ByteView b, std::size_t at) { return static_cast<std::uint16_t>(b[at] << 8 | b[at + 1]); }
std::uint32_t be32(ByteView b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) << 24 | static_cast<std::uint32_t>(b[at + 1]) << 16 |
           static_cast<std::uint32_t>(b[at + 2]) << 8 | static_cast<std::uint32_t>(b[at + 3]);
}

bool has(ByteView b, std::size_t at, std::size_t len) { return at <= b.size() && len <= b.size() - at; }

bool equals_at(ByteView b, std::size_t at, std::string_view text) {
    if (!has(b, at, text.size())) return false;
    return std::equal(text.begin(), text.end(), b.begin() + at,
                      [](char c, std::uint8_t x) { return static_cast<std::uint8_t>(c) == x; });
}

bool is_fourcc(ByteView b, std::size_t at) {
    if (!has(b, at, 4)) return false;
    return std::all_of(b.begin() + at, b.begin() + at + 4, [](std::uint8_t c) { return c >= 0x20 && c < 0x7f; });
}

Status png(ByteView b) {
    std::size_t pos = 8;
    bool first = true;
    bool idat = false;
    while (has(b, pos, 12)) {
        std::uint32_t len = be32(b, pos);
        if (!is_fourcc(b, pos + 4) || len > 0x7fffffff || !has(b, pos + 8, std::size_t{len} + 4)) return Status::Broken;
        if (first && (!equals_at(b, pos + 4, "IHDR") || len != 13)) return Status::Broken;
        first = false;
        if (crc32_of(b.subspan(pos + 4, len + 4)) != be32(b, pos + 8 + len)) return Status::Broken;
        if (equals_at(b, pos + 4, "IDAT")) idat = true;
        if (equals_at(b, pos + 4, "IEND")) return idat ? Status::Validated : Status::Broken;
        pos += 12 + len;
    }
    return Status::Broken;
}

bool is_sof(std::uint8_t m) { return m >= 0xc0 && m <= 0xcf && m != 0xc4 && m != 0xc8 && m != 0xcc; }

Status jpeg(ByteView b) {
    std::size_t pos = 2;
    bool sof = false, sos = false;
    while (pos < b.size()) {
        if (b[pos] != 0xff) return Status::Broken;
        while (pos < b.size() && b[pos] == 0xff) ++pos;
        if (pos >= b.size()) return Status::Broken;
        std::uint8_t marker = b[pos++];
        if (marker == 0xd9) return sof && sos ? Status::Validated : Status::Broken;
        if (marker == 0x00 || marker == 0xd8) return Status::Broken;
        if (marker == 0x01 || (marker >= 0xd0 && marker <= 0xd7)) continue;
        if (!has(b, pos, 2)) return Status::Broken;
        std::uint16_t len = be16(b, pos);
        if (len < 2 || !has(b, pos, len)) return Status::Broken;
        if (is_sof(marker)) sof = true;
        pos += len;
        if (marker == 0xda) {
            if (!sof) return Status::Broken;
            sos = true;
            // entropy-coded data runs until a marker other than stuffing or restart
            while (has(b, pos, 2)) {
                if (b[pos] == 0xff && b[pos + 1] != 0x00 && !(b[pos + 1] >= 0xd0 && b[pos + 1] <= 0xd7)) break;
                ++pos;
            }
            if (!has(b, pos, 2)) return Status::Broken;
        }
    }
    return Status::Broken;
}

bool skip_sub_blocks(ByteView b, std::size_t& pos) {
    while (pos < b.size()) {
        std::uint8_t size = b[pos++];
        if (size == 0) return true;
        if (!has(b, pos, size)) return false;
        pos += size;
    }
    return false;
}

Status gif(ByteView b) {
    if (!has(b, 0, 13)) return Status::Broken;
    std::size_t pos = 13;
    if (b[10] & 0x80) pos += 3u << ((b[10] & 0x07) + 1);
    int images = 0;
    while (pos < b.size()) {
        std::uint8_t block = b[pos++];
        if (block == 0x3b) return images > 0 ? Status::Validated : Status::Broken;
        if (block == 0x21) {
            if (pos >= b.size()) return Status::Broken;
            ++pos;  // label
            if (!skip_sub_blocks(b, pos)) return Status::Broken;
        } else if (block == 0x2c) {
            if (!has(b, pos, 9)) return Status::Broken;
            std::uint8_t flags = b[pos + 8];
            if (le16(b, pos + 4) == 0 || le16(b, pos + 6) == 0) return Status::Broken;
            pos += 9;
            if (flags & 0x80) pos += 3u << ((flags & 0x07) + 1);
            if (pos >= b.size()) return Status::Broken;
            std::uint8_t lzw = b[pos++];
            if (lzw < 2 || lzw > 8) return Status::Broken;
            if (!skip_sub_blocks(b, pos)) return Status::Broken;
            ++images;
        } else {
            return Status::Broken;
        }
    }
    return Status::Broken;
}

Status pdf(ByteView b) {
    // "%PDF-" followed by a version such as "1.4"
    if (!has(b, 5, 3) || b[5] < '1' || b[5] > '2' || b[6] != '.' || b[7] < '0' || b[7] > '9') return Status::Broken;
    std::string_view text(reinterpret_cast<const char*>(b.data()), b.size());
    return text.find("%%EOF", 8) != std::string_view::npos ? Status::Validated : Status::Broken;
}

Status sevenzip(ByteView b) {
    if (!has(b, 0, 32) || b[6] != 0) return Status::Broken;
    if (crc32_of(b.subspan(12, 20)) != le32(b, 8)) return Status::Broken;
    std::uint64_t next_offset = le64(b, 12);
    std::uint64_t next_size = le64(b, 20);
    if (next_size == 0) return next_offset == 0 ? Status::Validated : Status::Broken;
    if (next_offset > b.size() || next_size > b.size() || !has(b, 32 + next_offset, next_size)) return Status::Broken;
    auto header = b.subspan(32 + next_offset, next_size);
    if (crc32_of(header) != le32(b, 28)) return Status::Broken;
    return header[0] == 0x01 || header[0] == 0x17 ? Status::Validated : Status::Broken;
}

struct RiffChunk {
    std::size_t id_at;
    std::size_t data_at;
    std::uint32_t size;
};

// Chunks of a RIFF form; nullopt when the layout overflows the declared size.
std::optional<std::vector<RiffChunk>> riff_chunks(ByteView b, std::size_t begin, std::size_t end) {
    std::vector<RiffChunk> chunks;
    std::size_t pos = begin;
    while (pos + 8 <= end) {
        if (!is_fourcc(b, pos)) return std::nullopt;
        std::uint32_t size = le32(b, pos + 4);
        if (size > end - pos - 8) return std::nullopt;
        chunks.push_back({pos, pos + 8, size});
        pos += 8 + size + (size & 1);
    }
    // only a final pad byte may be left over inside the form
    if (pos < end && end - pos > 1) return std::nullopt;
    return chunks;
}

Status riff(FileType type, ByteView b) {
    if (!has(b, 0, 12)) return Status::Broken;
    std::uint32_t size = le32(b, 4);
    if (size < 4 || !has(b, 8, size)) return Status::Broken;
    auto chunks = riff_chunks(b, 12, 8 + std::size_t{size});
    if (!chunks || chunks->empty()) return Status::Broken;
    const auto& first = chunks->front();

    switch (type) {
    case FileType::Webp:
        if (equals_at(b, first.id_at, "VP8L")) {
            return first.size >= 5 && b[first.data_at] == 0x2f ? Status::Validated : Status::Broken;
        }
        if (equals_at(b, first.id_at, "VP8 ")) {
            return first.size >= 10 && b[first.data_at + 3] == 0x9d && b[first.data_at + 4] == 0x01 &&
                           b[first.data_at + 5] == 0x2a
                       ? Status::Validated
                       : Status::Broken;
        }
        return equals_at(b, first.id_at, "VP8X") && first.size >= 10 && chunks->size() >= 2 ? Status::Validated
                                                                                            : Status::Broken;
    case FileType::Wav: {
        bool fmt_ok = false, data = false;
        for (const auto& c : *chunks) {
            if (equals_at(b, c.id_at, "fmt ") && c.size >= 16) {
                std::uint16_t channels = le16(b, c.data_at + 2);
                std::uint32_t rate = le32(b, c.data_at + 4);
                fmt_ok = le16(b, c.data_at) != 0 && channels > 0 && rate > 0;
            }
            if (equals_at(b, c.id_at, "data")) data = true;
        }
        return fmt_ok && data ? Status::Validated : Status::Broken;
    }
    case FileType::Avi:
        if (!equals_at(b, first.id_at, "LIST") || first.size < 12 || !equals_at(b, first.data_at, "hdrl")) {
            return Status::Broken;
        }
        return equals_at(b, first.data_at + 4, "avih") ? Status::Validated : Status::Broken;
    default:
        return Status::Broken;
    }
}

// MPEG audio frame length in bytes, or 0 if the header is invalid.
std::size_t mpeg_frame_length(ByteView b, std::size_t at) {
    static constexpr int kBitrates[2][3][16] = {
        {{0, 32, 64, 96, 128, 160, 192, 224, 256, 288, 320, 352, 384, 416, 448, 0},
         {0, 32, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 384, 0},
         {0, 32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 0}},
        {{0, 32, 48, 56, 64, 80, 96, 112, 128, 144, 160, 176, 192, 224, 256, 0},
         {0, 8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160, 0},
         {0, 8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160, 0}},
    };
    static constexpr int kRates[3] = {44100, 48000, 32000};
    if (!has(b, at, 4) || b[at] != 0xff || (b[at + 1] & 0xe0) != 0xe0) return 0;
    int version = (b[at + 1] >> 3) & 0x03;  // 0: 2.5, 2: 2, 3: 1
    int layer = (b[at + 1] >> 1) & 0x03;    // 1: III, 2: II, 3: I
    int bitrate_index = b[at + 2] >> 4;
    int rate_index = (b[at + 2] >> 2) & 0x03;
    int padding = (b[at + 2] >> 1) & 0x01;
    if (version == 1 || layer == 0 || rate_index == 3) return 0;
    int table = version == 3 ? 0 : 1;
    int kbps = kBitrates[table][3 - layer][bitrate_index];
    if (kbps == 0) return 0;
    int rate = kRates[rate_index] >> (version == 3 ? 0 : version == 2 ? 1 : 2);
    int bitrate = kbps * 1000;
    if (layer == 3) return static_cast<std::size_t>((12 * bitrate / rate + padding) * 4);
    if (layer == 1 && version != 3) return static_cast<std::size_t>(72 * bitrate / rate + padding);
    return static_cast<std::size_t>(144 * bitrate / rate + padding);
}

Status mp3(ByteView b) {
    if (!has(b, 0, 10) || b[3] < 2 || b[3] > 4 || b[4] == 0xff) return Status::Broken;
    std::size_t tag = 0;
    for (int i = 6; i < 10; ++i) {
        if (b[i] & 0x80) return Status::Broken;
        tag = tag << 7 | b[i];
    }
    std::size_t pos = 10 + tag + ((b[3] == 4 && (b[5] & 0x10)) ? 10 : 0);
    auto length = mpeg_frame_length(b, pos);
    if (length == 0 || !has(b, pos, length)) return Status::Broken;
    return Status::Validated;
}

Status iso_media(ByteView b) {
    std::size_t pos = 0;
    bool ftyp = false, media = false;
    while (has(b, pos, 8) && is_fourcc(b, pos + 4)) {
        std::uint64_t size = be32(b, pos);
        std::size_t header = 8;
        if (size == 1) {
            if (!has(b, pos, 16)) break;
            size = static_cast<std::uint64_t>(be32(b, pos + 8)) << 32 | be32(b, pos + 12);
            header = 16;
        } else if (size == 0) {
            size = b.size() - pos;
        }
        if (size < header || size > b.size() - pos) {
            if (equals_at(b, pos + 4, "moov") || equals_at(b, pos + 4, "mdat")) return Status::Broken;
            break;
        }
        if (pos == 0) {
            if (!equals_at(b, 4, "ftyp") || size < 16) return Status::Broken;
            ftyp = true;
        }
        if (equals_at(b, pos + 4, "moov") || equals_at(b, pos + 4, "mdat")) media = true;
        pos += size;
    }
    if (!ftyp) return Status::Broken;
    return media ? Status::Validated : Status::ManualReview;
}

std::optional<std::uint64_t> read_vint(ByteView b, std::size_t& pos) {
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64 && pos < b.size(); shift += 7) {
        std::uint8_t byte = b[pos++];
        value |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
        if (!(byte & 0x80)) return value;
    }
    return std::nullopt;
}

Status rar5(ByteView b) {
    std::size_t pos = 8;
    bool first = true;
    while (has(b, pos, 5)) {
        std::uint32_t crc = le32(b, pos);
        std::size_t size_at = pos + 4;
        std::size_t cursor = size_at;
        auto header_size = read_vint(b, cursor);
        if (!header_size || *header_size == 0 || *header_size > b.size() || !has(b, cursor, *header_size)) {
            return Status::Broken;
        }
        std::size_t header_end = cursor + *header_size;
        if (crc32_of(b.subspan(size_at, header_end - size_at)) != crc) return Status::Broken;
        auto type = read_vint(b, cursor);
        auto flags = read_vint(b, cursor);
        if (!type || !flags) return Status::Broken;
        if (first && *type != 1) return Status::Broken;
        first = false;
        if (*type == 5) return Status::Validated;
        std::uint64_t data_size = 0;
        if (*flags & 0x01 && !read_vint(b, cursor)) return Status::Broken;
        if (*flags & 0x02) {
            auto ds = read_vint(b, cursor);
            if (!ds) return Status::Broken;
            data_size = *ds;
        }
        if (cursor > header_end || data_size > b.size() || !has(b, header_end, data_size)) return Status::Broken;
        pos = header_end + data_size;
    }
    return Status::Broken;
}

Status rar4(ByteView b) {
    std::size_t pos = 7;
    bool first = true;
    while (has(b, pos, 7)) {
        std::uint16_t crc = le16(b, pos);
        std::uint8_t type = b[pos + 2];
        std::uint16_t flags = le16(b, pos + 3);
        std::uint16_t size = le16(b, pos + 5);
        if (size < 7 || !has(b, pos, size)) return Status::Broken;
        if ((crc32_of(b.subspan(pos + 2, size - 2)) & 0xffff) != crc) return Status::Broken;
        if (first && type != 0x73) return Status::Broken;
        first = false;
        if (type == 0x7b) return Status::Validated;
        std::uint64_t add = (flags & 0x8000) && size >= 11 ? le32(b, pos + 7) : 0;
        if (add > b.size()) return Status::Broken;
        pos += size + add;
    }
    // archives written before end-of-archive blocks existed simply stop
    return first ? Status::Broken : Status::ManualReview;
}

std::optional<std::uint64_t> octal(ByteView b, std::size_t at, std::size_t len) {
    std::uint64_t value = 0;
    bool digits = false;
    for (std::size_t i = at; i < at + len; ++i) {
        std::uint8_t c = b[i];
        if (c == 0 || c == ' ') {
            if (digits) break;
            continue;
        }
        if (c < '0' || c > '7') return std::nullopt;
        value = value * 8 + (c - '0');
        digits = true;
    }
    if (!digits) return std::nullopt;
    return value;
}

Status tar(ByteView b) {
    if (!has(b, 0, 512)) return Status::Broken;
    auto stored = octal(b, 148, 8);
    auto size = octal(b, 124, 12);
    if (!stored || !size) return Status::Broken;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < 512; ++i) sum += (i >= 148 && i < 156) ? ' ' : b[i];
    if (sum != *stored) return Status::Broken;
    std::uint64_t blocks = (*size + 511) / 512;
    if (blocks > b.size() / 512 || !has(b, 512, blocks * 512)) return Status::Broken;
    return Status::Validated;
}

Status ole(ByteView b) {
    if (!has(b, 0, 512) || le16(b, 28) != 0xfffe) return Status::Broken;
    std::uint16_t shift = le16(b, 30);
    if ((shift != 9 && shift != 12) || le16(b, 32) != 6) return Status::Broken;
    std::size_t sector = std::size_t{1} << shift;
    std::uint32_t first_dir = le32(b, 48);
    if (first_dir >= 0xfffffffa) return Status::Broken;
    std::uint64_t offset = (static_cast<std::uint64_t>(first_dir) + 1) * sector;
    if (offset > b.size() || !has(b, offset, 128)) return Status::Broken;
    bool root = false;
    for (std::size_t e = offset; e + 128 <= offset + sector && has(b, e, 128); e += 128) {
        std::uint16_t name_len = le16(b, e + 64);
        std::uint8_t kind = b[e + 66];
        if (kind == 5) root = true;
        if (name_len < 2 || name_len > 64) continue;
        std::string name;
        for (std::size_t i = 0; i + 2 < name_len; i += 2) name.push_back(static_cast<char>(b[e + i]));
        if (name == "WordDocument" && kind == 2) return Status::Validated;
    }
    return root ? Status::ManualReview : Status::Broken;
}

} // namespace

std::optional<std::vector<std::string>> zip_member_names(ByteView b) {
    if (!equals_at(b, 0, "PK\x03\x04")) return std::nullopt;
    for (std::size_t e = b.size() >= 22 ? b.size() - 22 + 1 : 0; e-- > 0;) {
        if (!equals_at(b, e, "PK\x05\x06")) continue;
        std::uint16_t entries = le16(b, e + 10);
        std::uint32_t cd_size = le32(b, e + 12);
        std::uint32_t cd_offset = le32(b, e + 16);
        if (entries == 0 || std::uint64_t{cd_offset} + cd_size > e) continue;

        std::vector<std::string> names;
        std::size_t pos = cd_offset;
        bool starts_here = false;
        bool ok = true;
        for (std::uint16_t i = 0; i < entries && ok; ++i) {
            if (!equals_at(b, pos, "PK\x01\x02") || !has(b, pos, 46)) {
                ok = false;
                break;
            }
            std::uint16_t name_len = le16(b, pos + 28);
            std::uint16_t extra_len = le16(b, pos + 30);
            std::uint16_t comment_len = le16(b, pos + 32);
            std::uint32_t local = le32(b, pos + 42);
            if (!has(b, pos + 46, std::size_t{name_len} + extra_len + comment_len) ||
                !equals_at(b, local, "PK\x03\x04") || !has(b, local, 30)) {
                ok = false;
                break;
            }
            if (local == 0) starts_here = true;
            names.emplace_back(reinterpret_cast<const char*>(b.data() + pos + 46), name_len);
            pos += 46 + name_len + extra_len + comment_len;
        }
        if (ok && starts_here) return names;
    }
    return std::nullopt;
}

ValidationStatus validate_bytes(FileType type, ByteView b) {
    switch (type) {
    case FileType::Png: return png(b);
    case FileType::Jpeg: return jpeg(b);
    case FileType::Gif: return gif(b);
    case FileType::Pdf: return pdf(b);
    case FileType::Zip: return zip_member_names(b) ? Status::Validated : Status::Broken;
    case FileType::SevenZip: return sevenzip(b);
    case FileType::Webp:
    case FileType::Wav:
    case FileType::Avi: return riff(type, b);
    case FileType::Doc:
        if (equals_at(b, 0, "PK\x03\x04")) return zip_member_names(b) ? Status::Validated : Status::Broken;
        return ole(b);
    case FileType::Mp3: return mp3(b);
    case FileType::Mp4:
    case FileType::Mov: return iso_media(b);
    case FileType::Rar:
        if (equals_at(b, 0, "Rar!\x1a\x07\x01\x00")) return rar5(b);
        return rar4(b);
    case FileType::Tar: return tar(b);
    }
    return Status::Broken;
}

} // namespace chainscan
