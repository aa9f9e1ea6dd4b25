#include "chainscan/urlscan.hpp"

#include <array>
#include <fmt/format.h>

namespace chainscan {

namespace {

constexpr std::array<std::string_view, 3> kSchemes = {"http://", "https://", "ipfs://"};

bool is_ascii_alnum(std::uint8_t c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool starts_with(ByteView payload, std::size_t pos, std::string_view prefix) {
    if (payload.size() - pos < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (payload[pos + i] != static_cast<std::uint8_t>(prefix[i])) return false;
    }
    return true;
}

SchemeClass class_of_scheme(std::string_view scheme) {
    return scheme == "ipfs://" ? SchemeClass::Ipfs : SchemeClass::Http;
}

} // namespace

std::string_view to_string(SchemeClass scheme) {
    switch (scheme) {
    case SchemeClass::Http: return "http";
    case SchemeClass::Ipfs: return "ipfs";
    case SchemeClass::Onion: return "onion";
    }
    return "unknown";
}

SchemeClass scheme_from_string(std::string_view text) {
    if (text == "http") return SchemeClass::Http;
    if (text == "ipfs") return SchemeClass::Ipfs;
    if (text == "onion") return SchemeClass::Onion;
    throw Error(fmt::format("unknown scheme class '{}'", text));
}

std::string_view to_string(UrlDropReason reason) {
    switch (reason) {
    case UrlDropReason::UnknownScheme: return "unknown_scheme";
    case UrlDropReason::ForbiddenCharacter: return "forbidden_character";
    case UrlDropReason::EmptyAuthority: return "empty_authority";
    case UrlDropReason::NoDotInAuthority: return "no_dot_in_authority";
    }
    return "unknown";
}

bool is_url_char(std::uint8_t c) noexcept {
    if (is_ascii_alnum(c)) return true;
    switch (c) {
    case '-': case '.': case '_': case '~':                                     // unreserved
    case ':': case '/': case '?': case '#': case '[': case ']': case '@':       // gen-delims
    case '!': case '$': case '&': case '\'': case '(': case ')': case '*':      // sub-delims
    case '+': case ',': case ';': case '=':
    case '%':
        return true;
    default:
        return false;
    }
}

std::optional<UrlFinding> find_url(ByteView payload, std::size_t min_wildcard_chars) {
    for (std::size_t pos = 0; pos < payload.size(); ++pos) {
        if (payload[pos] != 'h' && payload[pos] != 'i') continue;
        for (auto scheme : kSchemes) {
            if (!starts_with(payload, pos, scheme)) continue;
            auto end = pos + scheme.size();
            while (end < payload.size() && is_url_char(payload[end])) ++end;
            if (end - pos - scheme.size() < min_wildcard_chars) continue;
            UrlFinding finding;
            finding.url = to_string(payload.subspan(pos, end - pos));
            finding.scheme_class = class_of_scheme(scheme);
            finding.offset = pos;
            return finding;
        }
    }
    return std::nullopt;
}

std::optional<UrlFinding> find_onion(ByteView payload, std::size_t min_label_chars) {
    constexpr std::string_view kSuffix = ".onion";
    for (std::size_t pos = 0; pos < payload.size(); ++pos) {
        if (payload[pos] != '.' || !starts_with(payload, pos, kSuffix)) continue;
        auto start = pos;
        while (start > 0 && is_ascii_alnum(payload[start - 1])) --start;
        if (pos - start < min_label_chars) continue;
        UrlFinding finding;
        finding.url = to_string(payload.subspan(start, pos + kSuffix.size() - start));
        finding.scheme_class = SchemeClass::Onion;
        finding.offset = start;
        return finding;
    }
    return std::nullopt;
}

UrlValidation validate_and_classify(UrlFinding raw) {
    auto drop = [](UrlDropReason reason) { return UrlValidation{std::nullopt, reason}; };
    std::string_view url = raw.url;
    for (char c : url) {
        auto b = static_cast<std::uint8_t>(c);
        if (b <= 0x20 || b == 0x7f) return drop(UrlDropReason::ForbiddenCharacter);
    }

    auto sep = url.find("://");
    if (sep == std::string_view::npos) {
        // bare onion address from find_onion
        if (url.ends_with(".onion") && url.size() > 6) {
            raw.scheme_class = SchemeClass::Onion;
            return {std::move(raw), std::nullopt};
        }
        return drop(UrlDropReason::UnknownScheme);
    }
    auto scheme = url.substr(0, sep);
    if (scheme != "http" && scheme != "https" && scheme != "ipfs") return drop(UrlDropReason::UnknownScheme);

    auto rest = url.substr(sep + 3);
    auto authority = rest.substr(0, rest.find_first_of("/?#"));
    auto host = authority;
    if (auto at = host.rfind('@'); at != std::string_view::npos) host.remove_prefix(at + 1);
    if (!host.starts_with('[')) {
        if (auto colon = host.rfind(':'); colon != std::string_view::npos) host = host.substr(0, colon);
    }
    if (host.empty()) return drop(UrlDropReason::EmptyAuthority);

    if (host.ends_with(".onion")) {
        raw.scheme_class = SchemeClass::Onion;
    } else if (scheme == "ipfs") {
        raw.scheme_class = SchemeClass::Ipfs;
    } else {
        if (!host.starts_with('[') && host.find('.') == std::string_view::npos) {
            return drop(UrlDropReason::NoDotInAuthority);
        }
        raw.scheme_class = SchemeClass::Http;
    }
    return {std::move(raw), std::nullopt};
}

UrlValidation detect_url(ByteView payload, const UrlScanConfig& cfg) {
    auto url = find_url(payload, cfg.min_wildcard_chars);
    auto onion = find_onion(payload, cfg.min_onion_label_chars);
    std::optional<UrlFinding> first;
    if (url && onion) {
        first = onion->offset < url->offset ? std::move(onion) : std::move(url);
    } else {
        first = url ? std::move(url) : std::move(onion);
    }
    if (!first) return {};
    return validate_and_classify(std::move(*first));
}

UrlValidation scan_eth_urls(const EthTransaction& tx, const UrlScanConfig& cfg) {
    auto result = detect_url(tx.input, cfg);
    if (result.kept) {
        result.kept->chain = Chain::Ethereum;
        result.kept->tx_hash = tx.hash;
        result.kept->block_timestamp = tx.block_timestamp;
    }
    return result;
}

UrlValidation scan_btc_urls(std::span<const TextFinding> findings, const UrlScanConfig& cfg) {
    for (const auto& text : findings) {
        auto result = detect_url(as_bytes(text.text), cfg);
        if (!result.kept && !result.dropped) continue;
        if (result.kept) {
            result.kept->chain = Chain::Bitcoin;
            result.kept->tx_hash = text.tx_hash;
            result.kept->block_timestamp = text.block_timestamp;
        }
        return result;
    }
    return {};
}

} // namespace chainscan
