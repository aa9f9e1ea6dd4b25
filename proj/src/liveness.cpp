#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "chainscan/liveness.hpp"

#include <algorithm>
#include <atomic>
#include <httplib.h>
#include <thread>

namespace chainscan {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool announces_removal(std::string_view body) {
    static constexpr std::string_view kMarkers[] = {
        "this content isn't available",
        "this video is unavailable",
        "has been removed",
        "account suspended",
        "page not found",
        "this tweet is unavailable",
    };
    auto lowered = lowercase(body.substr(0, 1 << 16));
    return std::any_of(std::begin(kMarkers), std::end(kMarkers),
                       [&](std::string_view m) { return lowered.find(m) != std::string::npos; });
}

} // namespace

std::string_view to_string(Liveness liveness) {
    switch (liveness) {
    case Liveness::Alive: return "alive";
    case Liveness::Dead: return "dead";
    case Liveness::Restricted: return "restricted";
    }
    return "unknown";
}

Liveness classify_response(int http_status, std::string_view body) {
    if (http_status >= 200 && http_status < 300) {
        return announces_removal(body) ? Liveness::Restricted : Liveness::Alive;
    }
    if (http_status == 401 || http_status == 403 || http_status == 451) return Liveness::Restricted;
    return Liveness::Dead;
}

LivenessResult check_liveness(const std::string& url, const LivenessOptions& options) {
    LivenessResult result;
    result.url = url;

    std::string target = url;
    if (target.starts_with("ipfs://")) target = options.ipfs_gateway + target.substr(7);

    auto sep = target.find("://");
    if (sep == std::string::npos) {
        result.detail = "not an absolute URL";
        return result;
    }
    auto path_start = target.find_first_of("/?#", sep + 3);
    std::string origin = target.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : target.substr(path_start);
    if (path.starts_with('?') || path.starts_with('#')) path = "/" + path;
    if (auto hash = path.find('#'); hash != std::string::npos) path.erase(hash);

    auto host = origin.substr(sep + 3);
    if (host.ends_with(".onion") || host.find(".onion:") != std::string::npos) {
        result.detail = "onion services need a Tor proxy";
        return result;
    }

    try {
        httplib::Client client(origin);
        auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
        auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - seconds);
        client.set_connection_timeout(seconds.count(), micros.count());
        client.set_read_timeout(seconds.count(), micros.count());
        client.set_write_timeout(seconds.count(), micros.count());
        client.set_follow_location(true);
        auto response = client.Get(path);
        if (!response) {
            result.detail = httplib::to_string(response.error());
            return result;
        }
        result.http_status = response->status;
        result.status = classify_response(response->status, response->body);
    } catch (const std::exception& e) {
        result.detail = e.what();
    }
    return result;
}

std::vector<LivenessResult> check_liveness_all(const std::vector<std::string>& urls, std::size_t max_concurrency,
                                               const LivenessOptions& options) {
    std::vector<LivenessResult> results(urls.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < urls.size(); i = next++) results[i] = check_liveness(urls[i], options);
    };
    {
        std::vector<std::jthread> pool;
        auto threads = std::clamp<std::size_t>(max_concurrency, 1, std::max<std::size_t>(urls.size(), 1));
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    return results;
}

} // namespace chainscan
