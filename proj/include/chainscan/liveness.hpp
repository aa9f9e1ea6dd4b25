#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "chainscan/common.hpp"

// Network access lives only here; scans never call into this module.

namespace chainscan {

enum class Liveness { Alive, Dead, Restricted };

std::string_view to_string(Liveness liveness);

struct LivenessOptions {
    std::chrono::milliseconds timeout{5000};
    /// ipfs://<cid>/<path> is fetched as <gateway><cid>/<path>.
    std::string ipfs_gateway = "https://ipfs.io/ipfs/";
};

struct LivenessResult {
    std::string url;
    Liveness status = Liveness::Dead;
    int http_status = 0;  // 0 when no response arrived
    std::string detail;
};

/// Maps an HTTP response to a liveness class: 2xx is Alive unless the body
/// announces removed content; 401/403/451 are Restricted; everything else Dead.
Liveness classify_response(int http_status, std::string_view body);

LivenessResult check_liveness(const std::string& url, const LivenessOptions& options = {});

/// Checks every URL with at most `max_concurrency` requests in flight. Results keep input order.
std::vector<LivenessResult> check_liveness_all(const std::vector<std::string>& urls, std::size_t max_concurrency,
                                               const LivenessOptions& options = {});

} // namespace chainscan
