#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <doctest.h>

#include <httplib.h>
#include <thread>

#include "chainscan/liveness.hpp"

using namespace chainscan;

TEST_CASE("classify_response") {
    CHECK(classify_response(200, "ok") == Liveness::Alive);
    CHECK(classify_response(204, "") == Liveness::Alive);
    CHECK(classify_response(404, "") == Liveness::Dead);
    CHECK(classify_response(410, "") == Liveness::Dead);
    CHECK(classify_response(500, "") == Liveness::Dead);
    CHECK(classify_response(403, "") == Liveness::Restricted);
    CHECK(classify_response(451, "") == Liveness::Restricted);
}

TEST_CASE("check_liveness against a local server") {
    httplib::Server server;
    server.Get("/ok", [](const httplib::Request&, httplib::Response& res) { res.set_content("hello", "text/plain"); });
    server.Get("/gone", [](const httplib::Request&, httplib::Response& res) { res.status = 410; });
    server.Get("/forbidden", [](const httplib::Request&, httplib::Response& res) { res.status = 403; });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto base = "http://127.0.0.1:" + std::to_string(port);
    LivenessOptions options;
    options.timeout = std::chrono::milliseconds(2000);
    std::vector<std::string> urls = {base + "/ok", base + "/missing", base + "/gone", base + "/forbidden"};
    auto results = check_liveness_all(urls, 2, options);
    REQUIRE(results.size() == 4);
    CHECK(results[0].status == Liveness::Alive);
    CHECK(results[0].http_status == 200);
    CHECK(results[1].status == Liveness::Dead);
    CHECK(results[1].http_status == 404);
    CHECK(results[2].status == Liveness::Dead);
    CHECK(results[3].status == Liveness::Restricted);
    for (std::size_t i = 0; i < urls.size(); ++i) CHECK(results[i].url == urls[i]);

    server.stop();
    thread.join();

    auto closed = check_liveness(base + "/ok", options);
    CHECK(closed.status == Liveness::Dead);
    CHECK(closed.http_status == 0);
}
