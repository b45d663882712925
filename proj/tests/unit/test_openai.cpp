#include <doctest.h>

#include "rrqa/errors.hpp"
#include "rrqa/llm/openai_backend.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace rrqa;

namespace {

/// Local chat-completions stand-in; replies with the scripted statuses in order.
class MockServer {
public:
    explicit MockServer(std::vector<std::pair<int, std::string>> replies) : replies_(std::move(replies)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            last_auth = req.get_header_value("Authorization");
            last_body = req.body;
            const auto i = std::min<std::size_t>(hits.fetch_add(1), replies_.size() - 1);
            res.status = replies_[i].first;
            res.set_content(replies_[i].second, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

    std::atomic<std::size_t> hits{0};
    std::string last_auth;
    std::string last_body;

private:
    std::vector<std::pair<int, std::string>> replies_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

const std::string kOk =
    R"({"choices": [{"message": {"role": "assistant", "content": "Paris"}}],
        "usage": {"prompt_tokens": 5, "completion_tokens": 1, "total_tokens": 6}})";

ModelConfig config_for(const MockServer& s) {
    ModelConfig c;
    c.endpoint_url = s.url();
    c.api_key_env = "RRQA_TEST_MOCK_KEY";
    c.timeout = std::chrono::milliseconds(5000);
    c.retry.max_attempts = 3;
    c.retry.initial_backoff = std::chrono::milliseconds(100);
    return c;
}

Messages ask() { return {{Role::user, "Capital of France?"}}; }

struct Sleeps {
    std::vector<std::chrono::milliseconds> seen;
    OpenAIBackend::Sleeper fn() {
        return [this](std::chrono::milliseconds d) { seen.push_back(d); };
    }
};

}  // namespace

TEST_CASE("successful completion") {
    setenv("RRQA_TEST_MOCK_KEY", "test-key", 1);
    MockServer server({{200, kOk}});
    Sleeps sleeps;
    OpenAIBackend backend(sleeps.fn());
    auto ex = backend.complete(config_for(server), ask());
    CHECK(ex.response_text == "Paris");
    REQUIRE(ex.usage);
    CHECK(ex.usage->total_tokens == 6);
    CHECK(server.last_auth == "Bearer test-key");
    auto body = nlohmann::json::parse(server.last_body);
    CHECK(body["messages"][0]["role"] == "user");
    CHECK(body["model"] == "gpt-3.5-turbo");
    CHECK(sleeps.seen.empty());
}

TEST_CASE("rate limit is retried with backoff") {
    setenv("RRQA_TEST_MOCK_KEY", "test-key", 1);
    MockServer server({{429, "{}"}, {503, "{}"}, {200, kOk}});
    Sleeps sleeps;
    OpenAIBackend backend(sleeps.fn());
    CHECK(backend.complete(config_for(server), ask()).response_text == "Paris");
    CHECK(backend.requests_sent() == 3);
    CHECK(sleeps.seen == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                                std::chrono::milliseconds(200)});
}

TEST_CASE("bad credentials fail at once") {
    setenv("RRQA_TEST_MOCK_KEY", "wrong", 1);
    MockServer server({{401, R"({"error": "bad key"})"}});
    OpenAIBackend backend([](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(backend.complete(config_for(server), ask()), AuthError);
    CHECK(server.hits == 1);
}

TEST_CASE("server errors exhaust retries") {
    setenv("RRQA_TEST_MOCK_KEY", "test-key", 1);
    MockServer server({{500, "{}"}});
    Sleeps sleeps;
    OpenAIBackend backend(sleeps.fn());
    try {
        backend.complete(config_for(server), ask());
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(std::string(e.what()).find("attempt 3/3") != std::string::npos);
    }
    CHECK(server.hits == 3);

    MockServer limited({{429, "{}"}});
    CHECK_THROWS_AS(backend.complete(config_for(limited), ask()), RateLimited);
}

TEST_CASE("malformed body") {
    setenv("RRQA_TEST_MOCK_KEY", "test-key", 1);
    MockServer server({{200, R"({"choices": []})"}});
    OpenAIBackend backend([](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(backend.complete(config_for(server), ask()), MalformedResponse);
}

TEST_CASE("missing key never sends a request") {
    unsetenv("RRQA_TEST_MOCK_KEY");
    MockServer server({{200, kOk}});
    OpenAIBackend backend([](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(backend.complete(config_for(server), ask()), AuthError);
    CHECK(server.hits == 0);
    CHECK(backend.requests_sent() == 0);
}

TEST_CASE("unreachable endpoint is a transport error") {
    setenv("RRQA_TEST_MOCK_KEY", "test-key", 1);
    ModelConfig c;
    c.api_key_env = "RRQA_TEST_MOCK_KEY";
    c.endpoint_url = "http://127.0.0.1:1/v1/chat/completions";
    c.retry.max_attempts = 2;
    c.timeout = std::chrono::milliseconds(500);
    OpenAIBackend backend([](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(backend.complete(c, ask()), TransportError);
    c.endpoint_url = "ftp://example";
    CHECK_THROWS_AS(backend.complete(c, ask()), ConfigError);
}
