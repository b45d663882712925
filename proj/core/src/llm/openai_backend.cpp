#include "rrqa/llm/openai_backend.hpp"

#include "rrqa/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <thread>

namespace rrqa {

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint_url has no scheme: " + url);
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw ConfigError("endpoint_url must be http or https: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string truncate(const std::string& s, std::size_t n = 200) {
    return s.size() <= n ? s : s.substr(0, n) + "...";
}

}  // namespace

OpenAIBackend::OpenAIBackend()
    : OpenAIBackend([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

OpenAIBackend::OpenAIBackend(Sleeper sleeper) : sleeper_(std::move(sleeper)) {}

nlohmann::json OpenAIBackend::request_body(const ModelConfig& config, std::span<const ChatMessage> messages) {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    return {{"model", config.model_name},
            {"messages", std::move(msgs)},
            {"temperature", config.temperature},
            {"top_p", config.top_p},
            {"max_tokens", config.max_output_tokens}};
}

ChatExchange OpenAIBackend::complete(const ModelConfig& config, std::span<const ChatMessage> messages) {
    config.validate();
    validate_messages(messages);
    const auto& endpoint = config.endpoint_url;
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key) {
        throw AuthError("API key environment variable " + config.api_key_env + " is not set (endpoint " +
                            endpoint + ", attempt 0)",
                        endpoint, 0);
    }
    const auto url = parse_url(endpoint);
    const auto body = request_body(config, messages).dump();
    const httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};

    const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - timeout_s);

    auto backoff = config.retry.initial_backoff;
    std::string last_problem;
    bool last_was_rate_limit = false;
    const int max_attempts = config.retry.max_attempts;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        httplib::Client client(url.origin);
        client.set_connection_timeout(timeout_s.count(), timeout_us.count());
        client.set_read_timeout(timeout_s.count(), timeout_us.count());
        client.set_write_timeout(timeout_s.count(), timeout_us.count());
        const auto started = std::chrono::steady_clock::now();
        requests_.fetch_add(1);
        auto res = client.Post(url.path, headers, body, "application/json");
        const auto latency =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

        const auto where = " (endpoint " + endpoint + ", attempt " + std::to_string(attempt) + "/" +
                           std::to_string(max_attempts) + ")";
        if (!res) {
            last_problem = "transport failure: " + httplib::to_string(res.error()) + where;
            last_was_rate_limit = false;
        } else if (res->status == 401 || res->status == 403) {
            throw AuthError("endpoint rejected credentials with HTTP " + std::to_string(res->status) + where,
                            endpoint, attempt);
        } else if (res->status == 429) {
            last_problem = "rate limited (HTTP 429)" + where;
            last_was_rate_limit = true;
        } else if (res->status == 408 || res->status >= 500) {
            last_problem = "HTTP " + std::to_string(res->status) + where;
            last_was_rate_limit = false;
        } else if (res->status != 200) {
            throw TransportError("HTTP " + std::to_string(res->status) + ": " + truncate(res->body) + where,
                                 endpoint, attempt);
        } else {
            auto j = nlohmann::json::parse(res->body, nullptr, false);
            const nlohmann::json* content = nullptr;
            if (!j.is_discarded() && j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
                const auto& choice = j["choices"][0];
                if (choice.contains("message") && choice["message"].contains("content") &&
                    choice["message"]["content"].is_string()) {
                    content = &choice["message"]["content"];
                }
            }
            if (!content) {
                throw MalformedResponse("response is not a chat completion: " + truncate(res->body) + where,
                                        endpoint, attempt);
            }
            ChatExchange ex;
            ex.messages.assign(messages.begin(), messages.end());
            ex.response_text = content->get<std::string>();
            ex.latency = latency;
            if (j.contains("usage") && j["usage"].is_object()) {
                const auto& u = j["usage"];
                ex.usage = TokenUsage{u.value("prompt_tokens", 0), u.value("completion_tokens", 0),
                                      u.value("total_tokens", 0)};
            }
            return ex;
        }
        if (attempt < max_attempts) {
            sleeper_(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long long>(static_cast<double>(backoff.count()) * config.retry.multiplier));
        }
    }
    if (last_was_rate_limit) throw RateLimited("retries exhausted: " + last_problem, endpoint, max_attempts);
    throw TransportError("retries exhausted: " + last_problem, endpoint, max_attempts);
}

}  // namespace rrqa
