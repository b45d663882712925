#include "rrqa/llm/backend.hpp"

#include "rrqa/digest.hpp"
#include "rrqa/errors.hpp"

#include <nlohmann/json.hpp>

namespace rrqa {

std::string_view to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

Role role_from_string(std::string_view s) {
    if (s == "system") return Role::system;
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    throw ValidationError("unknown chat role '" + std::string(s) + "'");
}

void validate_messages(std::span<const ChatMessage> messages) {
    if (messages.empty()) throw ValidationError("chat request has no messages");
    if (messages.back().role == Role::assistant)
        throw ValidationError("last chat message must be a user or system turn");
}

void ModelConfig::validate() const {
    if (model_name.empty()) throw ConfigError("model_name is empty");
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw ConfigError("temperature must be in [0, 2]");
    if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must be in (0, 1]");
    if (max_output_tokens < 1) throw ConfigError("max_output_tokens must be positive");
    if (retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
    if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
    j = nlohmann::json{{"model_name", c.model_name},
                       {"temperature", c.temperature},
                       {"top_p", c.top_p},
                       {"max_output_tokens", c.max_output_tokens},
                       {"endpoint_url", c.endpoint_url},
                       {"api_key_env", c.api_key_env},
                       {"timeout_ms", c.timeout.count()},
                       {"max_attempts", c.retry.max_attempts},
                       {"initial_backoff_ms", c.retry.initial_backoff.count()},
                       {"backoff_multiplier", c.retry.multiplier}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
    ModelConfig d;
    c.model_name = j.value("model_name", d.model_name);
    c.temperature = j.value("temperature", d.temperature);
    c.top_p = j.value("top_p", d.top_p);
    c.max_output_tokens = j.value("max_output_tokens", d.max_output_tokens);
    c.endpoint_url = j.value("endpoint_url", d.endpoint_url);
    c.api_key_env = j.value("api_key_env", d.api_key_env);
    c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(d.timeout.count())));
    c.retry.max_attempts = j.value("max_attempts", d.retry.max_attempts);
    c.retry.initial_backoff = std::chrono::milliseconds(
        j.value("initial_backoff_ms", static_cast<long long>(d.retry.initial_backoff.count())));
    c.retry.multiplier = j.value("backoff_multiplier", d.retry.multiplier);
    if (j.contains("api_key")) throw ConfigError("model config must not contain an api_key; set api_key_env");
}

void to_json(nlohmann::json& j, const ChatMessage& m) {
    j = nlohmann::json{{"role", to_string(m.role)}, {"content", m.content}};
}

void from_json(const nlohmann::json& j, ChatMessage& m) {
    m.role = role_from_string(j.at("role").get<std::string>());
    m.content = j.at("content").get<std::string>();
}

void to_json(nlohmann::json& j, const ChatExchange& e) {
    j = nlohmann::json{{"messages", e.messages}, {"response_text", e.response_text}, {"latency_ms", e.latency.count()}};
    if (e.usage) {
        j["usage"] = {{"prompt_tokens", e.usage->prompt_tokens},
                      {"completion_tokens", e.usage->completion_tokens},
                      {"total_tokens", e.usage->total_tokens}};
    }
}

void from_json(const nlohmann::json& j, ChatExchange& e) {
    e.messages = j.at("messages").get<Messages>();
    e.response_text = j.at("response_text").get<std::string>();
    e.latency = std::chrono::milliseconds(j.value("latency_ms", 0LL));
    if (j.contains("usage")) {
        const auto& u = j["usage"];
        e.usage = TokenUsage{u.value("prompt_tokens", 0), u.value("completion_tokens", 0), u.value("total_tokens", 0)};
    }
}

std::string canonical_messages(std::span<const ChatMessage> messages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : messages) arr.push_back(nlohmann::json::array({to_string(m.role), m.content}));
    return arr.dump();
}

std::string cache_key(const ModelConfig& config, std::span<const ChatMessage> messages) {
    nlohmann::json key = nlohmann::json::array(
        {config.model_name, config.temperature, config.top_p, nlohmann::json::parse(canonical_messages(messages))});
    return sha256_hex(key.dump());
}

std::string flatten_prompt(std::span<const ChatMessage> messages) {
    std::string out;
    for (const auto& m : messages) {
        if (!out.empty()) out.push_back('\n');
        out += m.content;
    }
    return out;
}

}  // namespace rrqa
