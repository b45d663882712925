#pragma once

#include <nlohmann/json_fwd.hpp>

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

enum class Role { system, user, assistant };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using Messages = std::vector<ChatMessage>;

struct TokenUsage {
    int prompt_tokens = 0;
    int completion_tokens = 0;
    int total_tokens = 0;

    friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct ChatExchange {
    Messages messages;
    std::string response_text;
    std::optional<TokenUsage> usage;
    std::chrono::milliseconds latency{0};
};

/// Non-empty, and the last message is a user or system turn.
void validate_messages(std::span<const ChatMessage> messages);

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    double multiplier = 2.0;
};

/// Decoding parameters plus where to send requests. Holds the *name* of the
/// environment variable carrying the API key, never the key.
struct ModelConfig {
    std::string model_name = "gpt-3.5-turbo";
    double temperature = 0.3;
    double top_p = 1.0;
    int max_output_tokens = 512;
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string api_key_env = "OPENAI_API_KEY";
    std::chrono::milliseconds timeout{60000};
    RetryPolicy retry;

    /// 0 <= temperature <= 2, 0 < top_p <= 1, positive token and attempt limits.
    void validate() const;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);
void to_json(nlohmann::json& j, const ChatMessage& m);
void from_json(const nlohmann::json& j, ChatMessage& m);
void to_json(nlohmann::json& j, const ChatExchange& e);
void from_json(const nlohmann::json& j, ChatExchange& e);

/// Canonical JSON of the messages, the form digests are taken over.
std::string canonical_messages(std::span<const ChatMessage> messages);

/// SHA-256 over (model_name, temperature, top_p, messages in order).
std::string cache_key(const ModelConfig& config, std::span<const ChatMessage> messages);

/// Uniform chat-completion interface. Implementations must allow concurrent
/// complete() calls.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatExchange complete(const ModelConfig& config, std::span<const ChatMessage> messages) = 0;
    virtual std::string describe() const = 0;
};

/// Concatenation of every message's content, used for rule matching.
std::string flatten_prompt(std::span<const ChatMessage> messages);

}  // namespace rrqa
