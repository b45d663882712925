#pragma once

#include "rrqa/llm/backend.hpp"

#include <atomic>
#include <functional>

namespace rrqa {

/// Talks to an OpenAI-compatible `/chat/completions` endpoint over HTTP(S)
/// with bearer auth. Transient failures (connection errors, 408, 429, 5xx)
/// are retried with exponential backoff per the config's RetryPolicy; 401
/// and 403 fail immediately with AuthError.
class OpenAIBackend final : public ChatBackend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    OpenAIBackend();
    explicit OpenAIBackend(Sleeper sleeper);

    ChatExchange complete(const ModelConfig& config, std::span<const ChatMessage> messages) override;
    std::string describe() const override { return "openai-compatible"; }

    /// HTTP requests actually sent, retries included.
    std::size_t requests_sent() const noexcept { return requests_.load(); }

    /// Request body for the given call, exposed for wire-format tests.
    static nlohmann::json request_body(const ModelConfig& config, std::span<const ChatMessage> messages);

private:
    Sleeper sleeper_;
    std::atomic<std::size_t> requests_{0};
};

}  // namespace rrqa
