#pragma once

#include "rrqa/llm/backend.hpp"
#include "rrqa/pipeline/trace.hpp"
#include "rrqa/retrieval/retriever.hpp"

#include <mutex>
#include <string>
#include <vector>

namespace rrqa {

/// Wraps the backend and retriever of one run and logs every call they
/// serve. The pipeline talks only to the wrapped views.
class CallRecorder {
public:
    CallRecorder(ChatBackend& backend, const Retriever* retriever);

    CallRecorder(const CallRecorder&) = delete;
    CallRecorder& operator=(const CallRecorder&) = delete;

    ChatBackend& backend() noexcept { return model_view_; }
    /// nullptr when the run has no retriever.
    const Retriever* retriever() const noexcept { return retriever_ ? &retriever_view_ : nullptr; }

    /// Labels the calls that follow.
    void label(std::string purpose, std::size_t step);

    std::vector<CallLogEntry> log() const;
    std::size_t retriever_calls() const;

private:
    class ModelView final : public ChatBackend {
    public:
        explicit ModelView(CallRecorder& owner) : owner_(owner) {}
        ChatExchange complete(const ModelConfig& config, std::span<const ChatMessage> messages) override;
        std::string describe() const override;

    private:
        CallRecorder& owner_;
    };

    class RetrieverView final : public Retriever {
    public:
        explicit RetrieverView(CallRecorder& owner) : owner_(owner) {}
        std::vector<Document> search(std::string_view query, std::size_t top_k) const override;
        std::string describe() const override;

    private:
        CallRecorder& owner_;
    };

    void append(CallLogEntry entry);

    ChatBackend& backend_;
    const Retriever* retriever_;
    ModelView model_view_{*this};
    RetrieverView retriever_view_{*this};
    mutable std::mutex mu_;
    std::string purpose_;
    std::size_t step_ = 0;
    std::vector<CallLogEntry> log_;
};

}  // namespace rrqa
