#pragma once

#include "rrqa/llm/backend.hpp"

#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace rrqa {

/// On-disk response cache: one `<cache_key>.json` file per exchange.
/// Concurrent get_or_compute() calls for the same key share one computation.
class ResponseCache {
public:
    explicit ResponseCache(std::string dir);

    std::optional<ChatExchange> lookup(const std::string& key) const;
    void store(const std::string& key, const ChatExchange& exchange);

    ChatExchange get_or_compute(const std::string& key, const std::function<ChatExchange()>& compute);

    const std::string& dir() const noexcept { return dir_; }
    std::size_t hits() const noexcept { return hits_.load(); }
    std::size_t misses() const noexcept { return misses_.load(); }

private:
    std::string path_for(const std::string& key) const;

    std::string dir_;
    std::mutex mu_;
    std::map<std::string, std::shared_future<ChatExchange>> in_flight_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

class CachingBackend final : public ChatBackend {
public:
    CachingBackend(std::shared_ptr<ChatBackend> inner, std::shared_ptr<ResponseCache> cache);

    ChatExchange complete(const ModelConfig& config, std::span<const ChatMessage> messages) override;
    std::string describe() const override;

private:
    std::shared_ptr<ChatBackend> inner_;
    std::shared_ptr<ResponseCache> cache_;
};

/// Counts calls that reach the wrapped backend and the peak number in flight.
class CountingBackend final : public ChatBackend {
public:
    explicit CountingBackend(std::shared_ptr<ChatBackend> inner);

    ChatExchange complete(const ModelConfig& config, std::span<const ChatMessage> messages) override;
    std::string describe() const override;

    std::size_t calls() const noexcept { return calls_.load(); }
    std::size_t peak_in_flight() const noexcept { return peak_.load(); }

private:
    std::shared_ptr<ChatBackend> inner_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> in_flight_{0};
    std::atomic<std::size_t> peak_{0};
};

}  // namespace rrqa
