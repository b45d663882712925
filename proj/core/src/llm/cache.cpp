#include "rrqa/llm/cache.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace rrqa {

ResponseCache::ResponseCache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) throw ConfigError("cache directory is empty");
    std::filesystem::create_directories(dir_);
}

std::string ResponseCache::path_for(const std::string& key) const {
    return (std::filesystem::path(dir_) / (key + ".json")).string();
}

std::optional<ChatExchange> ResponseCache::lookup(const std::string& key) const {
    const auto path = path_for(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
    // Unreadable entries count as misses and get rewritten.
    if (j.is_discarded()) return std::nullopt;
    try {
        return j.get<ChatExchange>();
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

void ResponseCache::store(const std::string& key, const ChatExchange& exchange) {
    nlohmann::json j = exchange;
    text::write_file_atomic(path_for(key), j.dump(2));
}

ChatExchange ResponseCache::get_or_compute(const std::string& key, const std::function<ChatExchange()>& compute) {
    std::promise<ChatExchange> promise;
    std::shared_future<ChatExchange> shared;
    bool owner = false;
    {
        std::lock_guard lock(mu_);
        if (auto it = in_flight_.find(key); it != in_flight_.end()) {
            shared = it->second;
        } else {
            if (auto hit = lookup(key)) {
                hits_.fetch_add(1);
                return *hit;
            }
            shared = promise.get_future().share();
            in_flight_.emplace(key, shared);
            owner = true;
        }
    }
    if (!owner) {
        hits_.fetch_add(1);
        return shared.get();
    }
    misses_.fetch_add(1);
    try {
        auto ex = compute();
        store(key, ex);
        promise.set_value(ex);
        std::lock_guard lock(mu_);
        in_flight_.erase(key);
        return ex;
    } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(mu_);
        in_flight_.erase(key);
        throw;
    }
}

CachingBackend::CachingBackend(std::shared_ptr<ChatBackend> inner, std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
    if (!inner_ || !cache_) throw ConfigError("CachingBackend needs a backend and a cache");
}

ChatExchange CachingBackend::complete(const ModelConfig& config, std::span<const ChatMessage> messages) {
    validate_messages(messages);
    return cache_->get_or_compute(cache_key(config, messages), [&] { return inner_->complete(config, messages); });
}

std::string CachingBackend::describe() const { return "cached(" + inner_->describe() + ")"; }

CountingBackend::CountingBackend(std::shared_ptr<ChatBackend> inner) : inner_(std::move(inner)) {
    if (!inner_) throw ConfigError("CountingBackend needs a backend");
}

ChatExchange CountingBackend::complete(const ModelConfig& config, std::span<const ChatMessage> messages) {
    calls_.fetch_add(1);
    const auto now = in_flight_.fetch_add(1) + 1;
    auto peak = peak_.load();
    while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
    }
    struct Leave {
        std::atomic<std::size_t>& n;
        ~Leave() { n.fetch_sub(1); }
    } leave{in_flight_};
    return inner_->complete(config, messages);
}

std::string CountingBackend::describe() const { return inner_->describe(); }

}  // namespace rrqa
