#pragma once

#include "rrqa/llm/backend.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace rrqa {

/// A transcript entry: the response to hand back, optionally guarded by a
/// substring the prompt must contain.
struct ScriptedTurn {
    std::string response;
    std::string expect;
};

/// First rule whose `contains` substring (and `regex`, when set) matches the
/// flattened prompt wins.
struct ScriptRule {
    std::string contains;
    std::string regex;
    std::string response;
};

/// Deterministic stand-in for a model. Transcript mode replays turns in
/// order and raises ScriptExhausted past the end; rule mode answers by
/// first match and raises NoMatchingRule otherwise.
class ScriptedBackend final : public ChatBackend {
public:
    static std::shared_ptr<ScriptedBackend> from_transcript(std::vector<ScriptedTurn> turns);
    static std::shared_ptr<ScriptedBackend> from_transcript(const std::vector<std::string>& responses);
    static std::shared_ptr<ScriptedBackend> from_rules(std::vector<ScriptRule> rules);
    /// Accepts {"transcript": [...]} (strings or {"response","expect"}) or
    /// {"rules": [{"contains","regex","response"}...]}.
    static std::shared_ptr<ScriptedBackend> from_json(const nlohmann::json& script);

    ChatExchange complete(const ModelConfig& config, std::span<const ChatMessage> messages) override;
    std::string describe() const override;

    std::size_t calls() const;
    std::size_t remaining() const;

private:
    struct CompiledRule {
        ScriptRule rule;
        std::optional<std::regex> pattern;
    };

    ScriptedBackend() = default;

    mutable std::mutex mu_;
    bool transcript_mode_ = true;
    std::vector<ScriptedTurn> turns_;
    std::vector<CompiledRule> rules_;
    std::size_t next_ = 0;
    std::size_t calls_ = 0;
};

/// Script file for whole runs. Either a single script (used for every
/// question) or
///   {"questions": {"<question_id>": script, "<variant>/<question_id>": script},
///    "default": script}
/// Lookup prefers "<variant>/<id>", then "<id>", then "default".
class ScriptBook {
public:
    static ScriptBook load(const std::string& path);
    static ScriptBook from_json(nlohmann::json j);

    /// A fresh backend for one run; throws ConfigError when nothing matches.
    std::shared_ptr<ScriptedBackend> backend_for(std::string_view variant, std::string_view question_id) const;

private:
    std::map<std::string, nlohmann::json, std::less<>> per_question_;
    std::optional<nlohmann::json> fallback_;
};

}  // namespace rrqa
