#include "rrqa/llm/scripted_backend.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_transcript(std::vector<ScriptedTurn> turns) {
    std::shared_ptr<ScriptedBackend> b(new ScriptedBackend());
    b->transcript_mode_ = true;
    b->turns_ = std::move(turns);
    return b;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_transcript(const std::vector<std::string>& responses) {
    std::vector<ScriptedTurn> turns;
    turns.reserve(responses.size());
    for (const auto& r : responses) turns.push_back({r, {}});
    return from_transcript(std::move(turns));
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_rules(std::vector<ScriptRule> rules) {
    std::shared_ptr<ScriptedBackend> b(new ScriptedBackend());
    b->transcript_mode_ = false;
    for (auto& r : rules) {
        if (r.contains.empty() && r.regex.empty()) throw ConfigError("script rule needs 'contains' or 'regex'");
        CompiledRule c{std::move(r), std::nullopt};
        if (!c.rule.regex.empty()) {
            try {
                c.pattern.emplace(c.rule.regex, std::regex::ECMAScript);
            } catch (const std::regex_error& e) {
                throw ConfigError("bad script rule regex '" + c.rule.regex + "': " + e.what());
            }
        }
        b->rules_.push_back(std::move(c));
    }
    return b;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json(const nlohmann::json& script) {
    if (!script.is_object()) throw ConfigError("script must be a JSON object");
    if (script.contains("transcript")) {
        std::vector<ScriptedTurn> turns;
        for (const auto& t : script["transcript"]) {
            if (t.is_string()) {
                turns.push_back({t.get<std::string>(), {}});
            } else if (t.is_object() && t.contains("response")) {
                turns.push_back({t["response"].get<std::string>(), t.value("expect", std::string{})});
            } else {
                throw ConfigError("transcript entries must be strings or {\"response\": ...} objects");
            }
        }
        return from_transcript(std::move(turns));
    }
    if (script.contains("rules")) {
        std::vector<ScriptRule> rules;
        for (const auto& r : script["rules"]) {
            rules.push_back({r.value("contains", std::string{}), r.value("regex", std::string{}),
                             r.at("response").get<std::string>()});
        }
        return from_rules(std::move(rules));
    }
    throw ConfigError("script needs a 'transcript' or 'rules' member");
}

ChatExchange ScriptedBackend::complete(const ModelConfig& /*config*/, std::span<const ChatMessage> messages) {
    validate_messages(messages);
    const auto prompt = flatten_prompt(messages);
    std::string response;
    {
        std::lock_guard lock(mu_);
        ++calls_;
        if (transcript_mode_) {
            if (next_ >= turns_.size()) {
                throw ScriptExhausted("scripted transcript exhausted after " + std::to_string(turns_.size()) +
                                      " responses (call " + std::to_string(calls_) + ")");
            }
            const auto& turn = turns_[next_];
            if (!turn.expect.empty() && prompt.find(turn.expect) == std::string::npos) {
                throw NoMatchingRule("scripted turn " + std::to_string(next_ + 1) + " expected the prompt to contain '" +
                                     turn.expect + "'");
            }
            response = turn.response;
            ++next_;
        } else {
            const CompiledRule* hit = nullptr;
            for (const auto& r : rules_) {
                if (!r.rule.contains.empty() && prompt.find(r.rule.contains) == std::string::npos) continue;
                if (r.pattern && !std::regex_search(prompt, *r.pattern)) continue;
                hit = &r;
                break;
            }
            if (!hit) {
                auto head = prompt.substr(0, 120);
                throw NoMatchingRule("no script rule matches prompt starting '" + head + "'");
            }
            response = hit->rule.response;
        }
    }
    ChatExchange ex;
    ex.messages.assign(messages.begin(), messages.end());
    ex.response_text = std::move(response);
    return ex;
}

std::string ScriptedBackend::describe() const {
    std::lock_guard lock(mu_);
    return transcript_mode_ ? "scripted-transcript(" + std::to_string(turns_.size()) + ")"
                            : "scripted-rules(" + std::to_string(rules_.size()) + ")";
}

std::size_t ScriptedBackend::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard lock(mu_);
    return transcript_mode_ ? turns_.size() - next_ : 0;
}

ScriptBook ScriptBook::load(const std::string& path) {
    auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("script file " + path + " is not valid JSON");
    return from_json(std::move(j));
}

ScriptBook ScriptBook::from_json(nlohmann::json j) {
    ScriptBook book;
    if (!j.is_object()) throw ConfigError("script file must hold a JSON object");
    if (j.contains("questions")) {
        for (auto& [key, script] : j["questions"].items()) {
            ScriptedBackend::from_json(script);  // validate eagerly
            book.per_question_.emplace(key, script);
        }
        if (j.contains("default")) {
            ScriptedBackend::from_json(j["default"]);
            book.fallback_ = j["default"];
        }
    } else {
        ScriptedBackend::from_json(j);
        book.fallback_ = std::move(j);
    }
    return book;
}

std::shared_ptr<ScriptedBackend> ScriptBook::backend_for(std::string_view variant,
                                                         std::string_view question_id) const {
    const auto scoped = std::string(variant) + "/" + std::string(question_id);
    if (auto it = per_question_.find(scoped); it != per_question_.end()) return ScriptedBackend::from_json(it->second);
    if (auto it = per_question_.find(question_id); it != per_question_.end())
        return ScriptedBackend::from_json(it->second);
    if (fallback_) return ScriptedBackend::from_json(*fallback_);
    throw ConfigError("script file has no entry for question '" + std::string(question_id) + "'");
}

}  // namespace rrqa
