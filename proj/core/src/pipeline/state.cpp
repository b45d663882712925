#include "rrqa/pipeline/state.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <nlohmann/json.hpp>

namespace rrqa {

void OriginalQuery::validate() const {
    if (text::trim(question_text).empty()) throw ValidationError("question text is empty");
}

ReasoningState initial_state(const OriginalQuery& query, std::size_t step_budget) {
    if (step_budget == 0) throw ConfigError("step_budget must be >= 1");
    query.validate();
    ReasoningState s;
    s.query_ = query;
    s.budget_ = step_budget;
    return s;
}

ReasoningState transition(const ReasoningState& state, const SubQueryStep& step) {
    if (state.terminal_) throw StateMachineError("transition on a terminal reasoning state");
    if (step.index != state.next_index()) {
        throw OrderingError("expected step index " + std::to_string(state.next_index()) + ", got " +
                            std::to_string(step.index));
    }
    if (text::trim(step.refined_answer).empty())
        throw ValidationError("step " + std::to_string(step.index) + " has no refined answer");
    if (!step.needs_retrieval && !step.documents.empty())
        throw ValidationError("step " + std::to_string(step.index) + " carries documents without retrieval");
    ReasoningState next = state;
    next.steps_.push_back(step);
    next.terminal_ = step.final_marker || next.steps_.size() >= next.budget_;
    return next;
}

ReasoningState close(const ReasoningState& state) {
    if (state.terminal_) throw StateMachineError("reasoning state is already terminal");
    if (state.steps_.empty()) throw StateMachineError("cannot finish a reasoning chain with no steps");
    ReasoningState next = state;
    next.terminal_ = true;
    return next;
}

std::vector<HistoryEntry> history_view(const ReasoningState& state) {
    std::vector<HistoryEntry> out;
    out.reserve(state.completed_steps().size());
    for (const auto& s : state.completed_steps())
        out.push_back({s.rewritten_query, s.anticipated_answer, s.refined_answer});
    return out;
}

void to_json(nlohmann::json& j, const OriginalQuery& q) {
    j = nlohmann::json{{"question_id", q.question_id},
                       {"question", q.question_text},
                       {"context", q.context ? nlohmann::json(*q.context) : nlohmann::json(nullptr)},
                       {"temporal_anchor",
                        q.temporal_anchor ? nlohmann::json(q.temporal_anchor->iso()) : nlohmann::json(nullptr)}};
}

void from_json(const nlohmann::json& j, OriginalQuery& q) {
    q.question_id = j.value("question_id", std::string{});
    q.question_text = j.at("question").get<std::string>();
    q.context.reset();
    q.temporal_anchor.reset();
    if (j.contains("context") && j["context"].is_string()) q.context = j["context"].get<std::string>();
    if (j.contains("temporal_anchor") && j["temporal_anchor"].is_string())
        q.temporal_anchor = CalendarDate::parse(j["temporal_anchor"].get<std::string>());
}

void to_json(nlohmann::json& j, const SubQueryStep& s) {
    j = nlohmann::json{{"index", s.index},
                       {"rewritten_query", s.rewritten_query},
                       {"anticipated_answer", s.anticipated_answer},
                       {"needs_retrieval", s.needs_retrieval},
                       {"documents", s.documents},
                       {"refined_answer", s.refined_answer},
                       {"final_marker", s.final_marker}};
}

void from_json(const nlohmann::json& j, SubQueryStep& s) {
    s.index = j.at("index").get<std::size_t>();
    s.rewritten_query = j.at("rewritten_query").get<std::string>();
    s.anticipated_answer = j.value("anticipated_answer", std::string{});
    s.needs_retrieval = j.at("needs_retrieval").get<bool>();
    s.documents = j.value("documents", std::vector<Document>{});
    s.refined_answer = j.at("refined_answer").get<std::string>();
    s.final_marker = j.value("final_marker", false);
}

}  // namespace rrqa
