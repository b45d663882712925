#pragma once

#include "rrqa/calendar_date.hpp"
#include "rrqa/retrieval/document.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rrqa {

/// The question as posed: text, optional background context and the
/// optional "as of" date every rewrite is anchored to.
struct OriginalQuery {
    std::string question_id;
    std::string question_text;
    std::optional<std::string> context;
    std::optional<CalendarDate> temporal_anchor;

    /// Throws ValidationError when question_text is blank.
    void validate() const;

    friend bool operator==(const OriginalQuery&, const OriginalQuery&) = default;
};

/// One finished step of the reasoning chain.
struct SubQueryStep {
    std::size_t index = 0;  // 1-based
    std::string rewritten_query;
    std::string anticipated_answer;
    bool needs_retrieval = false;
    std::vector<Document> documents;
    std::string refined_answer;
    /// The review model marked this as the last sub-query.
    bool final_marker = false;

    friend bool operator==(const SubQueryStep&, const SubQueryStep&) = default;
};

/// A history entry as shown to the model: the sub-query and its best answer.
struct HistoryEntry {
    std::string query;
    std::string anticipated_answer;
    std::string refined_answer;

    /// Refined answer when there is one, else the anticipated answer.
    const std::string& answer() const noexcept {
        return refined_answer.empty() ? anticipated_answer : refined_answer;
    }
};

/// Immutable snapshot of a reasoning chain. New states come only from
/// initial_state(), transition() and close().
class ReasoningState {
public:
    const OriginalQuery& query() const noexcept { return query_; }
    const std::vector<SubQueryStep>& completed_steps() const noexcept { return steps_; }
    bool terminal() const noexcept { return terminal_; }
    std::size_t step_budget() const noexcept { return budget_; }
    std::size_t next_index() const noexcept { return steps_.size() + 1; }

    friend bool operator==(const ReasoningState&, const ReasoningState&) = default;

private:
    friend ReasoningState initial_state(const OriginalQuery&, std::size_t);
    friend ReasoningState transition(const ReasoningState&, const SubQueryStep&);
    friend ReasoningState close(const ReasoningState&);

    OriginalQuery query_;
    std::vector<SubQueryStep> steps_;
    bool terminal_ = false;
    std::size_t budget_ = 1;
};

inline constexpr std::size_t kDefaultStepBudget = 8;

/// s0: no steps, not terminal. Throws ConfigError for a zero budget and
/// ValidationError for an invalid query.
ReasoningState initial_state(const OriginalQuery& query, std::size_t step_budget = kDefaultStepBudget);

/// Appends `step`. The result is terminal once the budget is used up or the
/// step carries the final marker. Throws StateMachineError on a terminal
/// state, OrderingError when step.index is not next_index(), and
/// ValidationError for an unfinished step or documents without retrieval.
ReasoningState transition(const ReasoningState& state, const SubQueryStep& step);

/// Marks the chain finished without adding a step (the review model said the
/// history already answers the question). Requires at least one step.
ReasoningState close(const ReasoningState& state);

/// (sub-query, answers) pairs of all completed steps, in order.
std::vector<HistoryEntry> history_view(const ReasoningState& state);

void to_json(nlohmann::json& j, const OriginalQuery& q);
void from_json(const nlohmann::json& j, OriginalQuery& q);
void to_json(nlohmann::json& j, const SubQueryStep& s);
void from_json(const nlohmann::json& j, SubQueryStep& s);

}  // namespace rrqa
