#pragma once

#include "rrqa/pipeline/llm_context.hpp"
#include "rrqa/pipeline/state.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

inline constexpr std::string_view kNeedRetrievalMarker = "[need_retrieval]";
inline constexpr std::string_view kFinalMarker = "[final]";

/// The parsed reply of one review call.
struct ReviewOutcome {
    std::string rewritten_query;
    std::string anticipated_answer;  // empty when retrieval is needed
    bool needs_retrieval = false;
    bool terminate = false;
    std::string raw_model_text;

    /// `[final]` with no new sub-query: the history already answers the question.
    bool closes_chain() const noexcept { return terminate && rewritten_query.empty(); }
};

/// Result of parsing free model text: either a value or why it was rejected.
template <typename T>
struct Parsed {
    std::optional<T> value;
    std::string problem;

    explicit operator bool() const noexcept { return value.has_value(); }
};

/// Reads the labeled review protocol:
///   Query: <sub-query>
///   Answer: <answer> | [need_retrieval]
///   [final]                       (optional)
/// A bare `[final]` is accepted only when `allow_bare_final`.
Parsed<ReviewOutcome> parse_review_output(std::string_view raw, bool allow_bare_final);

/// Reads a decomposition plan: a JSON object keyed "step 1", "step 2", ...
/// or one `step N: ...` / `N. ...` line per step.
Parsed<std::vector<std::string>> parse_plan(std::string_view raw);

/// Asks for the initial one-hop plan. One corrective reprompt, then
/// ModelOutputUnparseable.
std::vector<std::string> plan_decomposition(const OriginalQuery& query, const LlmContext& llm);

struct ReviewOptions {
    /// Ask the model to flag `[need_retrieval]`; off for the no-retrieval ablation.
    bool retrieval_gate = true;
    /// When set, the sub-query is pinned to this text and only the answer
    /// and markers are read from the model.
    std::optional<std::string> fixed_query;
};

std::string render_history(const std::vector<HistoryEntry>& history);

/// The review prompt for the next step of `state`.
std::string build_review_prompt(const OriginalQuery& query, const ReasoningState& state,
                                const std::optional<std::string>& plan_hint, const PromptSet& prompts,
                                const ReviewOptions& options = {});

/// One review call: rewrites the next sub-query from the question and
/// history, anchors it to the query's date, and reads the retrieval gate.
/// A reply that fails to parse, or a rewrite missing the anchor's month and
/// year, gets one corrective reprompt before ModelOutputUnparseable.
ReviewOutcome review_step(const OriginalQuery& query, const ReasoningState& state,
                          const std::optional<std::string>& plan_hint, const LlmContext& llm,
                          const ReviewOptions& options = {});

}  // namespace rrqa
