#include "rrqa/refine/refine.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/review/review.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

std::string findings(const std::vector<HistoryEntry>& history) {
    if (history.empty()) return "(none)";
    std::string out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i) out += "\n";
        out += std::to_string(i + 1) + ". " + history[i].query + " -> " + history[i].answer();
    }
    return out;
}

}  // namespace

std::string build_refine_prompt(const std::string& step_query, const std::string& anticipated,
                                const std::vector<Document>& documents, const std::vector<HistoryEntry>& history,
                                const PromptSet& prompts, const RefineOptions& options) {
    if (text::trim(step_query).empty()) throw ValidationError("refine needs a non-empty sub-query");
    if (documents.empty()) {
        return prompts.get("rrr/refine_internal")
            .render({{"query", step_query},
                     {"anticipated", anticipated.empty() ? std::string("(none)") : anticipated},
                     {"history", findings(history)}});
    }
    return prompts.get("rrr/refine_context")
        .render({{"query", step_query},
                 {"history", findings(history)},
                 {"context", snippet(documents, options.snippet_chars)},
                 {"anchor", options.temporal_anchor
                                ? " State the answer as of " + options.temporal_anchor->month_year() + "."
                                : std::string{}}});
}

std::string refine_step_answer(const std::string& step_query, const std::string& anticipated,
                               const std::vector<Document>& documents, const std::vector<HistoryEntry>& history,
                               const LlmContext& llm, const RefineOptions& options) {
    auto raw = llm.ask(build_refine_prompt(step_query, anticipated, documents, history, llm.prompts, options));
    auto answer = text::strip_label(raw, "Refined Answer");
    if (answer.empty()) throw RefineEmpty("empty refined answer for sub-query '" + step_query + "'");
    return answer;
}

void AggregationInput::validate() const {
    if (text::trim(original_question).empty()) throw ValidationError("aggregation needs the original question");
    if (sub_answers.empty()) throw ValidationError("aggregation needs at least one sub-answer");
}

AggregationInput aggregation_input(const ReasoningState& state) {
    AggregationInput in;
    in.original_question = state.query().question_text;
    in.temporal_anchor = state.query().temporal_anchor;
    for (const auto& s : state.completed_steps()) in.sub_answers.emplace_back(s.rewritten_query, s.refined_answer);
    return in;
}

std::string build_aggregate_prompt(const AggregationInput& input, const PromptSet& prompts) {
    input.validate();
    std::string pairs;
    for (std::size_t i = 0; i < input.sub_answers.size(); ++i) {
        const auto n = std::to_string(i + 1);
        if (i) pairs += "\n";
        pairs += "Sub-Query " + n + ": " + input.sub_answers[i].first + "\n";
        pairs += "Sub-Answer " + n + ": " + input.sub_answers[i].second;
    }
    return prompts.get("rrr/aggregate")
        .render({{"question", input.original_question},
                 {"sub_answers", pairs},
                 {"anchor", input.temporal_anchor ? " Answer as of " + input.temporal_anchor->month_year() + "."
                                                  : std::string{}}});
}

std::string aggregate(const AggregationInput& input, const LlmContext& llm) {
    auto raw = llm.ask(build_aggregate_prompt(input, llm.prompts));
    auto answer = text::strip_label(raw, "Aggregated Answer");
    if (answer.empty()) throw AggregationEmpty("aggregation returned an empty answer");
    return answer;
}

}  // namespace rrqa
