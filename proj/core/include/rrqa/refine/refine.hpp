#pragma once

#include "rrqa/pipeline/llm_context.hpp"
#include "rrqa/pipeline/state.hpp"
#include "rrqa/retrieval/retriever.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rrqa {

struct RefineOptions {
    std::optional<CalendarDate> temporal_anchor;
    std::size_t snippet_chars = kDefaultSnippetChars;
};

/// With documents: grounds the answer in their snippet and cross-checks it
/// against model knowledge. Without: verifies and restates the anticipated
/// answer, and the prompt carries no context block.
std::string build_refine_prompt(const std::string& step_query, const std::string& anticipated,
                                const std::vector<Document>& documents, const std::vector<HistoryEntry>& history,
                                const PromptSet& prompts, const RefineOptions& options = {});

/// Throws RefineEmpty when the model returns nothing usable.
std::string refine_step_answer(const std::string& step_query, const std::string& anticipated,
                               const std::vector<Document>& documents, const std::vector<HistoryEntry>& history,
                               const LlmContext& llm, const RefineOptions& options = {});

struct AggregationInput {
    std::string original_question;
    std::vector<std::pair<std::string, std::string>> sub_answers;  // (sub-query, refined answer)
    std::optional<CalendarDate> temporal_anchor;

    void validate() const;
};

AggregationInput aggregation_input(const ReasoningState& state);

/// Every sub-answer appears verbatim and in step order.
std::string build_aggregate_prompt(const AggregationInput& input, const PromptSet& prompts);

/// One model call fusing all sub-answers into the final answer, even for a
/// single step. Throws AggregationEmpty on an empty reply.
std::string aggregate(const AggregationInput& input, const LlmContext& llm);

}  // namespace rrqa
