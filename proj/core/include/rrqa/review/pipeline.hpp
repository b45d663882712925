#pragma once

#include "rrqa/llm/backend.hpp"
#include "rrqa/pipeline/trace.hpp"
#include "rrqa/prompt_template.hpp"
#include "rrqa/retrieval/retriever.hpp"

#include <string>

namespace rrqa {

struct PipelineConfig {
    ModelConfig model;
    RetrieverConfig retriever;
    std::size_t step_budget = kDefaultStepBudget;
    std::size_t snippet_chars = kDefaultSnippetChars;

    // Ablation switches; all on for the full method.
    bool decompose = true;
    bool retrieval = true;
    bool dynamic_rewrite = true;

    std::string variant = "rrr_full";

    /// Throws ConfigError.
    void validate() const;
};

/// Digest of everything that shapes model traffic: the model config (no
/// secrets), the prompt set hash and version, the variant and the limits.
std::string model_config_digest(const PipelineConfig& config, const PromptSet& prompts);

/// Runs review -> (gated) retrieve -> refine per step until the chain is
/// terminal, then aggregates. Without `decompose` the plan is skipped and the
/// chain is one step; without `dynamic_rewrite` each step is the plan's
/// sub-query verbatim and the chain ends with the plan; without `retrieval`
/// the retriever is never called.
///
/// A failure anywhere raises PipelineAborted holding the partial trace, with
/// the failing step named in its message.
PipelineTrace run_review_refine(const OriginalQuery& query, ChatBackend& backend, const Retriever* retriever,
                                const PipelineConfig& config, const PromptSet& prompts);

}  // namespace rrqa
