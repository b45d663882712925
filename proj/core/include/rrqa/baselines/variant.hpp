#pragma once

#include "rrqa/llm/backend.hpp"
#include "rrqa/pipeline/trace.hpp"
#include "rrqa/prompt_template.hpp"
#include "rrqa/retrieval/retriever.hpp"
#include "rrqa/review/pipeline.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

enum class VariantName {
    vanilla,
    vanilla_with_context,
    cot,
    freshprompt,
    chain_of_note,
    self_ask,
    react,
    searchain,
    rrr_full,
    rrr_no_decompose,
    rrr_no_retrieval,
    rrr_no_rewrite,
    self_ask_no_retrieval,
    searchain_no_retrieval,
};

std::string_view to_string(VariantName name);
/// Throws ConfigError naming the accepted values.
VariantName parse_variant(std::string_view name);
const std::vector<VariantName>& all_variants();

struct PipelineVariant {
    VariantName name;
    std::vector<std::string> template_set;  // prompt names, e.g. "baselines/react"
    bool uses_retrieval;
};

const PipelineVariant& variant(VariantName name);
inline const PipelineVariant& variant(std::string_view name) { return variant(parse_variant(name)); }

/// Iteration cap for the self-ask, ReAct and SearChain loops.
inline constexpr std::size_t kBaselineLoopCap = 8;

/// Runs one question through `v`. The model, retriever settings and limits
/// come from `config`; its ablation switches and variant name are overridden
/// by the variant. Variants without retrieval never touch `retriever`, even
/// when one is passed. Every step that retrieved has needs_retrieval set.
///
/// Throws ConfigError when the variant retrieves and `retriever` is null,
/// and PipelineAborted (with the partial trace) for anything that goes wrong
/// mid-run.
PipelineTrace run_variant(const PipelineVariant& v, const OriginalQuery& query, ChatBackend& backend,
                          const Retriever* retriever, const PipelineConfig& config, const PromptSet& prompts);

/// Text after the last "[Final Content]" marker, narrowed to X when it says
/// "the answer is X". Empty when the marker is missing.
std::string final_content(std::string_view raw);

}  // namespace rrqa
