#pragma once

#include "rrqa/baselines/variant.hpp"
#include "rrqa/eval/report.hpp"

#include <functional>
#include <memory>

namespace rrqa {

/// Backend for one question; a shared live backend or a per-question script.
using BackendFor = std::function<std::shared_ptr<ChatBackend>(const EvalRecord&)>;

OriginalQuery query_for(const EvalRecord& record);

struct EvalRunOptions {
    PipelineConfig config;  // model, retriever settings, limits
    std::size_t concurrency = 1;
    std::uint64_t seed = 0;
    std::string dataset;
    const AnswerJudge* judge = nullptr;
    /// Called once per finished question (serialized), e.g. to write traces.
    std::function<void(const PipelineTrace&)> on_trace;
};

struct EvalRun {
    std::vector<PipelineTrace> traces;  // in record order
    EvalReport report;
};

/// Runs `v` over `records` with at most `concurrency` questions in flight.
/// A failing question yields an aborted trace and scores as incorrect.
/// Throws ConfigError for an unusable setup (bad config, missing retriever).
EvalRun run_evaluation(const PipelineVariant& v, const std::vector<EvalRecord>& records, const BackendFor& backend_for,
                       const Retriever* retriever, const PromptSet& prompts, const EvalRunOptions& options);

/// Runs each variant over the same records. Throws ValidationError for an
/// empty variant list.
std::vector<EvalRun> ablation_matrix(const std::vector<EvalRecord>& records,
                                     const std::vector<VariantName>& variants, const BackendFor& backend_for,
                                     const Retriever* retriever, const PromptSet& prompts,
                                     const EvalRunOptions& options);

}  // namespace rrqa
