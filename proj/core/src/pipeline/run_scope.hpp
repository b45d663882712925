#pragma once

#include "rrqa/pipeline/llm_context.hpp"
#include "rrqa/pipeline/recorder.hpp"
#include "rrqa/pipeline/trace.hpp"

#include <chrono>
#include <exception>
#include <string>

namespace rrqa::detail {

/// Bookkeeping shared by every pipeline variant: call recording, step
/// timings and turning the outcome into a completed or aborted trace.
class RunScope {
public:
    RunScope(const OriginalQuery& query, ChatBackend& backend, const Retriever* retriever, std::string variant,
             std::string config_digest);

    CallRecorder& recorder() noexcept { return recorder_; }
    PipelineTrace& trace() noexcept { return trace_; }
    LlmContext llm(const ModelConfig& model, const PromptSet& prompts) {
        return LlmContext{recorder_.backend(), model, prompts};
    }

    void begin_step();
    void end_step();

    PipelineTrace finish(std::string final_answer);
    [[noreturn]] void abort(const std::string& where, const std::exception& cause);

private:
    void stamp_end();

    CallRecorder recorder_;
    PipelineTrace trace_;
    std::chrono::steady_clock::time_point run_start_;
    std::chrono::steady_clock::time_point step_start_;
};

}  // namespace rrqa::detail
