#include "pipeline/run_scope.hpp"

#include "rrqa/calendar_date.hpp"

namespace rrqa::detail {

namespace {

double ms_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

RunScope::RunScope(const OriginalQuery& query, ChatBackend& backend, const Retriever* retriever,
                   std::string variant, std::string config_digest)
    : recorder_(backend, retriever), run_start_(std::chrono::steady_clock::now()) {
    trace_.question_id = query.question_id;
    trace_.query = query;
    trace_.variant = std::move(variant);
    trace_.model_config_digest = std::move(config_digest);
    trace_.started_at = rfc3339(std::chrono::system_clock::now());
}

void RunScope::begin_step() { step_start_ = std::chrono::steady_clock::now(); }

void RunScope::end_step() { trace_.step_durations_ms.push_back(ms_since(step_start_)); }

void RunScope::stamp_end() {
    trace_.backend_call_log = recorder_.log();
    trace_.total_duration_ms = ms_since(run_start_);
    trace_.finished_at = rfc3339(std::chrono::system_clock::now());
}

PipelineTrace RunScope::finish(std::string final_answer) {
    trace_.final_answer = std::move(final_answer);
    trace_.status = TraceStatus::completed;
    stamp_end();
    return trace_;
}

void RunScope::abort(const std::string& where, const std::exception& cause) {
    trace_.status = TraceStatus::aborted;
    trace_.error = where + ": " + cause.what();
    stamp_end();
    throw PipelineAborted(trace_.error, trace_);
}

}  // namespace rrqa::detail
