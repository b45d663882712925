#pragma once

#include "rrqa/errors.hpp"
#include "rrqa/pipeline/state.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rrqa {

enum class CallKind { model, retriever };

/// One backend invocation. Model calls keep the response text so a trace can
/// be replayed through a scripted backend.
struct CallLogEntry {
    std::size_t sequence = 0;
    CallKind kind = CallKind::model;
    std::string purpose;  // plan, review, refine, aggregate, reprompt, search, ...
    std::size_t step = 0;  // 0 outside any step
    std::string prompt_digest;
    std::string response_digest;
    std::string response;              // model calls
    std::string query;                 // retriever calls
    std::vector<std::string> doc_ids;  // retriever calls

    friend bool operator==(const CallLogEntry&, const CallLogEntry&) = default;
};

enum class TraceStatus { completed, aborted };

/// The serialized record of one run.
struct PipelineTrace {
    std::string question_id;
    OriginalQuery query;
    std::string variant;
    std::vector<std::string> plan;
    std::vector<SubQueryStep> steps;
    std::string final_answer;
    std::string model_config_digest;
    TraceStatus status = TraceStatus::completed;
    std::string error;
    std::vector<double> step_durations_ms;
    double total_duration_ms = 0.0;
    std::string started_at;
    std::string finished_at;
    std::vector<CallLogEntry> backend_call_log;

    std::size_t retriever_calls() const;
    std::size_t retrieval_steps() const;
};

inline constexpr int kTraceSchemaVersion = 1;

/// Full form includes timings and RFC-3339 timestamps. Canonical form drops
/// them so equal runs serialize to equal bytes. Keys are always sorted.
nlohmann::json trace_to_json(const PipelineTrace& trace, bool canonical = false);
PipelineTrace trace_from_json(const nlohmann::json& j);
std::string canonical_trace(const PipelineTrace& trace);

void write_trace_file(const std::string& path, const PipelineTrace& trace);
PipelineTrace read_trace_file(const std::string& path);

/// Model responses of the call log, in call order.
std::vector<std::string> transcript_from_trace(const PipelineTrace& trace);

/// Raised when a run cannot finish. Carries everything completed so far.
class PipelineAborted : public Error {
public:
    PipelineAborted(const std::string& what, PipelineTrace partial)
        : Error(what), partial_(std::move(partial)) {}
    const PipelineTrace& partial_trace() const noexcept { return partial_; }

private:
    PipelineTrace partial_;
};

}  // namespace rrqa
