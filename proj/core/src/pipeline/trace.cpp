#include "rrqa/pipeline/trace.hpp"

#include "rrqa/text.hpp"

namespace rrqa {

std::size_t PipelineTrace::retriever_calls() const {
    std::size_t n = 0;
    for (const auto& e : backend_call_log)
        if (e.kind == CallKind::retriever) ++n;
    return n;
}

std::size_t PipelineTrace::retrieval_steps() const {
    std::size_t n = 0;
    for (const auto& s : steps)
        if (s.needs_retrieval) ++n;
    return n;
}

namespace {

nlohmann::json entry_to_json(const CallLogEntry& e) {
    nlohmann::json j{{"sequence", e.sequence},
                     {"kind", e.kind == CallKind::model ? "model" : "retriever"},
                     {"purpose", e.purpose},
                     {"step", e.step},
                     {"prompt_digest", e.prompt_digest},
                     {"response_digest", e.response_digest}};
    if (e.kind == CallKind::model) {
        j["response"] = e.response;
    } else {
        j["query"] = e.query;
        j["doc_ids"] = e.doc_ids;
    }
    return j;
}

CallLogEntry entry_from_json(const nlohmann::json& j) {
    CallLogEntry e;
    e.sequence = j.at("sequence").get<std::size_t>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "model" && kind != "retriever") throw ValidationError("unknown call kind '" + kind + "'");
    e.kind = kind == "model" ? CallKind::model : CallKind::retriever;
    e.purpose = j.value("purpose", std::string{});
    e.step = j.value("step", std::size_t{0});
    e.prompt_digest = j.at("prompt_digest").get<std::string>();
    e.response_digest = j.at("response_digest").get<std::string>();
    e.response = j.value("response", std::string{});
    e.query = j.value("query", std::string{});
    e.doc_ids = j.value("doc_ids", std::vector<std::string>{});
    return e;
}

}  // namespace

nlohmann::json trace_to_json(const PipelineTrace& t, bool canonical) {
    nlohmann::json log = nlohmann::json::array();
    for (const auto& e : t.backend_call_log) log.push_back(entry_to_json(e));
    nlohmann::json j{{"schema_version", kTraceSchemaVersion},
                     {"question_id", t.question_id},
                     {"query", t.query},
                     {"variant", t.variant},
                     {"plan", t.plan},
                     {"steps", t.steps},
                     {"final_answer", t.final_answer},
                     {"model_config_digest", t.model_config_digest},
                     {"status", t.status == TraceStatus::completed ? "completed" : "aborted"},
                     {"error", t.error},
                     {"backend_call_log", std::move(log)}};
    if (!canonical) {
        j["timing"] = {{"step_durations_ms", t.step_durations_ms}, {"total_ms", t.total_duration_ms}};
        j["started_at"] = t.started_at;
        j["finished_at"] = t.finished_at;
    }
    return j;
}

PipelineTrace trace_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != kTraceSchemaVersion)
            throw ValidationError("unsupported trace schema_version " + j["schema_version"].dump());
        PipelineTrace t;
        t.question_id = j.at("question_id").get<std::string>();
        t.query = j.at("query").get<OriginalQuery>();
        t.variant = j.at("variant").get<std::string>();
        t.plan = j.value("plan", std::vector<std::string>{});
        t.steps = j.at("steps").get<std::vector<SubQueryStep>>();
        t.final_answer = j.at("final_answer").get<std::string>();
        t.model_config_digest = j.value("model_config_digest", std::string{});
        const auto status = j.at("status").get<std::string>();
        if (status != "completed" && status != "aborted") throw ValidationError("unknown trace status " + status);
        t.status = status == "completed" ? TraceStatus::completed : TraceStatus::aborted;
        t.error = j.value("error", std::string{});
        if (j.contains("timing")) {
            t.step_durations_ms = j["timing"].value("step_durations_ms", std::vector<double>{});
            t.total_duration_ms = j["timing"].value("total_ms", 0.0);
        }
        t.started_at = j.value("started_at", std::string{});
        t.finished_at = j.value("finished_at", std::string{});
        for (const auto& e : j.at("backend_call_log")) t.backend_call_log.push_back(entry_from_json(e));
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed trace: ") + e.what());
    }
}

std::string canonical_trace(const PipelineTrace& trace) { return trace_to_json(trace, true).dump(); }

void write_trace_file(const std::string& path, const PipelineTrace& trace) {
    text::write_file_atomic(path, trace_to_json(trace).dump(2) + "\n");
}

PipelineTrace read_trace_file(const std::string& path) {
    const auto raw = text::read_file(path);
    auto j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded()) throw ValidationError(path + ": trace file is not valid JSON");
    return trace_from_json(j);
}

std::vector<std::string> transcript_from_trace(const PipelineTrace& trace) {
    std::vector<std::string> out;
    for (const auto& e : trace.backend_call_log)
        if (e.kind == CallKind::model) out.push_back(e.response);
    return out;
}

}  // namespace rrqa
