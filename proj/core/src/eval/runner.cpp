#include "rrqa/eval/runner.hpp"

#include "rrqa/calendar_date.hpp"
#include "rrqa/errors.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace rrqa {

namespace {

PipelineTrace failed_trace(const PipelineVariant& v, const OriginalQuery& q, const std::string& error) {
    PipelineTrace t;
    t.question_id = q.question_id;
    t.query = q;
    t.variant = std::string(to_string(v.name));
    t.status = TraceStatus::aborted;
    t.error = error;
    t.started_at = t.finished_at = rfc3339(std::chrono::system_clock::now());
    return t;
}

}  // namespace

OriginalQuery query_for(const EvalRecord& record) {
    OriginalQuery q;
    q.question_id = record.record_id;
    q.question_text = record.question;
    q.temporal_anchor = record.temporal_anchor;
    return q;
}

EvalRun run_evaluation(const PipelineVariant& v, const std::vector<EvalRecord>& records, const BackendFor& backend_for,
                       const Retriever* retriever, const PromptSet& prompts, const EvalRunOptions& options) {
    if (options.concurrency < 1) throw ConfigError("concurrency must be >= 1");
    if (!backend_for) throw ConfigError("no backend provider");
    options.config.validate();
    if (v.uses_retrieval && !retriever)
        throw ConfigError("variant " + std::string(to_string(v.name)) + " needs a retriever");
    if (records.empty()) throw ValidationError("no records to evaluate");
    for (const auto& r : records) r.validate();

    std::vector<PipelineTrace> traces(records.size());
    std::atomic<std::size_t> next{0};
    std::mutex callback_mu;
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) {
            const auto q = query_for(records[i]);
            PipelineTrace t;
            try {
                auto backend = backend_for(records[i]);
                if (!backend) throw ConfigError("no backend for question " + q.question_id);
                t = run_variant(v, q, *backend, retriever, options.config, prompts);
            } catch (const PipelineAborted& e) {
                t = e.partial_trace();
            } catch (const std::exception& e) {
                t = failed_trace(v, q, e.what());
            }
            if (options.on_trace) {
                std::lock_guard lock(callback_mu);
                options.on_trace(t);
            }
            traces[i] = std::move(t);
        }
    };

    const auto n_threads = std::min(options.concurrency, records.size());
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    }

    EvaluateOptions eo{std::string(to_string(v.name)), options.dataset, options.seed, options.judge};
    auto report = evaluate(traces, records, eo);
    return {std::move(traces), std::move(report)};
}

std::vector<EvalRun> ablation_matrix(const std::vector<EvalRecord>& records,
                                     const std::vector<VariantName>& variants, const BackendFor& backend_for,
                                     const Retriever* retriever, const PromptSet& prompts,
                                     const EvalRunOptions& options) {
    if (variants.empty()) throw ValidationError("ablation matrix needs at least one variant");
    for (auto name : variants)
        if (variant(name).uses_retrieval && !retriever)
            throw ConfigError("variant " + std::string(to_string(name)) + " needs a retriever");
    std::vector<EvalRun> out;
    for (auto name : variants) out.push_back(run_evaluation(variant(name), records, backend_for, retriever, prompts, options));
    return out;
}

}  // namespace rrqa
