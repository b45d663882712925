#include "rrqa/review/pipeline.hpp"

#include "pipeline/run_scope.hpp"
#include "rrqa/digest.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/refine/refine.hpp"
#include "rrqa/review/review.hpp"

#include <nlohmann/json.hpp>

namespace rrqa {

void PipelineConfig::validate() const {
    model.validate();
    retriever.validate();
    if (step_budget < 1) throw ConfigError("step_budget must be >= 1");
    if (snippet_chars < 100) throw ConfigError("snippet_chars must be >= 100");
}

std::string model_config_digest(const PipelineConfig& config, const PromptSet& prompts) {
    nlohmann::json j{{"model", config.model},
                     {"prompts_hash", prompts.content_hash()},
                     {"prompts_version", prompts.version()},
                     {"variant", config.variant},
                     {"step_budget", config.step_budget},
                     {"snippet_chars", config.snippet_chars},
                     {"top_k", config.retriever.top_k},
                     {"min_score", config.retriever.min_score},
                     {"decompose", config.decompose},
                     {"retrieval", config.retrieval},
                     {"dynamic_rewrite", config.dynamic_rewrite}};
    return sha256_hex(j.dump());
}

PipelineTrace run_review_refine(const OriginalQuery& query, ChatBackend& backend, const Retriever* retriever,
                                const PipelineConfig& config, const PromptSet& prompts) {
    config.validate();
    query.validate();
    detail::RunScope run(query, backend, config.retrieval ? retriever : nullptr, config.variant,
                         model_config_digest(config, prompts));
    const auto llm = run.llm(config.model, prompts);
    auto& rec = run.recorder();
    std::string where = "plan";
    try {
        auto state = initial_state(query, config.decompose ? config.step_budget : 1);
        std::vector<std::string> plan;
        if (config.decompose) {
            rec.label("plan", 0);
            plan = plan_decomposition(query, llm);
            run.trace().plan = plan;
        }
        while (!state.terminal()) {
            const auto i = state.next_index();
            where = "step " + std::to_string(i);
            run.begin_step();
            std::optional<std::string> hint;
            if (i <= plan.size()) hint = plan[i - 1];

            ReviewOptions options{config.retrieval, std::nullopt};
            if (!config.dynamic_rewrite) {
                if (!hint && !state.completed_steps().empty()) {
                    state = close(state);
                    break;
                }
                options.fixed_query = hint.value_or(query.question_text);
            }

            rec.label("review", i);
            const auto outcome = review_step(query, state, hint, llm, options);
            if (outcome.closes_chain()) {
                state = close(state);
                break;
            }

            const bool gate = config.retrieval && outcome.needs_retrieval;
            rec.label("retrieve", i);
            auto docs = retrieve(rec.retriever(), outcome.rewritten_query, gate, config.retriever);

            rec.label("refine", i);
            auto refined = refine_step_answer(outcome.rewritten_query, outcome.anticipated_answer, docs,
                                              history_view(state), llm, {query.temporal_anchor, config.snippet_chars});

            SubQueryStep step;
            step.index = i;
            step.rewritten_query = outcome.rewritten_query;
            step.anticipated_answer = outcome.anticipated_answer;
            step.needs_retrieval = gate;
            step.documents = std::move(docs);
            step.refined_answer = std::move(refined);
            step.final_marker = outcome.terminate || (!config.dynamic_rewrite && i >= plan.size());
            state = transition(state, step);
            run.trace().steps = state.completed_steps();
            run.end_step();
        }
        where = "aggregate";
        rec.label("aggregate", 0);
        return run.finish(aggregate(aggregation_input(state), llm));
    } catch (const std::exception& e) {
        run.abort(where, e);
    }
}

}  // namespace rrqa
