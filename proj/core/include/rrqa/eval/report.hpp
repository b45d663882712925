#pragma once

#include "rrqa/eval/dataset.hpp"
#include "rrqa/pipeline/trace.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rrqa {

/// Decides answers the token rule rejects, e.g. free-form dynamic answers.
class AnswerJudge {
public:
    virtual ~AnswerJudge() = default;
    virtual bool accepts(const std::string& question, const std::vector<std::string>& gold_answers,
                         const std::string& prediction) const = 0;
};

struct EvalRow {
    std::string record_id;
    HopClass hop_class = HopClass::multi_hop;
    std::string question;
    std::string prediction;
    std::vector<std::string> gold_answers;
    bool correct = false;
    bool judged = false;  // accepted by the judge rather than the token rule
    double f1 = 0.0;
    std::string status;  // completed, aborted, missing
    std::string error;
    std::size_t steps = 0;
    std::size_t retriever_calls = 0;
};

struct ClassStats {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

struct EvalReport {
    std::string variant;
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;
    ClassStats single_hop;
    ClassStats multi_hop;
    ClassStats overall;
    double mean_f1 = 0.0;
    std::size_t aborted = 0;
    std::size_t retriever_calls = 0;
    std::size_t retrieval_steps = 0;
    bool judge_used = false;
    std::vector<EvalRow> rows;  // sorted by record_id
};

struct EvaluateOptions {
    std::string variant;
    std::string dataset;
    std::uint64_t seed = 0;
    const AnswerJudge* judge = nullptr;
};

/// Scores traces against records. Records without a trace score as
/// incorrect ("missing"); aborted traces score as incorrect. The result does
/// not depend on input order.
///
/// Throws ValidationError for empty input or duplicate traces and
/// UnmatchedTrace for traces whose question_id has no record.
EvalReport evaluate(const std::vector<PipelineTrace>& traces, const std::vector<EvalRecord>& records,
                    const EvaluateOptions& options = {});

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

/// One row per report, for comparing variants.
std::string comparison_csv(const std::vector<EvalReport>& reports);
std::string comparison_text(const std::vector<EvalReport>& reports);

}  // namespace rrqa
