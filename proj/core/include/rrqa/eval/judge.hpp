#pragma once

#include "rrqa/eval/report.hpp"
#include "rrqa/llm/backend.hpp"
#include "rrqa/prompt_template.hpp"

#include <memory>

namespace rrqa {

/// Asks a model whether the prediction matches a gold answer (template
/// "eval/judge"); the reply must start with yes or no.
class LlmJudge final : public AnswerJudge {
public:
    LlmJudge(std::shared_ptr<ChatBackend> backend, ModelConfig model, const PromptSet& prompts);

    bool accepts(const std::string& question, const std::vector<std::string>& gold_answers,
                 const std::string& prediction) const override;

private:
    std::shared_ptr<ChatBackend> backend_;
    ModelConfig model_;
    const PromptSet& prompts_;
};

}  // namespace rrqa
