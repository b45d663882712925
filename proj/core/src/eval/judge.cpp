#include "rrqa/eval/judge.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

LlmJudge::LlmJudge(std::shared_ptr<ChatBackend> backend, ModelConfig model, const PromptSet& prompts)
    : backend_(std::move(backend)), model_(std::move(model)), prompts_(prompts) {
    if (!backend_) throw ConfigError("judge needs a backend");
    model_.validate();
}

bool LlmJudge::accepts(const std::string& question, const std::vector<std::string>& gold_answers,
                       const std::string& prediction) const {
    std::string golds;
    for (const auto& g : gold_answers) golds += (golds.empty() ? "" : " | ") + g;
    const Messages messages{{Role::user, prompts_.get("eval/judge").render(
                                             {{"question", question}, {"gold", golds}, {"prediction", prediction}})}};
    const auto reply = text::to_lower(text::trim(backend_->complete(model_, messages).response_text));
    if (reply.rfind("yes", 0) == 0) return true;
    if (reply.rfind("no", 0) == 0) return false;
    throw ModelOutputUnparseable("judge reply is neither yes nor no: " + reply.substr(0, 80));
}

}  // namespace rrqa
