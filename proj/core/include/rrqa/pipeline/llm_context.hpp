#pragma once

#include "rrqa/llm/backend.hpp"
#include "rrqa/prompt_template.hpp"

#include <string>
#include <string_view>

namespace rrqa {

/// What every model-facing step needs: where to send prompts, with which
/// decoding settings, and which template set to render them from.
struct LlmContext {
    ChatBackend& backend;
    const ModelConfig& model;
    const PromptSet& prompts;

    /// Sends one user message and returns the response text.
    std::string ask(std::string prompt) const;
    /// Sends a full message list.
    std::string ask(const Messages& messages) const;
};

}  // namespace rrqa
