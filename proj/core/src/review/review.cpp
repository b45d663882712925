#include "rrqa/review/review.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <regex>

namespace rrqa {

std::string LlmContext::ask(std::string prompt) const {
    return ask(Messages{{Role::user, std::move(prompt)}});
}

std::string LlmContext::ask(const Messages& messages) const {
    return backend.complete(model, messages).response_text;
}

namespace {

constexpr std::string_view kReviewFormat =
    "Query: <next sub-query>\n"
    "Answer: <answer, or [need_retrieval]>\n"
    "[final]   (only when this is the last sub-query)";

constexpr std::string_view kFixedFormat =
    "Answer: <answer, or [need_retrieval]>";

constexpr std::string_view kPlanFormat = R"({"step 1": "<first sub-query>", "step 2": "<second sub-query>"})";

std::string erase_all(std::string s, std::string_view needle) {
    const auto lower_needle = text::to_lower(needle);
    for (;;) {
        const auto pos = text::to_lower(s).find(lower_needle);
        if (pos == std::string::npos) return s;
        s.erase(pos, needle.size());
    }
}

bool only_punctuation(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::ispunct(c) || std::isspace(c); });
}

std::string clean_answer(std::string s) {
    s = erase_all(std::move(s), kNeedRetrievalMarker);
    s = erase_all(std::move(s), kFinalMarker);
    auto t = std::string(text::trim(s));
    return only_punctuation(t) ? std::string{} : t;
}

std::string context_block(const OriginalQuery& query) {
    if (!query.context || text::trim(*query.context).empty()) return "";
    return "\nBackground: " + std::string(text::trim(*query.context)) + "\n";
}

std::string reprompt_text(const PromptSet& prompts, const std::string& problem, std::string_view format) {
    return prompts.get("rrr/reprompt").render({{"problem", problem}, {"format", std::string(format)}});
}

}  // namespace

Parsed<ReviewOutcome> parse_review_output(std::string_view raw, bool allow_bare_final) {
    ReviewOutcome out;
    out.raw_model_text = std::string(raw);
    out.needs_retrieval = text::icontains(raw, kNeedRetrievalMarker);
    out.terminate = text::icontains(raw, kFinalMarker);

    std::optional<std::string> query;
    std::vector<std::string> answer_lines;
    bool in_answer = false;
    bool saw_answer = false;
    for (auto line : text::split_lines(raw)) {
        auto t = text::trim(line);
        if (t.empty()) continue;
        if (text::istarts_with(t, "Query Rewriting:") || text::istarts_with(t, "Query:")) {
            in_answer = false;
            if (!query) query = text::strip_label(text::strip_label(t, "Query Rewriting"), "Query");
            continue;
        }
        if (text::istarts_with(t, "Refined Answer:")) {
            in_answer = false;
            continue;
        }
        if (text::istarts_with(t, "Answer:")) {
            in_answer = true;
            saw_answer = true;
            answer_lines.push_back(text::strip_label(t, "Answer"));
            continue;
        }
        if (in_answer) answer_lines.emplace_back(t);
    }
    out.rewritten_query = query ? clean_answer(*query) : std::string{};
    out.anticipated_answer = clean_answer(text::join(answer_lines, " "));

    if (out.needs_retrieval && out.terminate) {
        return {std::nullopt, "the reply carries both [need_retrieval] and [final]; the last sub-query must be "
                              "answerable without retrieval, or [final] must come in a later reply"};
    }
    if (out.rewritten_query.empty()) {
        if (out.terminate && !saw_answer) {
            if (allow_bare_final) return {out, {}};
            return {std::nullopt, "no sub-query has been answered yet, so a bare [final] is not allowed"};
        }
        return {std::nullopt, "missing a 'Query:' line"};
    }
    if (out.needs_retrieval) {
        out.anticipated_answer.clear();
    } else if (out.anticipated_answer.empty()) {
        return {std::nullopt, "missing an 'Answer:' line (give an answer or [need_retrieval])"};
    }
    return {out, {}};
}

Parsed<std::vector<std::string>> parse_plan(std::string_view raw) {
    const std::regex step_key(R"(^\s*step\s*(\d+)\s*$)", std::regex::icase);
    auto from_json = [&](const nlohmann::json& j) -> std::vector<std::string> {
        std::vector<std::pair<int, std::string>> steps;
        if (j.is_object()) {
            for (const auto& [key, value] : j.items()) {
                std::smatch m;
                if (!value.is_string() || !std::regex_match(key, m, step_key)) continue;
                auto v = std::string(text::trim(value.get<std::string>()));
                if (!v.empty()) steps.emplace_back(std::stoi(m[1].str()), std::move(v));
            }
        } else if (j.is_array()) {
            int n = 0;
            for (const auto& value : j)
                if (value.is_string() && !text::trim(value.get<std::string>()).empty())
                    steps.emplace_back(++n, std::string(text::trim(value.get<std::string>())));
        }
        std::stable_sort(steps.begin(), steps.end(), [](auto& a, auto& b) { return a.first < b.first; });
        std::vector<std::string> out;
        for (auto& [_, v] : steps) out.push_back(std::move(v));
        return out;
    };

    const auto open = raw.find_first_of("{[");
    const auto close = raw.find_last_of("}]");
    if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
        auto j = nlohmann::json::parse(raw.substr(open, close - open + 1), nullptr, false);
        if (!j.is_discarded()) {
            auto steps = from_json(j);
            if (!steps.empty()) return {steps, {}};
        }
    }

    const std::regex step_line(R"re(^\s*"?step\s*(\d+)"?\s*[:.)-]\s*(.+?)\s*$)re", std::regex::icase);
    const std::regex numbered_line(R"(^\s*(\d+)[.)]\s+(.+?)\s*$)");
    std::vector<std::pair<int, std::string>> steps;
    for (auto line : text::split_lines(raw)) {
        std::string s(line);
        std::smatch m;
        if (std::regex_match(s, m, step_line) || std::regex_match(s, m, numbered_line)) {
            auto v = std::string(text::trim(m[2].str()));
            while (!v.empty() && (v.back() == ',' || v.back() == '"')) v.pop_back();
            while (!v.empty() && v.front() == '"') v.erase(v.begin());
            v = std::string(text::trim(v));
            if (!v.empty()) steps.emplace_back(std::stoi(m[1].str()), std::move(v));
        }
    }
    if (steps.empty()) return {std::nullopt, "no steps found; expected a JSON object keyed \"step 1\", \"step 2\", ..."};
    std::stable_sort(steps.begin(), steps.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (auto& [_, v] : steps) out.push_back(std::move(v));
    return {out, {}};
}

std::vector<std::string> plan_decomposition(const OriginalQuery& query, const LlmContext& llm) {
    query.validate();
    Messages messages{{Role::user, llm.prompts.get("rrr/plan").render({{"question", query.question_text},
                                                                         {"context", context_block(query)}})}};
    auto raw = llm.ask(messages);
    auto plan = parse_plan(raw);
    if (plan) return *plan.value;
    messages.push_back({Role::assistant, raw});
    messages.push_back({Role::user, reprompt_text(llm.prompts, plan.problem, kPlanFormat)});
    raw = llm.ask(messages);
    plan = parse_plan(raw);
    if (plan) return *plan.value;
    throw ModelOutputUnparseable("decomposition plan unparseable after reprompt: " + plan.problem);
}

std::string render_history(const std::vector<HistoryEntry>& history) {
    if (history.empty()) return "(none)";
    std::string out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i) out += "\n";
        out += std::to_string(i + 1) + ". Query: " + history[i].query + "\n   Answer: " + history[i].answer();
    }
    return out;
}

std::string build_review_prompt(const OriginalQuery& query, const ReasoningState& state,
                                const std::optional<std::string>& plan_hint, const PromptSet& prompts,
                                const ReviewOptions& options) {
    const auto gate = std::string(
        text::trim(prompts.get(options.retrieval_gate ? "rrr/gate" : "rrr/gate_internal").text()));
    std::map<std::string, std::string> values{{"question", query.question_text},
                                              {"context", context_block(query)},
                                              {"history", render_history(history_view(state))},
                                              {"gate", gate}};
    if (options.fixed_query) {
        values["query"] = *options.fixed_query;
        return prompts.get("rrr/review_fixed").render(values);
    }
    values["hint"] = plan_hint ? "\nThe initial plan suggests this next step: " + *plan_hint + "\n" : "";
    values["anchor"] = query.temporal_anchor
                           ? " Anchor the sub-query in time to " + query.temporal_anchor->month_year() +
                                 ", for example by ending it with \"" + query.temporal_anchor->anchor_clause() + "\"."
                           : "";
    return prompts.get("rrr/review").render(values);
}

ReviewOutcome review_step(const OriginalQuery& query, const ReasoningState& state,
                          const std::optional<std::string>& plan_hint, const LlmContext& llm,
                          const ReviewOptions& options) {
    if (state.terminal()) throw StateMachineError("review_step on a terminal reasoning state");
    const bool allow_bare_final = !state.completed_steps().empty() && !options.fixed_query;

    auto check = [&](const std::string& raw) -> Parsed<ReviewOutcome> {
        if (options.fixed_query) {
            // Only the answer matters; supply the pinned query so the parser's
            // Query: requirement is met regardless of what the model echoed.
            auto parsed = parse_review_output("Query: " + *options.fixed_query + "\n" + raw, false);
            if (parsed) {
                parsed.value->rewritten_query = *options.fixed_query;
                parsed.value->raw_model_text = raw;
            }
            return parsed;
        }
        auto parsed = parse_review_output(raw, allow_bare_final);
        if (parsed && query.temporal_anchor && !parsed.value->closes_chain() &&
            !text::icontains(parsed.value->rewritten_query, query.temporal_anchor->month_year())) {
            return {std::nullopt, "the sub-query must be anchored to " + query.temporal_anchor->month_year() +
                                      " (e.g. \"" + query.temporal_anchor->anchor_clause() + "\")"};
        }
        return parsed;
    };

    Messages messages{{Role::user, build_review_prompt(query, state, plan_hint, llm.prompts, options)}};
    auto raw = llm.ask(messages);
    auto parsed = check(raw);
    if (parsed) return *parsed.value;
    messages.push_back({Role::assistant, raw});
    messages.push_back(
        {Role::user, reprompt_text(llm.prompts, parsed.problem, options.fixed_query ? kFixedFormat : kReviewFormat)});
    raw = llm.ask(messages);
    parsed = check(raw);
    if (parsed) return *parsed.value;
    throw ModelOutputUnparseable("review output for step " + std::to_string(state.next_index()) +
                                 " unparseable after reprompt: " + parsed.problem);
}

}  // namespace rrqa
