#include "rrqa/baselines/variant.hpp"

#include "pipeline/run_scope.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <map>
#include <regex>

namespace rrqa {

namespace {

constexpr std::string_view kFinalContent = "[final content]";

std::string after_answer_is(std::string content) {
    const auto lower = text::to_lower(content);
    const auto pos = lower.rfind("answer is");
    if (pos == std::string::npos) return content;
    std::string_view rest = std::string_view(content).substr(pos + 9);
    rest = text::trim(rest);
    if (!rest.empty() && rest.front() == ':') rest = text::trim(rest.substr(1));
    rest = rest.substr(0, rest.find('\n'));
    while (!rest.empty() && (rest.back() == '.' || std::isspace(static_cast<unsigned char>(rest.back()))))
        rest.remove_suffix(1);
    return rest.empty() ? content : std::string(rest);
}

std::string plain_answer(std::string_view raw) {
    return text::strip_label(text::strip_label(raw, "Final Answer"), "Answer");
}

std::string require_answer(std::string answer, std::string_view what) {
    if (answer.empty()) throw ModelOutputUnparseable(std::string(what) + " produced an empty answer");
    return answer;
}

std::string reprompt(const PromptSet& prompts, const std::string& problem, std::string_view format) {
    return prompts.get("rrr/reprompt").render({{"problem", problem}, {"format", std::string(format)}});
}

std::string first_sentence(std::string_view body, std::size_t max_chars = 300) {
    body = text::trim(body);
    auto end = body.find_first_of(".\n");
    auto s = body.substr(0, end == std::string_view::npos ? body.size() : end + (body[end] == '.' ? 1 : 0));
    if (s.size() > max_chars) s = s.substr(0, max_chars);
    return std::string(text::trim(s));
}

/// Shared state of one baseline run.
struct Run {
    detail::RunScope& scope;
    LlmContext llm;
    const PipelineConfig& config;
    const OriginalQuery& query;

    CallRecorder& rec() { return scope.recorder(); }
    const PromptSet& prompts() const { return llm.prompts; }

    std::vector<Document> search(const std::string& q, std::size_t step) {
        rec().label("search", step);
        return retrieve(rec().retriever(), q, true, config.retriever);
    }

    void add_step(std::string q, std::string anticipated, bool retrieved, std::vector<Document> docs,
                  std::string answer) {
        SubQueryStep s;
        s.index = scope.trace().steps.size() + 1;
        s.rewritten_query = std::move(q);
        s.anticipated_answer = std::move(anticipated);
        s.needs_retrieval = retrieved;
        s.documents = std::move(docs);
        s.refined_answer = answer.empty() ? std::string("(no answer)") : std::move(answer);
        scope.trace().steps.push_back(std::move(s));
        scope.end_step();
        scope.begin_step();
    }

    void mark_last_final() {
        if (!scope.trace().steps.empty()) scope.trace().steps.back().final_marker = true;
    }
};

std::string single_call(Run& run, VariantName name) {
    const auto& q = run.query.question_text;
    const bool with_context = name == VariantName::vanilla_with_context || name == VariantName::freshprompt ||
                              name == VariantName::chain_of_note;
    std::vector<Document> docs;
    if (with_context) docs = run.search(q, 1);

    const auto tmpl = "baselines/" + std::string(to_string(name));
    std::map<std::string, std::string> values{{"q", q}};
    if (with_context) {
        const auto ctx = docs.empty() ? std::string("(no results)") : snippet(docs, run.config.snippet_chars);
        values[name == VariantName::chain_of_note ? "passages" : "context"] = ctx;
    }
    run.rec().label("answer", 1);
    const auto raw = run.llm.ask(run.prompts().get(tmpl).render(values));

    std::string answer;
    if (name == VariantName::chain_of_note) {
        answer = final_content(raw);
        if (answer.empty()) answer = plain_answer(raw);
    } else if (name == VariantName::cot) {
        answer = after_answer_is(plain_answer(raw));
    } else {
        answer = plain_answer(raw);
    }
    answer = require_answer(answer, to_string(name));
    run.add_step(q, "", with_context, std::move(docs), answer);
    run.mark_last_final();
    return answer;
}

// --- self-ask -------------------------------------------------------------

struct SelfAskTurn {
    std::vector<std::pair<std::string, std::string>> pairs;  // (follow-up, model's intermediate answer)
    std::optional<std::string> final_answer;
};

SelfAskTurn parse_self_ask(std::string_view raw) {
    SelfAskTurn t;
    for (auto line : text::split_lines(raw)) {
        auto s = text::trim(line);
        if (text::istarts_with(s, "Follow up:")) {
            t.pairs.emplace_back(text::strip_label(s, "Follow up"), "");
        } else if (text::istarts_with(s, "Intermediate answer:")) {
            if (!t.pairs.empty() && t.pairs.back().second.empty())
                t.pairs.back().second = text::strip_label(s, "Intermediate answer");
        } else if (text::icontains(s, "final answer is")) {
            t.final_answer = after_answer_is(std::string(s));
            break;
        }
    }
    return t;
}

constexpr std::string_view kSelfAskFormat =
    "Follow up: <question>\nIntermediate answer: <answer>\n...\nSo the final answer is: <answer>";

std::string self_ask(Run& run, bool with_retrieval) {
    const auto base = run.prompts().get("baselines/self_ask").render({{"q", run.query.question_text}});
    std::string scratch;
    for (std::size_t iter = 1; iter <= kBaselineLoopCap; ++iter) {
        run.rec().label("self_ask", iter);
        Messages messages{{Role::user, base + scratch}};
        auto raw = run.llm.ask(messages);
        auto turn = parse_self_ask(raw);
        if (turn.pairs.empty() && !turn.final_answer) {
            messages.push_back({Role::assistant, raw});
            messages.push_back({Role::user, reprompt(run.prompts(), "no 'Follow up:' or final answer line",
                                                     kSelfAskFormat)});
            raw = run.llm.ask(messages);
            turn = parse_self_ask(raw);
            if (turn.pairs.empty() && !turn.final_answer)
                throw ModelOutputUnparseable("self-ask reply unparseable after reprompt");
        }

        if (with_retrieval && !turn.pairs.empty()) {
            // Only the first follow-up is taken; its answer comes from search.
            auto [follow_up, guess] = turn.pairs.front();
            auto docs = run.search(follow_up, run.scope.trace().steps.size() + 1);
            auto answer = docs.empty() ? std::string("No results found.") : first_sentence(docs.front().body);
            scratch += (scratch.empty() ? " Yes.\n" : "") + std::string("Follow up: ") + follow_up +
                       "\nIntermediate answer: " + answer + "\n";
            run.add_step(follow_up, guess, true, std::move(docs), answer);
            continue;
        }

        for (auto& [follow_up, answer] : turn.pairs) {
            if (answer.empty()) break;
            scratch += (scratch.empty() ? " Yes.\n" : "") + std::string("Follow up: ") + follow_up +
                       "\nIntermediate answer: " + answer + "\n";
            run.add_step(follow_up, answer, false, {}, answer);
        }
        if (turn.final_answer) {
            auto answer = require_answer(*turn.final_answer, "self-ask");
            if (run.scope.trace().steps.empty()) run.add_step(run.query.question_text, "", false, {}, answer);
            run.mark_last_final();
            return answer;
        }
    }
    throw ModelOutputUnparseable("self-ask gave no final answer within " + std::to_string(kBaselineLoopCap) +
                                 " iterations");
}

// --- ReAct ----------------------------------------------------------------

struct ReactTurn {
    std::string thought;
    std::string action;
    std::string input;
    std::optional<std::string> final_answer;
    std::string kept;  // reply up to the first Observation line
};

ReactTurn parse_react(std::string_view raw) {
    ReactTurn t;
    for (auto line : text::split_lines(raw)) {
        auto s = text::trim(line);
        if (text::istarts_with(s, "Observation:")) break;
        t.kept += std::string(line) + "\n";
        if (text::istarts_with(s, "Final Answer:")) {
            t.final_answer = text::strip_label(s, "Final Answer");
            break;
        }
        if (text::istarts_with(s, "Thought:") && t.thought.empty()) t.thought = text::strip_label(s, "Thought");
        else if (text::istarts_with(s, "Action Input:") && t.input.empty())
            t.input = text::strip_label(s, "Action Input");
        else if (text::istarts_with(s, "Action:") && t.action.empty()) t.action = text::strip_label(s, "Action");
    }
    return t;
}

std::string react_problem(const ReactTurn& t) {
    if (t.final_answer) return t.final_answer->empty() ? "the Final Answer is empty" : "";
    const auto action = text::to_lower(t.action);
    if (action != "search" && action != "skip") return "Action must be Search or Skip";
    if (text::trim(t.input).empty()) return "missing 'Action Input:'";
    return "";
}

constexpr std::string_view kReactFormat =
    "Thought: <reasoning>\nAction: Search or Skip\nAction Input: <query>\n(or, when done)\nFinal Answer: <answer>";

std::string react(Run& run) {
    const auto base = run.prompts().get("baselines/react").render({{"q", run.query.question_text}});
    std::string scratch;
    for (std::size_t iter = 1; iter <= kBaselineLoopCap; ++iter) {
        run.rec().label("react", iter);
        Messages messages{{Role::user, base + scratch}};
        auto raw = run.llm.ask(messages);
        auto turn = parse_react(raw);
        if (auto problem = react_problem(turn); !problem.empty()) {
            messages.push_back({Role::assistant, raw});
            messages.push_back({Role::user, reprompt(run.prompts(), problem, kReactFormat)});
            raw = run.llm.ask(messages);
            turn = parse_react(raw);
            if (auto again = react_problem(turn); !again.empty())
                throw ModelOutputUnparseable("ReAct reply unparseable after reprompt: " + again);
        }
        if (turn.final_answer) {
            if (run.scope.trace().steps.empty())
                run.add_step(run.query.question_text, "", false, {}, *turn.final_answer);
            run.mark_last_final();
            return *turn.final_answer;
        }

        const auto step = run.scope.trace().steps.size() + 1;
        std::string observation;
        if (text::to_lower(turn.action) == "search") {
            auto docs = run.search(turn.input, step);
            observation = docs.empty() ? std::string("No results found.") : snippet(docs, run.config.snippet_chars);
            run.add_step(turn.input, turn.thought, true, std::move(docs), observation);
        } else {
            run.rec().label("skip", step);
            observation = plain_answer(
                run.llm.ask(run.prompts().get("baselines/vanilla").render({{"q", turn.input}})));
            run.add_step(turn.input, turn.thought, false, {}, observation);
        }
        scratch += "\n" + turn.kept + "Observation: " + observation + "\n";
    }
    throw ModelOutputUnparseable("ReAct gave no Final Answer within " + std::to_string(kBaselineLoopCap) +
                                 " iterations");
}

// --- SearChain ------------------------------------------------------------

struct Chain {
    std::map<int, std::pair<std::string, std::string>> links;  // i -> ([Query i], [Answer i])
    std::string final_text;
};

Chain parse_chain(std::string_view raw) {
    static const std::regex link(R"(^\s*\[(query|answer)\s*(\d+)\]\s*:?\s*(.*?)\s*$)", std::regex::icase);
    Chain c;
    for (auto line : text::split_lines(raw)) {
        std::string s(line);
        std::smatch m;
        if (text::istarts_with(text::trim(s), kFinalContent)) break;
        if (!std::regex_match(s, m, link)) continue;
        auto& slot = c.links[std::stoi(m[2].str())];
        (text::to_lower(m[1].str()) == "query" ? slot.first : slot.second) = m[3].str();
    }
    std::erase_if(c.links, [](const auto& kv) { return kv.second.first.empty(); });
    c.final_text = final_content(raw);
    return c;
}

constexpr std::string_view kChainFormat =
    "[Query 1]: <query>\n[Answer 1]: <answer>\n...\n[Final Content]: <final answer>";

std::string searchain(Run& run, bool with_retrieval) {
    auto prompt =
        run.prompts().get("baselines/searchain").render({{"q", run.query.question_text}, {"", run.query.question_text}});
    Messages messages{{Role::user, prompt}};
    run.rec().label("chain", 0);
    auto raw = run.llm.ask(messages);
    auto chain = parse_chain(raw);
    if (chain.final_text.empty()) {
        messages.push_back({Role::assistant, raw});
        messages.push_back({Role::user, reprompt(run.prompts(), "missing the [Final Content] line", kChainFormat)});
        raw = run.llm.ask(messages);
        chain = parse_chain(raw);
        if (chain.final_text.empty()) throw ModelOutputUnparseable("SearChain reply has no [Final Content]");
    }
    messages.push_back({Role::assistant, raw});

    struct Checked {
        std::vector<Document> docs;
    };
    std::map<std::string, Checked> checked;  // by query text
    if (with_retrieval) {
        for (std::size_t round = 1; round <= kBaselineLoopCap; ++round) {
            std::string references;
            bool fresh = false;
            for (const auto& [i, qa] : chain.links) {
                if (checked.count(qa.first)) continue;
                fresh = true;
                auto docs = run.search(qa.first, static_cast<std::size_t>(i));
                references += "[Query " + std::to_string(i) + "]: " + qa.first + "\n[Reference " +
                              std::to_string(i) + "]: " +
                              (docs.empty() ? std::string("No results found.")
                                            : snippet(docs, std::max<std::size_t>(100, run.config.snippet_chars / 4))) +
                              "\n\n";
                checked[qa.first] = {std::move(docs)};
            }
            if (!fresh) break;
            run.rec().label("feedback", round);
            messages.push_back(
                {Role::user, run.prompts().get("baselines/searchain_feedback")
                                 .render({{"references", std::string(text::trim(references))}})});
            raw = run.llm.ask(messages);
            messages.push_back({Role::assistant, raw});
            auto revised = parse_chain(raw);
            if (revised.final_text.empty()) break;  // keep the last well-formed chain
            chain = std::move(revised);
        }
    }

    for (const auto& [i, qa] : chain.links) {
        auto it = checked.find(qa.first);
        const bool retrieved = it != checked.end();
        run.add_step(qa.first, qa.second, retrieved, retrieved ? it->second.docs : std::vector<Document>{},
                     qa.second);
    }
    auto answer = require_answer(chain.final_text, "SearChain");
    if (run.scope.trace().steps.empty()) run.add_step(run.query.question_text, "", false, {}, answer);
    run.mark_last_final();
    return answer;
}

PipelineConfig rrr_config(VariantName name, PipelineConfig config) {
    config.decompose = name != VariantName::rrr_no_decompose;
    config.retrieval = name != VariantName::rrr_no_retrieval;
    config.dynamic_rewrite = name != VariantName::rrr_no_rewrite;
    return config;
}

}  // namespace

std::string final_content(std::string_view raw) {
    const auto lower = text::to_lower(raw);
    const auto pos = lower.rfind(kFinalContent);
    if (pos == std::string::npos) return {};
    auto rest = text::trim(raw.substr(pos + kFinalContent.size()));
    if (!rest.empty() && rest.front() == ':') rest = text::trim(rest.substr(1));
    if (rest.empty()) return {};
    return after_answer_is(std::string(rest));
}

PipelineTrace run_variant(const PipelineVariant& v, const OriginalQuery& query, ChatBackend& backend,
                          const Retriever* retriever, const PipelineConfig& config, const PromptSet& prompts) {
    for (const auto& name : v.template_set)
        if (!prompts.contains(name)) throw ConfigError("prompt set lacks template '" + name + "'");
    if (v.uses_retrieval && !retriever)
        throw ConfigError("variant " + std::string(to_string(v.name)) + " needs a retriever");

    switch (v.name) {
        case VariantName::rrr_full:
        case VariantName::rrr_no_decompose:
        case VariantName::rrr_no_retrieval:
        case VariantName::rrr_no_rewrite: {
            auto c = rrr_config(v.name, config);
            c.variant = std::string(to_string(v.name));
            return run_review_refine(query, backend, v.uses_retrieval ? retriever : nullptr, c, prompts);
        }
        default:
            break;
    }

    auto c = config;
    c.variant = std::string(to_string(v.name));
    c.decompose = c.dynamic_rewrite = false;
    c.retrieval = v.uses_retrieval;
    c.validate();
    query.validate();

    detail::RunScope scope(query, backend, v.uses_retrieval ? retriever : nullptr, c.variant,
                           model_config_digest(c, prompts));
    Run run{scope, scope.llm(c.model, prompts), c, query};
    scope.begin_step();
    try {
        std::string answer;
        switch (v.name) {
            case VariantName::self_ask: answer = self_ask(run, true); break;
            case VariantName::self_ask_no_retrieval: answer = self_ask(run, false); break;
            case VariantName::react: answer = react(run); break;
            case VariantName::searchain: answer = searchain(run, true); break;
            case VariantName::searchain_no_retrieval: answer = searchain(run, false); break;
            default: answer = single_call(run, v.name); break;
        }
        return scope.finish(std::move(answer));
    } catch (const std::exception& e) {
        scope.abort("step " + std::to_string(scope.trace().steps.size() + 1), e);
    }
}

}  // namespace rrqa
