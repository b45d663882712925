#include <doctest.h>

#include "rrqa/baselines/variant.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/eval/runner.hpp"

#include "harness.hpp"

using namespace rrqa;

namespace {

OriginalQuery question(const std::string& text, const std::string& id = "b1") {
    OriginalQuery q;
    q.question_id = id;
    q.question_text = text;
    return q;
}

PipelineTrace run(VariantName name, const std::vector<std::string>& replies, const Retriever* retriever,
                  const OriginalQuery& q = question("Is the topic old?")) {
    auto backend = ScriptedBackend::from_transcript(replies);
    auto t = run_variant(variant(name), q, *backend, retriever, PipelineConfig{}, harness::prompts());
    CHECK(backend->remaining() == 0);
    return t;
}

}  // namespace

TEST_CASE("variant registry") {
    CHECK(all_variants().size() == 14);
    for (auto v : all_variants()) CHECK(parse_variant(to_string(v)) == v);
    CHECK_THROWS_AS(parse_variant("bogus"), ConfigError);
    CHECK_FALSE(variant(VariantName::vanilla).uses_retrieval);
    CHECK(variant(VariantName::freshprompt).uses_retrieval);
    CHECK_FALSE(variant("searchain_no_retrieval").uses_retrieval);
    for (auto v : all_variants())
        for (const auto& t : variant(v).template_set) CHECK(harness::prompts().contains(t));
}

TEST_CASE("final content extraction") {
    CHECK(final_content("notes...\n[Final Content]: Paris") == "Paris");
    CHECK(final_content("[final content] So the answer is: Rome.") == "Rome");
    CHECK(final_content("no marker").empty());
}

TEST_CASE("vanilla answers in one call") {
    auto retriever = harness::topic_retriever();
    auto t = run(VariantName::vanilla, {"Answer: yes"}, retriever.get());
    CHECK(t.final_answer == "yes");
    CHECK(t.steps.size() == 1);
    CHECK(t.steps[0].final_marker);
    CHECK(retriever->accesses() == 0);
    CHECK(t.backend_call_log.size() == 1);
}

TEST_CASE("chain of thought keeps what follows 'answer is'") {
    auto t = run(VariantName::cot, {"Step one. Step two.\nSo the answer is: 1912."}, nullptr);
    CHECK(t.final_answer == "1912");
}

TEST_CASE("context baselines retrieve once") {
    for (auto name : {VariantName::vanilla_with_context, VariantName::freshprompt, VariantName::chain_of_note}) {
        auto retriever = harness::topic_retriever();
        auto t = run(name, {"notes\n[Final Content]: long history"}, retriever.get());
        CHECK(retriever->accesses() == 1);
        CHECK(t.retriever_calls() == 1);
        CHECK(t.steps[0].needs_retrieval);
        if (name == VariantName::chain_of_note) CHECK(t.final_answer == "long history");
    }
    auto backend = ScriptedBackend::from_transcript(std::vector<std::string>{"x"});
    CHECK_THROWS_AS(run_variant(variant(VariantName::freshprompt), question("q?"), *backend, nullptr, PipelineConfig{},
                                harness::prompts()),
                    ConfigError);
}

TEST_CASE("self-ask with search answers follow-ups from documents") {
    auto retriever = harness::topic_retriever();
    auto t = run(VariantName::self_ask,
                 {"Yes.\nFollow up: What is the topic history?\nIntermediate answer: unsure",
                  "So the final answer is: long history."},
                 retriever.get());
    CHECK(t.final_answer == "long history");
    REQUIRE(t.steps.size() == 1);
    CHECK(t.steps[0].refined_answer == "The topic has a long history and several open questions.");
    CHECK(retriever->accesses() == 1);
}

TEST_CASE("self-ask without retrieval accepts the model's answers") {
    auto retriever = harness::topic_retriever();
    auto t = run(VariantName::self_ask_no_retrieval,
                 {"Yes.\nFollow up: a?\nIntermediate answer: A\nFollow up: b?\nIntermediate answer: B\n"
                  "So the final answer is: AB"},
                 retriever.get());
    CHECK(t.final_answer == "AB");
    CHECK(t.steps.size() == 2);
    CHECK(retriever->accesses() == 0);
}

TEST_CASE("react alternates actions and observations") {
    auto retriever = harness::topic_retriever();
    auto t = run(VariantName::react,
                 {"Thought: look it up\nAction: Search\nAction Input: topic history\nObservation: (invented)",
                  "Thought: and a fact\nAction: Skip\nAction Input: capital of France", "Answer: Paris",
                  "Thought: done\nFinal Answer: long history"},
                 retriever.get());
    CHECK(t.final_answer == "long history");
    REQUIRE(t.steps.size() == 2);
    CHECK(t.steps[0].needs_retrieval);
    CHECK_FALSE(t.steps[1].needs_retrieval);
    CHECK(t.steps[1].refined_answer == "Paris");
    CHECK(retriever->accesses() == 1);
}

TEST_CASE("react gives up after a failed reprompt") {
    auto retriever = harness::topic_retriever();
    auto backend = ScriptedBackend::from_transcript(std::vector<std::string>{"Action: Dance", "Action: Dance"});
    CHECK_THROWS_AS(run_variant(variant(VariantName::react), question("q?"), *backend, retriever.get(),
                                PipelineConfig{}, harness::prompts()),
                    PipelineAborted);
}

TEST_CASE("searchain verifies its chain against search") {
    auto retriever = harness::topic_retriever();
    auto q = question("Which topic fact is oldest?");
    auto t = run(VariantName::searchain,
                 {"[Query 1]: topic history\n[Answer 1]: short\n[Final Content]: short",
                  "[Query 1]: topic history\n[Answer 1]: long history\n[Final Content]: The answer is Road to Istanbul."},
                 retriever.get(), q);
    CHECK(t.final_answer == "Road to Istanbul");
    REQUIRE(t.steps.size() == 1);
    CHECK(t.steps[0].needs_retrieval);
    CHECK(t.steps[0].refined_answer == "long history");
    CHECK(retriever->accesses() == 1);
}

TEST_CASE("no-retrieval variants make zero retriever calls") {
    auto retriever = harness::topic_retriever();
    run(VariantName::searchain_no_retrieval, {"[Query 1]: a\n[Answer 1]: b\n[Final Content]: b"}, retriever.get());
    std::mt19937_64 rng(1);
    auto gen = harness::random_review_run(rng, false);
    auto backend = ScriptedBackend::from_transcript(gen.turns);
    auto t = run_variant(variant(VariantName::rrr_no_retrieval), gen.query, *backend, retriever.get(),
                         PipelineConfig{}, harness::prompts());
    CHECK(t.variant == "rrr_no_retrieval");
    CHECK(retriever->accesses() == 0);
}

TEST_CASE("ablation matrix over shared records") {
    std::vector<EvalRecord> records;
    for (int i = 1; i <= 3; ++i)
        records.push_back({"r" + std::to_string(i), "Is the topic old " + std::to_string(i) + "?", {"yes"},
                           HopClass::single_hop, std::nullopt, DatasetKind::custom});
    auto retriever = harness::topic_retriever();
    BackendFor backends = [](const EvalRecord&) -> std::shared_ptr<ChatBackend> {
        return ScriptedBackend::from_transcript(std::vector<std::string>{"Answer: yes"});
    };
    EvalRunOptions opts;
    opts.concurrency = 2;
    auto runs = ablation_matrix(records, {VariantName::vanilla, VariantName::vanilla_with_context}, backends,
                                retriever.get(), harness::prompts(), opts);
    REQUIRE(runs.size() == 2);
    CHECK(runs[0].report.variant == "vanilla");
    CHECK(runs[0].report.retriever_calls == 0);
    CHECK(runs[1].report.retriever_calls == 3);
    for (const auto& r : runs) CHECK(r.report.overall.accuracy == doctest::Approx(1.0));
    CHECK_THROWS_AS(ablation_matrix(records, {}, backends, retriever.get(), harness::prompts(), opts), ValidationError);
    CHECK_THROWS_AS(ablation_matrix(records, {VariantName::react}, backends, nullptr, harness::prompts(), opts),
                    ConfigError);
}

TEST_CASE("evaluation run records failures as aborted rows") {
    std::vector<EvalRecord> records{{"ok", "q one?", {"yes"}, HopClass::single_hop, std::nullopt, DatasetKind::custom},
                                    {"bad", "q two?", {"yes"}, HopClass::multi_hop, std::nullopt, DatasetKind::custom}};
    BackendFor backends = [](const EvalRecord& r) -> std::shared_ptr<ChatBackend> {
        return ScriptedBackend::from_transcript(
            r.record_id == "ok" ? std::vector<std::string>{"yes"} : std::vector<std::string>{});
    };
    std::vector<std::string> seen;
    EvalRunOptions opts;
    opts.on_trace = [&](const PipelineTrace& t) { seen.push_back(t.question_id); };
    auto run = run_evaluation(variant(VariantName::vanilla), records, backends, nullptr, harness::prompts(), opts);
    CHECK(seen.size() == 2);
    CHECK(run.traces[1].status == TraceStatus::aborted);
    CHECK(run.report.aborted == 1);
    CHECK(run.report.overall.accuracy == doctest::Approx(0.5));
}
