#include <doctest.h>

#include "rrqa/errors.hpp"
#include "rrqa/review/review.hpp"

#include "harness.hpp"

using namespace rrqa;

namespace {

OriginalQuery anchored() {
    OriginalQuery q;
    q.question_id = "tt";
    q.question_text = "How old is the most-followed person on TikTok?";
    q.temporal_anchor = CalendarDate(2024, 6, 15);
    return q;
}

}  // namespace

TEST_CASE("review reply with an answer") {
    auto p = parse_review_output("Query: Who leads?\nAnswer: Alice", false);
    REQUIRE(p);
    CHECK(p.value->rewritten_query == "Who leads?");
    CHECK(p.value->anticipated_answer == "Alice");
    CHECK_FALSE(p.value->needs_retrieval);
    CHECK_FALSE(p.value->terminate);
}

TEST_CASE("review reply asking for retrieval") {
    auto p = parse_review_output("Query Rewriting: Who leads as of June 2024?\nAnswer: [need_retrieval]", false);
    REQUIRE(p);
    CHECK(p.value->needs_retrieval);
    CHECK(p.value->anticipated_answer.empty());
    CHECK(p.value->rewritten_query == "Who leads as of June 2024?");
}

TEST_CASE("final marker handling") {
    auto last = parse_review_output("Query: q\nAnswer: a\n[final]", false);
    REQUIRE(last);
    CHECK(last.value->terminate);
    CHECK_FALSE(last.value->closes_chain());

    CHECK_FALSE(parse_review_output("[final]", false));
    auto bare = parse_review_output("[FINAL]", true);
    REQUIRE(bare);
    CHECK(bare.value->closes_chain());

    auto both = parse_review_output("Query: q\nAnswer: [need_retrieval]\n[final]", true);
    CHECK_FALSE(both);
    CHECK(both.problem.find("both") != std::string::npos);
}

TEST_CASE("malformed review replies") {
    CHECK_FALSE(parse_review_output("", false));
    CHECK_FALSE(parse_review_output("Answer: x", false));
    CHECK_FALSE(parse_review_output("Query: q", false));
    CHECK_FALSE(parse_review_output("Query: q\nAnswer: .", false));
}

TEST_CASE("multi-line answers are joined") {
    auto p = parse_review_output("Query: q\nAnswer: first part\nsecond part", false);
    REQUIRE(p);
    CHECK(p.value->anticipated_answer == "first part second part");
}

TEST_CASE("plan parsing") {
    auto j = parse_plan(R"(Sure: {"step 2": "b", "step 1": "a", "step 10": "c"})");
    REQUIRE(j);
    CHECK(*j.value == std::vector<std::string>{"a", "b", "c"});
    auto lines = parse_plan("step 1: first\nstep 2: second");
    REQUIRE(lines);
    CHECK(*lines.value == std::vector<std::string>{"first", "second"});
    auto numbered = parse_plan("1. one\n2) two");
    REQUIRE(numbered);
    CHECK(numbered.value->size() == 2);
    CHECK_FALSE(parse_plan("no plan here"));
}

TEST_CASE("plan call reprompts once") {
    const auto& prompts = harness::prompts();
    ModelConfig model;
    auto q = anchored();

    auto ok = ScriptedBackend::from_transcript(std::vector<std::string>{"garbage", R"({"step 1": "x"})"});
    LlmContext llm{*ok, model, prompts};
    CHECK(plan_decomposition(q, llm) == std::vector<std::string>{"x"});

    auto bad = ScriptedBackend::from_transcript(std::vector<std::string>{"garbage", "still garbage"});
    LlmContext llm2{*bad, model, prompts};
    CHECK_THROWS_AS(plan_decomposition(q, llm2), ModelOutputUnparseable);
}

TEST_CASE("review prompt carries history, anchor and gate") {
    const auto& prompts = harness::prompts();
    auto q = anchored();
    SubQueryStep s;
    s.index = 1;
    s.rewritten_query = "Who is the most-followed person on TikTok as of June 2024?";
    s.anticipated_answer = "Khaby Lame";
    s.refined_answer = "Khaby Lame";
    auto state = transition(initial_state(q), s);
    auto text = build_review_prompt(q, state, std::string("Find his age"), prompts);
    CHECK(text.find(q.question_text) != std::string::npos);
    CHECK(text.find("1. Query: " + s.rewritten_query) != std::string::npos);
    CHECK(text.find("June 2024") != std::string::npos);
    CHECK(text.find("Find his age") != std::string::npos);
    CHECK(text.find("[need_retrieval]") != std::string::npos);

    ReviewOptions internal;
    internal.retrieval_gate = false;
    auto no_gate = build_review_prompt(q, state, std::nullopt, prompts, internal);
    CHECK(no_gate.find("[need_retrieval]") == std::string::npos);
}

TEST_CASE("review step enforces the anchor") {
    const auto& prompts = harness::prompts();
    ModelConfig model;
    auto q = anchored();
    auto state = initial_state(q);

    auto fixed = ScriptedBackend::from_transcript(std::vector<std::string>{
        "Query: Who is the most-followed person on TikTok?\nAnswer: Khaby Lame",
        "Query: Who is the most-followed person on TikTok as of June 2024?\nAnswer: Khaby Lame"});
    LlmContext llm{*fixed, model, prompts};
    auto out = review_step(q, state, std::nullopt, llm);
    CHECK(out.rewritten_query.find("June 2024") != std::string::npos);
    CHECK(fixed->calls() == 2);

    auto never = ScriptedBackend::from_transcript(std::vector<std::string>{
        "Query: Who is it?\nAnswer: x", "Query: Who is it really?\nAnswer: x"});
    LlmContext llm2{*never, model, prompts};
    CHECK_THROWS_AS(review_step(q, state, std::nullopt, llm2), ModelOutputUnparseable);
}

TEST_CASE("review step on a terminal state") {
    const auto& prompts = harness::prompts();
    ModelConfig model;
    OriginalQuery q;
    q.question_text = "q?";
    SubQueryStep s;
    s.index = 1;
    s.rewritten_query = "q";
    s.anticipated_answer = "a";
    s.refined_answer = "a";
    s.final_marker = true;
    auto state = transition(initial_state(q), s);
    auto backend = ScriptedBackend::from_transcript(std::vector<std::string>{});
    LlmContext llm{*backend, model, prompts};
    CHECK_THROWS_AS(review_step(q, state, std::nullopt, llm), StateMachineError);
}

TEST_CASE("fixed query keeps the plan's wording") {
    const auto& prompts = harness::prompts();
    ModelConfig model;
    OriginalQuery q;
    q.question_text = "q?";
    auto backend = ScriptedBackend::from_transcript(std::vector<std::string>{"Answer: [need_retrieval]"});
    LlmContext llm{*backend, model, prompts};
    ReviewOptions opts;
    opts.fixed_query = "the plan step";
    auto out = review_step(q, initial_state(q), std::nullopt, llm, opts);
    CHECK(out.rewritten_query == "the plan step");
    CHECK(out.needs_retrieval);
}
