#include <doctest.h>

#include "rrqa/errors.hpp"
#include "rrqa/pipeline/state.hpp"

#include <nlohmann/json.hpp>

using namespace rrqa;

namespace {

OriginalQuery question() {
    OriginalQuery q;
    q.question_id = "q";
    q.question_text = "Who is older?";
    return q;
}

SubQueryStep step(std::size_t i, bool final_marker = false) {
    SubQueryStep s;
    s.index = i;
    s.rewritten_query = "sub " + std::to_string(i);
    s.anticipated_answer = "guess";
    s.refined_answer = "answer " + std::to_string(i);
    s.final_marker = final_marker;
    return s;
}

}  // namespace

TEST_CASE("initial state") {
    auto s = initial_state(question(), 3);
    CHECK_FALSE(s.terminal());
    CHECK(s.completed_steps().empty());
    CHECK(s.next_index() == 1);
    CHECK(s.step_budget() == 3);
    CHECK_THROWS_AS(initial_state(question(), 0), ConfigError);
    auto blank = question();
    blank.question_text = "  ";
    CHECK_THROWS_AS(initial_state(blank), ValidationError);
}

TEST_CASE("transition appends and does not mutate") {
    const auto s0 = initial_state(question(), 3);
    const auto s1 = transition(s0, step(1));
    CHECK(s0.completed_steps().empty());
    CHECK(s1.completed_steps().size() == 1);
    CHECK_FALSE(s1.terminal());
    CHECK(s1.next_index() == 2);
}

TEST_CASE("final marker and budget end the chain") {
    auto s = transition(initial_state(question(), 5), step(1, true));
    CHECK(s.terminal());
    CHECK_THROWS_AS(transition(s, step(2)), StateMachineError);

    auto b = initial_state(question(), 2);
    b = transition(b, step(1));
    b = transition(b, step(2));
    CHECK(b.terminal());
    CHECK(b.completed_steps().size() == 2);
}

TEST_CASE("step ordering and completeness") {
    auto s = initial_state(question());
    CHECK_THROWS_AS(transition(s, step(2)), OrderingError);
    auto empty = step(1);
    empty.refined_answer = " ";
    CHECK_THROWS_AS(transition(s, empty), ValidationError);
    auto docs = step(1);
    docs.documents.push_back({"d", "t", "b", 1.0, DocumentSource::local_corpus});
    CHECK_THROWS_AS(transition(s, docs), ValidationError);
    docs.needs_retrieval = true;
    CHECK_NOTHROW(transition(s, docs));
}

TEST_CASE("close needs a step and a live chain") {
    auto s = initial_state(question());
    CHECK_THROWS_AS(close(s), StateMachineError);
    s = transition(s, step(1));
    auto c = close(s);
    CHECK(c.terminal());
    CHECK(c.completed_steps().size() == 1);
    CHECK_THROWS_AS(close(c), StateMachineError);
}

TEST_CASE("history prefers the refined answer") {
    auto s = transition(initial_state(question()), step(1));
    auto h = history_view(s);
    REQUIRE(h.size() == 1);
    CHECK(h[0].query == "sub 1");
    CHECK(h[0].answer() == "answer 1");
    HistoryEntry e{"q", "anticipated", ""};
    CHECK(e.answer() == "anticipated");
}

TEST_CASE("query and step JSON round trip") {
    auto q = question();
    q.context = "background";
    q.temporal_anchor = CalendarDate(2024, 2, 29);
    CHECK(nlohmann::json(q).get<OriginalQuery>() == q);
    auto s = step(3, true);
    s.needs_retrieval = true;
    s.documents.push_back({"d1", "Title", "Body", 0.5, DocumentSource::web});
    CHECK(nlohmann::json(s).get<SubQueryStep>() == s);
}
