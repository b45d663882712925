#include <doctest.h>

#include "rrqa/errors.hpp"
#include "rrqa/retrieval/bm25_index.hpp"
#include "rrqa/retrieval/retriever.hpp"
#include "rrqa/retrieval/tokenizer.hpp"
#include "rrqa/text.hpp"

#include "harness.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace rrqa;

namespace {

std::vector<CorpusEntry> toy() {
    return {{"d1", "", "the cat sat"}, {"d2", "", "the dog ran"}, {"d3", "", "cat and dog"}};
}

}  // namespace

TEST_CASE("tokenizer lowercases and splits on ASCII punctuation") {
    CHECK(tokenize("Most-followed user, on TikTok!") ==
          std::vector<std::string>{"most", "followed", "user", "on", "tiktok"});
    CHECK(tokenize("Babišová's") == std::vector<std::string>{"babišová", "s"});
    CHECK(tokenize("  ").empty());
}

TEST_CASE("toy corpus ranking agrees with the brute-force scorer") {
    std::vector<CorpusEntry> entries{{"d1", "", "khaby lame tiktok followers"},
                                     {"d2", "", "cooking pasta recipe"},
                                     {"d3", "", "tiktok dance trends"}};
    std::vector<oracle::Doc> docs;
    for (const auto& e : entries) docs.push_back({e.doc_id, e.title, e.body});
    auto index = CorpusIndex::build(entries);
    auto hits = index.search("most-followed user on tiktok", 2);
    auto expected = oracle::bm25_rank(docs, "most-followed user on tiktok", 2);
    REQUIRE(hits.size() == 2);
    REQUIRE(expected.size() == 2);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(index.documents()[hits[i].doc].doc_id == expected[i].id);
        CHECK(std::abs(hits[i].score - expected[i].score) < 1e-12);
    }
    // Only "tiktok" matches; the shorter d3 wins.
    CHECK(expected[0].id == "d3");
    CHECK(expected[1].id == "d1");
    CHECK(expected[0].score == doctest::Approx(0.4901).epsilon(1e-3));
    CHECK(expected[1].score == doctest::Approx(0.4345).epsilon(1e-3));
}

TEST_CASE("index statistics") {
    auto index = CorpusIndex::build(toy());
    CHECK(index.doc_count() == 3);
    CHECK(index.avg_doc_length() == doctest::Approx(3.0));
    CHECK(index.doc_length("d2") == 3);
    CHECK(index.idf("cat") == doctest::Approx(std::log(1.0 + (3 - 2 + 0.5) / (2 + 0.5))));
    CHECK(index.idf("zebra") == 0.0);
    CHECK(index.search("zebra", 3).empty());
}

TEST_CASE("index build errors") {
    CHECK_THROWS_AS(CorpusIndex::build({}), EmptyCorpus);
    CHECK_THROWS_AS(CorpusIndex::build({{"a", "", "x"}, {"a", "", "y"}}), DuplicateDocId);
    CHECK_THROWS_AS(CorpusIndex::build({{"a", "", "  "}}), ValidationError);
}

TEST_CASE("ties break by ascending doc id") {
    auto index = CorpusIndex::build({{"b", "", "same words"}, {"a", "", "same words"}, {"c", "", "other"}});
    auto hits = index.search("same", 5);
    REQUIRE(hits.size() == 2);
    CHECK(index.documents()[hits[0].doc].doc_id == "a");
    CHECK(index.documents()[hits[1].doc].doc_id == "b");
    CHECK(hits[0].score == hits[1].score);
}

TEST_CASE("random corpora match the brute-force scorer") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
    for (int round = 0; round < 40; ++round) {
        std::vector<CorpusEntry> entries;
        std::vector<oracle::Doc> docs;
        const auto n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            std::string body;
            for (auto w = 1 + rng() % 12; w > 0; --w) body += vocab[rng() % vocab.size()] + " ";
            entries.push_back({"d" + std::to_string(i), "", body});
            docs.push_back({"d" + std::to_string(i), "", body});
        }
        std::string query;
        for (auto w = 1 + rng() % 6; w > 0; --w) query += vocab[rng() % vocab.size()] + " ";
        auto index = CorpusIndex::build(entries);
        auto hits = index.search(query, 10);
        auto expected = oracle::bm25_rank(docs, query, 10);
        REQUIRE(hits.size() == expected.size());
        for (std::size_t i = 0; i < hits.size(); ++i) {
            CHECK(index.documents()[hits[i].doc].doc_id == expected[i].id);
            CHECK(std::abs(hits[i].score - expected[i].score) < 1e-9);
        }
    }
}

TEST_CASE("index persists and reloads") {
    const auto dir = harness::scratch_dir("index");
    auto index = CorpusIndex::build(toy());
    index.save(dir + "/i.json");
    auto back = CorpusIndex::load(dir + "/i.json");
    CHECK(back.doc_count() == 3);
    auto a = index.search("cat dog", 3);
    auto b = back.search("cat dog", 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].doc == b[i].doc);
        CHECK(a[i].score == b[i].score);
    }

    auto j = index.to_json();
    j["tokenizer_version"] = kTokenizerVersion + 1;
    CHECK_THROWS_AS(CorpusIndex::from_json(j), IndexFormatError);
    j = index.to_json();
    j["format"] = "something-else";
    CHECK_THROWS_AS(CorpusIndex::from_json(j), IndexFormatError);
    CHECK_THROWS_AS(CorpusIndex::load(dir + "/missing.json"), FileNotFound);
    std::filesystem::remove_all(dir);
}

TEST_CASE("corpus JSONL loading") {
    const auto dir = harness::scratch_dir("corpus");
    text::write_file_atomic(dir + "/ok.jsonl",
                            "{\"id\":\"a\",\"title\":\"A\",\"text\":\"alpha\"}\n\n{\"id\":\"b\",\"text\":\"beta\"}\n");
    auto rows = load_corpus_jsonl(dir + "/ok.jsonl");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].title.empty());

    text::write_file_atomic(dir + "/bad.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\"}\nnot json\n");
    try {
        load_corpus_jsonl(dir + "/bad.jsonl");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.lines() == std::vector<std::size_t>{2, 3});
    }
    text::write_file_atomic(dir + "/dup.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
    CHECK_THROWS_AS(load_corpus_jsonl(dir + "/dup.jsonl"), DuplicateDocId);
    text::write_file_atomic(dir + "/empty.jsonl", "\n");
    CHECK_THROWS_AS(load_corpus_jsonl(dir + "/empty.jsonl"), EmptyCorpus);
    CHECK_THROWS_AS(load_corpus_jsonl(dir + "/nope.jsonl"), FileNotFound);
    std::filesystem::remove_all(dir);
}

TEST_CASE("gated retrieval never touches the retriever when the gate is closed") {
    auto r = harness::topic_retriever();
    RetrieverConfig cfg;
    CHECK(retrieve(r.get(), "topic", false, cfg).empty());
    CHECK(r->accesses() == 0);
    auto docs = retrieve(r.get(), "topic", true, cfg);
    CHECK(r->accesses() == 1);
    CHECK(docs.size() == 2);
    for (std::size_t i = 1; i < docs.size(); ++i) CHECK(docs[i - 1].score >= docs[i].score);
    CHECK_THROWS_AS(retrieve(nullptr, "topic", true, cfg), ConfigError);
}

TEST_CASE("retrieval applies top_k and min_score") {
    auto r = harness::topic_retriever();
    RetrieverConfig cfg;
    cfg.top_k = 1;
    CHECK(retrieve(r.get(), "topic", true, cfg).size() == 1);
    cfg.top_k = 3;
    cfg.min_score = 1e9;
    CHECK(retrieve(r.get(), "topic", true, cfg).empty());
    cfg.top_k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("snippet renders documents within the character budget") {
    std::vector<Document> docs{{"a", "Alpha", "first body", 1.0, DocumentSource::local_corpus},
                               {"b", "Beta", std::string(500, 'x') + " tail words here", 0.5, DocumentSource::web}};
    auto s = snippet(docs, 4000);
    CHECK(s.find("[1] Alpha (source: local_corpus, id: a)\nfirst body") == 0);
    CHECK(s.find("[2] Beta (source: web, id: b)") != std::string::npos);
    auto cut = snippet(docs, 120);
    CHECK(cut.size() <= 120);
    CHECK(cut.find("first body") != std::string::npos);
    CHECK_THROWS_AS(snippet(docs, 50), ValidationError);
    CHECK(snippet({}, 200).empty());
}

TEST_CASE("fixture web retriever replays recordings") {
    const auto dir = harness::scratch_dir("web");
    FixtureWebRetriever::record(dir, "who won", {{"w1", "Result", "They won.", 2.0, DocumentSource::web}});
    FixtureWebRetriever web(dir);
    auto docs = web.search("  who won ", 3);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].source == DocumentSource::web);
    CHECK_THROWS_AS(web.search("never recorded", 3), TransportError);
    std::filesystem::remove_all(dir);
}
