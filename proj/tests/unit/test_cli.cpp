#include <doctest.h>

#include "cli.hpp"

#include "rrqa/pipeline/trace.hpp"
#include "rrqa/text.hpp"

#include "harness.hpp"

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result rrqa_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = rrqa::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

void put(const fs::path& p, const std::string& body) { std::ofstream(p) << body; }

const char* kCorpus =
    R"({"id": "a", "title": "Alpha", "text": "Alpha is the first letter of the Greek alphabet."})"
    "\n"
    R"({"id": "b", "title": "Beta", "text": "Beta follows alpha."})"
    "\n"
    R"({"id": "c", "title": "Gamma", "text": "Gamma rays are high energy light."})"
    "\n";

/// Three questions, vanilla answers two of them correctly.
fs::path three_question_setup() {
    const fs::path dir = harness::scratch_dir("cli-eval");
    put(dir / "data.jsonl",
        R"({"id": "q1", "question": "First Greek letter?", "answers": ["alpha"], "hop": "single"})"
        "\n"
        R"({"id": "q2", "question": "Second Greek letter?", "answers": ["beta"], "hop": "single"})"
        "\n"
        R"({"id": "q3", "question": "Third Greek letter?", "answers": ["gamma"], "hop": "multi"})"
        "\n");
    put(dir / "script.json", R"({"questions": {
        "q1": {"transcript": ["Alpha"]},
        "q2": {"transcript": ["Beta."]},
        "q3": {"transcript": ["Delta"]}}})");
    put(dir / "corpus.jsonl", kCorpus);
    return dir;
}

}  // namespace

TEST_CASE("index reports the document count") {
    const fs::path dir = harness::scratch_dir("cli-index");
    put(dir / "corpus.jsonl", kCorpus);
    auto r = rrqa_cli({"index", (dir / "corpus.jsonl").string(), (dir / "idx.json").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("indexed 3 documents") != std::string::npos);
    CHECK(fs::exists(dir / "idx.json"));

    auto missing = rrqa_cli({"index", (dir / "nope.jsonl").string(), (dir / "x.json").string()});
    CHECK(missing.code != 0);
    CHECK(missing.err.find("nope.jsonl") != std::string::npos);

    put(dir / "dup.jsonl", std::string(kCorpus) + R"({"id": "a", "title": "Again", "text": "dup"})" "\n");
    CHECK(rrqa_cli({"index", (dir / "dup.jsonl").string(), (dir / "y.json").string()}).code != 0);
    fs::remove_all(dir);
}

TEST_CASE("usage errors") {
    CHECK(rrqa_cli({}).code == rrqa::cli::kUsage);
    CHECK(rrqa_cli({"frobnicate"}).code == rrqa::cli::kUsage);
    auto help = rrqa_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("ablate") != std::string::npos);
    const auto out = harness::scratch_dir("cli-empty");
    auto empty = rrqa_cli({"ask", "   ", "--scripted", "x.json", "--output-dir", out});
    CHECK(empty.code == rrqa::cli::kUsage);
    CHECK(rrqa_cli({"ask", "q?", "--variant", "nonsense"}).code != 0);
    fs::remove_all(out);
}

TEST_CASE("ask replays a fixture case") {
    const auto out = harness::scratch_dir("cli-ask");
    auto r = rrqa_cli({"ask", "--config", harness::case_dir("tiktok_age") + "/config.json", "--output-dir", out});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Khaby Lame") != std::string::npos);
    const auto trace = rrqa::read_trace_file(out + "/trace-tiktok_age.json");
    CHECK(trace.steps.size() == 2);
    CHECK(trace.steps[0].needs_retrieval);
    CHECK_FALSE(trace.steps[1].needs_retrieval);

    auto shown = rrqa_cli({"trace", out + "/trace-tiktok_age.json"});
    CHECK(shown.code == 0);
    CHECK(shown.out.find("Step 1") != std::string::npos);
    CHECK(shown.out.find("Retrieve:") != std::string::npos);
    CHECK(shown.out.find("Aggregated Answer:") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("ask writes the partial trace when a run aborts") {
    const auto dir = harness::scratch_dir("cli-abort");
    put(fs::path(dir) / "script.json", R"({"transcript": ["{\"step 1\": \"x\"}"]})");
    put(fs::path(dir) / "corpus.jsonl", kCorpus);
    auto r = rrqa_cli({"ask", "What is alpha?", "--id", "ab", "--scripted", dir + "/script.json", "--corpus",
                       dir + "/corpus.jsonl", "--output-dir", dir});
    CHECK(r.code == rrqa::cli::kFailure);
    CHECK(r.err.find("partial trace") != std::string::npos);
    auto t = rrqa::read_trace_file(dir + "/trace-ab.json");
    CHECK(t.status == rrqa::TraceStatus::aborted);
    CHECK(t.plan.size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("eval over three questions") {
    const auto dir = three_question_setup();
    const auto out = (dir / "out").string();
    auto r = rrqa_cli({"eval", "--dataset", (dir / "data.jsonl").string(), "--variant", "vanilla", "--scripted",
                       (dir / "script.json").string(), "--output-dir", out, "--concurrency", "2"});
    REQUIRE(r.code == 0);
    auto report = nlohmann::json::parse(rrqa::text::read_file(out + "/report.json"));
    CHECK(report["overall"]["correct"] == 2);
    CHECK(report["overall"]["accuracy"].get<double>() == doctest::Approx(0.6667).epsilon(0.001));
    CHECK(report["single_hop"]["accuracy"].get<double>() == doctest::Approx(1.0));
    CHECK(report["multi_hop"]["accuracy"].get<double>() == doctest::Approx(0.0));
    CHECK(r.out.find("0.6667") != std::string::npos);
    CHECK(r.out.find("(no retrieval)") != std::string::npos);
    for (auto id : {"q1", "q2", "q3"}) CHECK(fs::exists(out + "/traces/" + id + ".json"));
    auto manifest = nlohmann::json::parse(rrqa::text::read_file(out + "/manifest.json"));
    CHECK(manifest["record_ids"].size() == 3);
    CHECK_FALSE(manifest.dump().find("api_key\"") != std::string::npos);
    auto stats = nlohmann::json::parse(rrqa::text::read_file(out + "/eval_stats.json"));
    CHECK(stats["backend_calls"] == 3);
    fs::remove_all(dir);
}

TEST_CASE("ablate writes one report per variant") {
    const auto dir = three_question_setup();
    put(dir / "script.json", R"({"questions": {
        "q1": {"transcript": ["Alpha"]}, "q2": {"transcript": ["Beta"]}, "q3": {"transcript": ["Gamma"]}}})");
    const auto out = (dir / "out").string();
    auto r = rrqa_cli({"ablate", "--dataset", (dir / "data.jsonl").string(), "--variants", "vanilla,freshprompt",
                       "--scripted", (dir / "script.json").string(), "--corpus", (dir / "corpus.jsonl").string(),
                       "--output-dir", out});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out + "/vanilla/report.json"));
    CHECK(fs::exists(out + "/freshprompt/report.json"));
    const auto csv = rrqa::text::read_file(out + "/comparison.csv");
    CHECK(csv.find("vanilla,") != std::string::npos);
    CHECK(csv.find("freshprompt,") != std::string::npos);
    auto fresh = nlohmann::json::parse(rrqa::text::read_file(out + "/freshprompt/report.json"));
    CHECK(fresh["retriever_calls"] == 3);
    fs::remove_all(dir);
}

TEST_CASE("no-retrieval ablation shows zero retrievals") {
    const auto out = harness::scratch_dir("cli-noret");
    auto r = rrqa_cli({"ask", "--config", harness::case_dir("tiktok_age") + "/config.json", "--variant",
                       "rrr_no_retrieval", "--output-dir", out});
    REQUIRE(r.code == 0);
    auto t = rrqa::read_trace_file(out + "/trace-tiktok_age.json");
    CHECK(t.retriever_calls() == 0);
    auto shown = rrqa_cli({"trace", out + "/trace-tiktok_age.json"});
    CHECK(shown.out.find("Retrieve:") == std::string::npos);
    CHECK(shown.out.find("[need_retrieval]") == std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("trace command rejects a broken file") {
    const auto dir = harness::scratch_dir("cli-trace");
    put(fs::path(dir) / "bad.json", "{\"question_id\": \"x\", \"steps\": [");
    auto r = rrqa_cli({"trace", dir + "/bad.json"});
    CHECK(r.code == rrqa::cli::kFailure);
    CHECK(r.err.find("error") != std::string::npos);
    CHECK(rrqa_cli({"trace", dir + "/absent.json"}).code == rrqa::cli::kFailure);
    fs::remove_all(dir);
}

TEST_CASE("api keys are refused in config files") {
    const auto dir = harness::scratch_dir("cli-key");
    put(fs::path(dir) / "c.json", R"({"model": {"model_name": "m", "api_key": "sk-x"}, "question": "q?"})");
    auto r = rrqa_cli({"ask", "--config", dir + "/c.json", "--output-dir", dir});
    CHECK(r.code == rrqa::cli::kFailure);
    CHECK(r.err.find("sk-x") == std::string::npos);
    fs::remove_all(dir);
}
