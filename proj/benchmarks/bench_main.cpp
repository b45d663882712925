#include "rrqa/eval/metrics.hpp"
#include "rrqa/llm/backend.hpp"
#include "rrqa/retrieval/bm25_index.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

std::vector<rrqa::CorpusEntry> synthetic_corpus(std::size_t docs, std::size_t words) {
    std::mt19937_64 rng(42);
    std::vector<rrqa::CorpusEntry> out;
    out.reserve(docs);
    for (std::size_t i = 0; i < docs; ++i) {
        std::string body;
        for (std::size_t w = 0; w < words; ++w) body += "term" + std::to_string(rng() % 5000) + " ";
        out.push_back({"d" + std::to_string(i), "title " + std::to_string(i), body});
    }
    return out;
}

void BM_IndexBuild(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 120);
    for (auto _ : state) benchmark::DoNotOptimize(rrqa::CorpusIndex::build(corpus));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10000);

void BM_Search(benchmark::State& state) {
    const auto index = rrqa::CorpusIndex::build(synthetic_corpus(static_cast<std::size_t>(state.range(0)), 120));
    for (auto _ : state) benchmark::DoNotOptimize(index.search("term12 term400 term7 term2999", 5));
}
BENCHMARK(BM_Search)->Arg(1000)->Arg(10000);

void BM_TokenF1(benchmark::State& state) {
    const std::string pred = "The director of Road to Istanbul, Rachid Bouchareb, was born later than Delbert Mann.";
    const std::vector<std::string> golds{"Road to Istanbul", "Rachid Bouchareb"};
    for (auto _ : state) benchmark::DoNotOptimize(rrqa::token_f1(pred, golds));
}
BENCHMARK(BM_TokenF1);

void BM_CacheKey(benchmark::State& state) {
    rrqa::ModelConfig cfg;
    rrqa::Messages msgs{{rrqa::Role::user, std::string(static_cast<std::size_t>(state.range(0)), 'x')}};
    for (auto _ : state) benchmark::DoNotOptimize(rrqa::cache_key(cfg, msgs));
}
BENCHMARK(BM_CacheKey)->Arg(512)->Arg(8192);

}  // namespace
BENCHMARK_MAIN();
