#include "run_config.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <filesystem>
#include <set>

namespace rrqa::cli {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& base, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute() || base.empty()) return p;
    return (fs::path(base) / p).lexically_normal().string();
}

template <class T>
void take(const nlohmann::json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        try {
            out = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(std::string("config field '") + key + "' has the wrong type");
        }
    }
}

}  // namespace

void RunConfig::validate() const {
    model.validate();
    retriever.validate();
    if (step_budget < 1) throw ConfigError("step_budget must be >= 1");
    if (snippet_chars < 100) throw ConfigError("snippet_chars must be >= 100");
    if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
    if (sample_size < 1) throw ConfigError("sample_size must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir is empty");
}

std::size_t RunConfig::effective_top_k() const {
    if (top_k_explicit || dataset_path.empty()) return retriever.top_k;
    return default_top_k(dataset_kind);
}

PipelineConfig RunConfig::pipeline() const {
    PipelineConfig c;
    c.model = model;
    c.retriever = retriever;
    c.retriever.top_k = effective_top_k();
    c.step_budget = step_budget;
    c.snippet_chars = snippet_chars;
    c.variant = variant;
    return c;
}

nlohmann::json RunConfig::to_json() const {
    return {{"model", model},
            {"retriever", {{"top_k", effective_top_k()}, {"min_score", retriever.min_score}}},
            {"step_budget", step_budget},
            {"snippet_chars", snippet_chars},
            {"variant", variant},
            {"variants", variants},
            {"dataset", {{"path", dataset_path}, {"kind", to_string(dataset_kind)}}},
            {"sample_size", sample_size},
            {"seed", seed},
            {"index", index_path},
            {"corpus", corpus_path},
            {"web_fixtures", web_fixtures},
            {"scripted", scripted},
            {"cache_dir", cache_dir},
            {"output_dir", output_dir},
            {"prompts_dir", prompts_dir},
            {"concurrency", concurrency},
            {"judge", judge}};
}

RunConfig run_config_from_json(const nlohmann::json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{
        "model", "retriever", "step_budget", "snippet_chars", "variant", "variants", "dataset", "sample_size", "seed",
        "index", "corpus", "web_fixtures", "scripted", "cache_dir", "output_dir", "prompts_dir", "concurrency",
        "judge", "question", "question_id", "context", "anchor", "expect"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");

    RunConfig c;
    if (auto it = j.find("model"); it != j.end()) c.model = it->get<ModelConfig>();
    if (auto it = j.find("retriever"); it != j.end()) {
        if (it->contains("top_k")) c.top_k_explicit = true;
        take(*it, "top_k", c.retriever.top_k);
        take(*it, "min_score", c.retriever.min_score);
    }
    take(j, "step_budget", c.step_budget);
    take(j, "snippet_chars", c.snippet_chars);
    take(j, "variant", c.variant);
    take(j, "variants", c.variants);
    if (auto it = j.find("dataset"); it != j.end()) {
        take(*it, "path", c.dataset_path);
        std::string kind;
        take(*it, "kind", kind);
        if (!kind.empty()) c.dataset_kind = parse_dataset_kind(kind);
    }
    take(j, "sample_size", c.sample_size);
    take(j, "seed", c.seed);
    take(j, "index", c.index_path);
    take(j, "corpus", c.corpus_path);
    take(j, "web_fixtures", c.web_fixtures);
    take(j, "scripted", c.scripted);
    take(j, "cache_dir", c.cache_dir);
    take(j, "output_dir", c.output_dir);
    take(j, "prompts_dir", c.prompts_dir);
    take(j, "concurrency", c.concurrency);
    take(j, "judge", c.judge);
    take(j, "question", c.question);
    take(j, "question_id", c.question_id);
    take(j, "context", c.context);
    std::string anchor;
    take(j, "anchor", anchor);
    if (!anchor.empty()) c.anchor = CalendarDate::parse(anchor);

    for (auto* p : {&c.dataset_path, &c.index_path, &c.corpus_path, &c.web_fixtures, &c.scripted, &c.cache_dir,
                    &c.output_dir, &c.prompts_dir})
        *p = resolve(base_dir, *p);
    return c;
}

RunConfig load_run_config(const std::string& path) {
    auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("config " + path + " is not valid JSON");
    return run_config_from_json(j, fs::path(path).parent_path().string());
}

}  // namespace rrqa::cli
