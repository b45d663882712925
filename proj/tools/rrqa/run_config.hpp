#pragma once

#include "rrqa/eval/dataset.hpp"
#include "rrqa/llm/backend.hpp"
#include "rrqa/retrieval/retriever.hpp"
#include "rrqa/review/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rrqa::cli {

/// Everything one CLI invocation needs. Loaded from a JSON file, then
/// overridden by flags. Paths in the file are relative to the file.
struct RunConfig {
    ModelConfig model;
    RetrieverConfig retriever;
    bool top_k_explicit = false;
    std::size_t step_budget = kDefaultStepBudget;
    std::size_t snippet_chars = kDefaultSnippetChars;
    std::string variant = "rrr_full";
    std::vector<std::string> variants;  // ablate

    std::string dataset_path;
    DatasetKind dataset_kind = DatasetKind::custom;
    std::size_t sample_size = 500;
    std::uint64_t seed = 0;

    std::string index_path;    // saved CorpusIndex
    std::string corpus_path;   // JSONL, indexed on the fly
    std::string web_fixtures;  // recorded web results

    std::string scripted;  // script file; replaces the live backend
    std::string cache_dir;
    std::string output_dir = "rrqa-out";
    std::string prompts_dir;
    std::size_t concurrency = 1;
    bool judge = false;

    // ask
    std::string question;
    std::string question_id = "ask";
    std::string context;
    std::optional<CalendarDate> anchor;

    /// Throws ConfigError.
    void validate() const;

    /// Retrieval depth: explicit value, else the dataset default.
    std::size_t effective_top_k() const;
    PipelineConfig pipeline() const;

    nlohmann::json to_json() const;
};

/// Throws FileNotFound or ConfigError.
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json(const nlohmann::json& j, const std::string& base_dir);

}  // namespace rrqa::cli
