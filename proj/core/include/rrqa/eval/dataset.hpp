#pragma once

#include "rrqa/calendar_date.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

enum class HopClass { single_hop, multi_hop };
enum class DatasetKind { freshqa, pat_questions, two_wiki, multihop_rag, custom };

std::string_view to_string(HopClass h);
std::string_view to_string(DatasetKind k);
/// Throws ConfigError.
DatasetKind parse_dataset_kind(std::string_view s);

struct EvalRecord {
    std::string record_id;
    std::string question;
    std::vector<std::string> gold_answers;
    HopClass hop_class = HopClass::multi_hop;
    std::optional<CalendarDate> temporal_anchor;
    DatasetKind dataset = DatasetKind::custom;

    /// Throws ValidationError.
    void validate() const;
};

/// Reads one JSONL file through the field map of `kind` (see README).
/// Throws FileNotFound, or SchemaError listing every bad line (1-based).
std::vector<EvalRecord> load_dataset(const std::string& path, DatasetKind kind);

/// Deterministic subset of size min(n, |records|), in input order. The same
/// seed always picks the same records. Throws ValidationError for n == 0.
std::vector<EvalRecord> sample(const std::vector<EvalRecord>& records, std::size_t n, std::uint64_t seed);

/// Retrieval depth used for each benchmark: 5 for FreshQA, 3 elsewhere.
std::size_t default_top_k(DatasetKind kind);

}  // namespace rrqa
