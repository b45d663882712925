#pragma once

#include "rrqa/retrieval/document.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// One input row of a corpus.
struct CorpusEntry {
    std::string doc_id;
    std::string title;
    std::string body;
};

/// Reads corpus JSONL: one object per line with `id`, optional `title`, and
/// `text`. Blank lines are skipped. Throws FileNotFound, SchemaError
/// (offending line numbers), DuplicateDocId or EmptyCorpus.
std::vector<CorpusEntry> load_corpus_jsonl(const std::string& path);

struct Posting {
    std::uint32_t doc = 0;  // position in documents()
    std::uint32_t tf = 0;
};

/// Immutable Okapi BM25 index over title + body tokens.
///
///   score(d, q) = sum over query tokens t present in d of
///       idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
///   idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
///
/// Repeated query tokens contribute once per occurrence. Only documents that
/// share at least one token with the query are candidates.
class CorpusIndex {
public:
    /// Throws EmptyCorpus, DuplicateDocId, or ValidationError for an empty body.
    static CorpusIndex build(std::vector<CorpusEntry> entries, Bm25Params params = {});

    struct Hit {
        std::uint32_t doc;
        double score;
    };

    /// Top-k hits, score descending, ties by ascending doc_id.
    std::vector<Hit> search(std::string_view query, std::size_t top_k) const;

    Document document(std::uint32_t doc, double score = 0.0) const;
    const std::vector<CorpusEntry>& documents() const noexcept { return docs_; }
    const std::vector<std::uint32_t>& doc_lengths() const noexcept { return lengths_; }
    std::size_t doc_length(std::string_view doc_id) const;
    const std::map<std::string, std::vector<Posting>, std::less<>>& postings() const noexcept {
        return postings_;
    }
    std::size_t doc_count() const noexcept { return docs_.size(); }
    double avg_doc_length() const noexcept { return avg_len_; }
    const Bm25Params& params() const noexcept { return params_; }
    double idf(std::string_view term) const;

    /// Persisted form carries a format name, format version and tokenizer
    /// version; load() rejects anything it does not recognize.
    nlohmann::json to_json() const;
    static CorpusIndex from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static CorpusIndex load(const std::string& path);

private:
    void finalize();

    std::vector<CorpusEntry> docs_;
    std::vector<std::uint32_t> lengths_;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
    double avg_len_ = 0.0;
    Bm25Params params_;
};

inline constexpr int kIndexFormatVersion = 1;

}  // namespace rrqa
