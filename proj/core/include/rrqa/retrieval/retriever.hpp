#pragma once

#include "rrqa/retrieval/bm25_index.hpp"
#include "rrqa/retrieval/document.hpp"

#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

struct RetrieverConfig {
    std::size_t top_k = 3;
    double min_score = 0.0;  // 0 disables the threshold

    void validate() const;
};

/// Anything that can turn a query into ranked documents. Implementations
/// must be safe for concurrent search() calls.
class Retriever {
public:
    virtual ~Retriever() = default;
    virtual std::vector<Document> search(std::string_view query, std::size_t top_k) const = 0;
    virtual std::string describe() const = 0;
};

class Bm25Retriever final : public Retriever {
public:
    explicit Bm25Retriever(std::shared_ptr<const CorpusIndex> index);

    std::vector<Document> search(std::string_view query, std::size_t top_k) const override;
    std::string describe() const override;

    /// Number of search() calls; used to check the retrieval gate.
    std::size_t accesses() const noexcept { return accesses_.load(); }
    const CorpusIndex& index() const noexcept { return *index_; }

private:
    std::shared_ptr<const CorpusIndex> index_;
    mutable std::atomic<std::size_t> accesses_{0};
};

/// Extension point for web search or dense retrievers.
class WebSearchAdapter : public Retriever {};

/// Replays recorded web results: `<dir>/<sha256(query)>.json` holding
/// `{"query": ..., "results": [{"doc_id","title","body","score"}...]}`.
/// A query without a recording raises TransportError, never a network call.
class FixtureWebRetriever final : public WebSearchAdapter {
public:
    explicit FixtureWebRetriever(std::string dir);

    std::vector<Document> search(std::string_view query, std::size_t top_k) const override;
    std::string describe() const override;

    static std::string fixture_name(std::string_view query);
    /// Writes a recording for `query`; used to build fixture directories.
    static void record(const std::string& dir, std::string_view query, const std::vector<Document>& results);

private:
    std::string dir_;
};

/// Gated retrieval: returns {} without touching the retriever when
/// `indicator` is false, otherwise at most top_k documents with score
/// non-increasing and score >= min_score when the threshold is set.
std::vector<Document> retrieve(const Retriever* retriever, std::string_view query, bool indicator,
                               const RetrieverConfig& config);

inline constexpr std::size_t kDefaultSnippetChars = 4000;

/// Renders documents into a context block, in order, with a source line per
/// document. Never longer than max_chars; overflow is cut at a whitespace
/// boundary. Throws ValidationError when max_chars < 100.
std::string snippet(std::span<const Document> documents, std::size_t max_chars = kDefaultSnippetChars);

}  // namespace rrqa
