#include "rrqa/retrieval/retriever.hpp"

#include "rrqa/digest.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>

namespace rrqa {

void RetrieverConfig::validate() const {
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (min_score < 0.0) throw ConfigError("min_score must be >= 0");
}

Bm25Retriever::Bm25Retriever(std::shared_ptr<const CorpusIndex> index) : index_(std::move(index)) {
    if (!index_) throw ConfigError("Bm25Retriever needs an index");
}

std::vector<Document> Bm25Retriever::search(std::string_view query, std::size_t top_k) const {
    accesses_.fetch_add(1);
    std::vector<Document> out;
    for (const auto& hit : index_->search(query, top_k)) out.push_back(index_->document(hit.doc, hit.score));
    return out;
}

std::string Bm25Retriever::describe() const {
    return "bm25(k1=" + std::to_string(index_->params().k1) + ",b=" + std::to_string(index_->params().b) +
           ",docs=" + std::to_string(index_->doc_count()) + ")";
}

FixtureWebRetriever::FixtureWebRetriever(std::string dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) throw FileNotFound(dir_);
}

std::string FixtureWebRetriever::fixture_name(std::string_view query) {
    return sha256_hex(text::trim(query)) + ".json";
}

std::vector<Document> FixtureWebRetriever::search(std::string_view query, std::size_t top_k) const {
    const auto path = (std::filesystem::path(dir_) / fixture_name(query)).string();
    if (!std::filesystem::exists(path)) {
        throw TransportError("no recorded web results for query '" + std::string(query) + "'", dir_, 1);
    }
    auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
    if (j.is_discarded() || !j.contains("results")) {
        throw MalformedResponse("web fixture " + path + " is malformed", dir_, 1);
    }
    std::vector<Document> docs;
    for (const auto& r : j["results"]) {
        auto d = r.get<Document>();
        d.source = DocumentSource::web;
        docs.push_back(std::move(d));
    }
    std::stable_sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (docs.size() > top_k) docs.resize(top_k);
    return docs;
}

std::string FixtureWebRetriever::describe() const { return "web-fixtures(" + dir_ + ")"; }

void FixtureWebRetriever::record(const std::string& dir, std::string_view query,
                                 const std::vector<Document>& results) {
    nlohmann::json j{{"query", std::string(query)}, {"results", results}};
    text::write_file_atomic((std::filesystem::path(dir) / fixture_name(query)).string(), j.dump(2));
}

std::vector<Document> retrieve(const Retriever* retriever, std::string_view query, bool indicator,
                               const RetrieverConfig& config) {
    config.validate();
    if (!indicator) return {};
    if (!retriever) throw ConfigError("retrieval requested but no retriever is configured");
    auto docs = retriever->search(query, config.top_k);
    if (config.min_score > 0.0) {
        std::erase_if(docs, [&](const Document& d) { return d.score < config.min_score; });
    }
    if (docs.size() > config.top_k) docs.resize(config.top_k);
    return docs;
}

std::string snippet(std::span<const Document> documents, std::size_t max_chars) {
    if (max_chars < 100) throw ValidationError("snippet budget must be at least 100 characters");
    std::string out;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        const auto& d = documents[i];
        if (i) out += "\n\n";
        out += "[" + std::to_string(i + 1) + "] ";
        out += d.title.empty() ? d.doc_id : d.title;
        out += " (source: ";
        out += to_string(d.source);
        out += ", id: " + d.doc_id + ")\n";
        out += text::trim(d.body);
        if (out.size() > max_chars) break;
    }
    if (out.size() <= max_chars) return out;
    std::size_t cut = max_chars;
    while (cut > 0 && !std::isspace(static_cast<unsigned char>(out[cut]))) --cut;
    if (cut == 0) cut = max_chars;
    out.resize(cut);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
}

}  // namespace rrqa
