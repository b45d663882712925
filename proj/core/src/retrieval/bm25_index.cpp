#include "rrqa/retrieval/bm25_index.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/retrieval/tokenizer.hpp"
#include "rrqa/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rrqa {

namespace {

constexpr const char* kFormatName = "rrqa-bm25-index";

}  // namespace

std::vector<CorpusEntry> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    std::vector<CorpusEntry> entries;
    std::vector<std::size_t> bad_lines;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("text") ||
            !j["text"].is_string() || (!j["id"].is_string() && !j["id"].is_number_integer())) {
            bad_lines.push_back(line_no);
            continue;
        }
        CorpusEntry e;
        e.doc_id = j["id"].is_string() ? j["id"].get<std::string>() : std::to_string(j["id"].get<long long>());
        e.title = j.value("title", std::string{});
        e.body = j["text"].get<std::string>();
        if (e.doc_id.empty() || text::trim(e.body).empty()) {
            bad_lines.push_back(line_no);
            continue;
        }
        if (!seen.insert(e.doc_id).second) throw DuplicateDocId(e.doc_id);
        entries.push_back(std::move(e));
    }
    if (!bad_lines.empty()) {
        std::string msg = path + ": malformed corpus rows at line(s)";
        for (auto n : bad_lines) msg += " " + std::to_string(n);
        throw SchemaError(msg, std::move(bad_lines));
    }
    if (entries.empty()) throw EmptyCorpus();
    return entries;
}

CorpusIndex CorpusIndex::build(std::vector<CorpusEntry> entries, Bm25Params params) {
    if (entries.empty()) throw EmptyCorpus();
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
        if (!seen.insert(e.doc_id).second) throw DuplicateDocId(e.doc_id);
        if (text::trim(e.body).empty()) throw ValidationError("document " + e.doc_id + " has an empty body");
    }
    CorpusIndex index;
    index.params_ = params;
    index.docs_ = std::move(entries);
    index.lengths_.reserve(index.docs_.size());
    for (std::uint32_t d = 0; d < index.docs_.size(); ++d) {
        const auto& e = index.docs_[d];
        auto tokens = tokenize(e.title);
        auto body_tokens = tokenize(e.body);
        tokens.insert(tokens.end(), body_tokens.begin(), body_tokens.end());
        index.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        std::map<std::string, std::uint32_t> tf;
        for (auto& t : tokens) ++tf[t];
        for (auto& [term, count] : tf) index.postings_[term].push_back({d, count});
    }
    index.finalize();
    return index;
}

void CorpusIndex::finalize() {
    double total = 0.0;
    for (auto len : lengths_) total += len;
    avg_len_ = docs_.empty() ? 0.0 : total / static_cast<double>(docs_.size());
}

double CorpusIndex::idf(std::string_view term) const {
    auto it = postings_.find(term);
    if (it == postings_.end()) return 0.0;
    const double n = static_cast<double>(docs_.size());
    const double df = static_cast<double>(it->second.size());
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<CorpusIndex::Hit> CorpusIndex::search(std::string_view query, std::size_t top_k) const {
    std::unordered_map<std::uint32_t, double> acc;
    const double k1 = params_.k1;
    const double b = params_.b;
    for (const auto& term : tokenize(query)) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double w = idf(term);
        for (const auto& p : it->second) {
            const double tf = p.tf;
            const double norm = 1.0 - b + b * static_cast<double>(lengths_[p.doc]) / avg_len_;
            acc[p.doc] += w * tf * (k1 + 1.0) / (tf + k1 * norm);
        }
    }
    std::vector<Hit> hits;
    hits.reserve(acc.size());
    for (auto [doc, score] : acc) hits.push_back({doc, score});
    auto better = [this](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        return docs_[a.doc].doc_id < docs_[b.doc].doc_id;
    };
    const auto keep = std::min(top_k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), better);
    hits.resize(keep);
    return hits;
}

Document CorpusIndex::document(std::uint32_t doc, double score) const {
    const auto& e = docs_.at(doc);
    return Document{e.doc_id, e.title, e.body, score, DocumentSource::local_corpus};
}

std::size_t CorpusIndex::doc_length(std::string_view doc_id) const {
    for (std::size_t d = 0; d < docs_.size(); ++d)
        if (docs_[d].doc_id == doc_id) return lengths_[d];
    throw ValidationError("unknown doc_id " + std::string(doc_id));
}

nlohmann::json CorpusIndex::to_json() const {
    nlohmann::json docs = nlohmann::json::array();
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        docs.push_back({{"id", docs_[d].doc_id},
                        {"title", docs_[d].title},
                        {"text", docs_[d].body},
                        {"length", lengths_[d]}});
    }
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, list] : postings_) {
        nlohmann::json plist = nlohmann::json::array();
        for (const auto& p : list) plist.push_back({docs_[p.doc].doc_id, p.tf});
        postings[term] = std::move(plist);
    }
    return {{"format", kFormatName},
            {"format_version", kIndexFormatVersion},
            {"tokenizer_version", kTokenizerVersion},
            {"k1", params_.k1},
            {"b", params_.b},
            {"doc_count", docs_.size()},
            {"avg_doc_length", avg_len_},
            {"documents", std::move(docs)},
            {"postings", std::move(postings)}};
}

CorpusIndex CorpusIndex::from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != kFormatName)
            throw IndexFormatError("not an rrqa index file");
        if (j.at("format_version").get<int>() != kIndexFormatVersion)
            throw IndexFormatError("unsupported index format_version " + j["format_version"].dump());
        if (j.at("tokenizer_version").get<int>() != kTokenizerVersion)
            throw IndexFormatError("index was built with tokenizer_version " + j["tokenizer_version"].dump() +
                                   "; rebuild it");
        CorpusIndex index;
        index.params_ = {j.at("k1").get<double>(), j.at("b").get<double>()};
        std::unordered_map<std::string, std::uint32_t> position;
        for (const auto& d : j.at("documents")) {
            CorpusEntry e{d.at("id").get<std::string>(), d.value("title", std::string{}),
                          d.at("text").get<std::string>()};
            if (!position.emplace(e.doc_id, static_cast<std::uint32_t>(index.docs_.size())).second)
                throw DuplicateDocId(e.doc_id);
            index.lengths_.push_back(d.at("length").get<std::uint32_t>());
            index.docs_.push_back(std::move(e));
        }
        if (index.docs_.empty()) throw EmptyCorpus();
        for (const auto& [term, list] : j.at("postings").items()) {
            auto& out = index.postings_[term];
            for (const auto& p : list) {
                auto it = position.find(p.at(0).get<std::string>());
                if (it == position.end())
                    throw IndexFormatError("posting for '" + term + "' names unknown doc " + p.at(0).dump());
                out.push_back({it->second, p.at(1).get<std::uint32_t>()});
            }
        }
        index.finalize();
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw IndexFormatError(std::string("malformed index file: ") + e.what());
    }
}

void CorpusIndex::save(const std::string& path) const { text::write_file_atomic(path, to_json().dump()); }

CorpusIndex CorpusIndex::load(const std::string& path) {
    auto raw = text::read_file(path);
    auto j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded()) throw IndexFormatError(path + " is not valid JSON");
    return from_json(j);
}

}  // namespace rrqa
