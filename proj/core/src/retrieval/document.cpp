#include "rrqa/retrieval/document.hpp"

#include "rrqa/errors.hpp"

#include <nlohmann/json.hpp>

namespace rrqa {

std::string_view to_string(DocumentSource s) {
    return s == DocumentSource::web ? "web" : "local_corpus";
}

DocumentSource document_source_from_string(std::string_view s) {
    if (s == "web") return DocumentSource::web;
    if (s == "local_corpus") return DocumentSource::local_corpus;
    throw ValidationError("unknown document source '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const Document& d) {
    j = nlohmann::json{{"doc_id", d.doc_id},
                       {"title", d.title},
                       {"body", d.body},
                       {"score", d.score},
                       {"source", to_string(d.source)}};
}

void from_json(const nlohmann::json& j, Document& d) {
    d.doc_id = j.at("doc_id").get<std::string>();
    d.title = j.value("title", std::string{});
    d.body = j.at("body").get<std::string>();
    d.score = j.value("score", 0.0);
    d.source = document_source_from_string(j.value("source", std::string("local_corpus")));
}

}  // namespace rrqa
