#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <string_view>

namespace rrqa {

enum class DocumentSource { local_corpus, web };

std::string_view to_string(DocumentSource s);
DocumentSource document_source_from_string(std::string_view s);

struct Document {
    std::string doc_id;
    std::string title;
    std::string body;
    double score = 0.0;
    DocumentSource source = DocumentSource::local_corpus;

    friend bool operator==(const Document&, const Document&) = default;
};

void to_json(nlohmann::json& j, const Document& d);
void from_json(const nlohmann::json& j, Document& d);

}  // namespace rrqa
