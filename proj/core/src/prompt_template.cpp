#include "rrqa/prompt_template.hpp"

#include "rrqa/digest.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <functional>

#ifndef RRQA_DEFAULT_PROMPTS_DIR
#define RRQA_DEFAULT_PROMPTS_DIR "prompts"
#endif

namespace rrqa {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Calls on_text for literal runs and on_slot for each placeholder name.
void scan(std::string_view text, const std::function<void(std::string_view)>& on_text,
          const std::function<void(std::string_view)>& on_slot) {
    std::size_t pos = 0;
    std::size_t literal_start = 0;
    while (pos < text.size()) {
        if (text[pos] != '{') {
            ++pos;
            continue;
        }
        std::size_t end = pos + 1;
        if (end < text.size() && ident_start(text[end])) {
            while (end < text.size() && ident_char(text[end])) ++end;
        }
        if (end < text.size() && text[end] == '}') {
            on_text(text.substr(literal_start, pos - literal_start));
            on_slot(text.substr(pos + 1, end - pos - 1));
            pos = end + 1;
            literal_start = pos;
        } else {
            ++pos;
        }
    }
    on_text(text.substr(literal_start));
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string text)
    : name_(std::move(name)), text_(std::move(text)) {}

std::vector<std::string> PromptTemplate::placeholders() const {
    std::vector<std::string> names;
    scan(
        text_, [](std::string_view) {},
        [&](std::string_view slot) {
            if (std::find(names.begin(), names.end(), slot) == names.end()) names.emplace_back(slot);
        });
    return names;
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const {
    std::string out;
    out.reserve(text_.size());
    scan(
        text_, [&](std::string_view lit) { out.append(lit); },
        [&](std::string_view slot) {
            auto it = values.find(std::string(slot));
            if (it == values.end()) {
                throw TemplateError("template '" + name_ + "' has unbound placeholder {" +
                                    std::string(slot) + "}");
            }
            out.append(it->second);
        });
    return out;
}

std::string PromptTemplate::masked() const {
    std::string out;
    scan(
        text_, [&](std::string_view lit) { out.append(lit); },
        [&](std::string_view) { out.append("{}"); });
    return out;
}

PromptSet PromptSet::load(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw FileNotFound(dir);
    PromptSet set;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::string hash_input;
    for (const auto& path : files) {
        auto rel = fs::relative(path, dir);
        rel.replace_extension();
        auto name = rel.generic_string();
        auto body = text::read_file(path.string());
        hash_input += name;
        hash_input.push_back('\0');
        hash_input += body;
        hash_input.push_back('\0');
        set.templates_.emplace(name, PromptTemplate(name, std::move(body)));
    }
    const auto version_file = fs::path(dir) / "VERSION";
    set.version_ = fs::exists(version_file) ? std::string(text::trim(text::read_file(version_file.string())))
                                            : std::string("unversioned");
    hash_input += set.version_;
    set.hash_ = sha256_hex(hash_input);
    return set;
}

const PromptTemplate& PromptSet::get(std::string_view name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw TemplateError("prompt set has no template '" + std::string(name) + "'");
    return it->second;
}

bool PromptSet::contains(std::string_view name) const { return templates_.find(name) != templates_.end(); }

std::vector<std::string> PromptSet::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : templates_) out.push_back(name);
    return out;
}

std::string default_prompts_dir() {
    if (const char* env = std::getenv("RRQA_PROMPTS_DIR"); env && *env) return env;
    return RRQA_DEFAULT_PROMPTS_DIR;
}

}  // namespace rrqa
