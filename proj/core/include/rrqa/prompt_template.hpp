#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

/// A text template with `{name}` placeholders. A placeholder is a brace pair
/// around an identifier ([A-Za-z_][A-Za-z0-9_]*) or around nothing (`{}`,
/// bound under the empty name). Any other brace text, such as a JSON example,
/// is literal.
class PromptTemplate {
public:
    PromptTemplate() = default;
    PromptTemplate(std::string name, std::string text);

    const std::string& name() const noexcept { return name_; }
    const std::string& text() const noexcept { return text_; }

    /// Distinct placeholder names in first-appearance order.
    std::vector<std::string> placeholders() const;

    /// Substitutes every placeholder. Throws TemplateError when one is unbound.
    /// Values are inserted verbatim and never re-scanned.
    std::string render(const std::map<std::string, std::string>& values) const;

    /// Text with every placeholder replaced by `{}`, everything else byte-exact.
    std::string masked() const;

private:
    std::string name_;
    std::string text_;
};

/// The versioned directory of template files (`<name>.txt`) one run uses.
/// The content hash covers every file name and byte, so any edit changes it.
class PromptSet {
public:
    /// Loads every `*.txt` under `dir` recursively; names are relative paths
    /// without the extension, e.g. "rrr/review" or "baselines/react".
    static PromptSet load(const std::string& dir);

    const PromptTemplate& get(std::string_view name) const;
    bool contains(std::string_view name) const;

    const std::string& version() const noexcept { return version_; }
    const std::string& content_hash() const noexcept { return hash_; }
    std::vector<std::string> names() const;

private:
    std::map<std::string, PromptTemplate, std::less<>> templates_;
    std::string version_;
    std::string hash_;
};

/// Directory the build tree's prompt files live in.
std::string default_prompts_dir();

}  // namespace rrqa
