#include "rrqa/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace rrqa {

namespace {

bool is_article(std::string_view w) { return w == "a" || w == "an" || w == "the"; }

}  // namespace

std::vector<std::string> answer_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !is_article(cur)) out.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (c < 0x80 && std::isspace(c)) {
            flush();
        } else if (c < 0x80 && std::ispunct(c)) {
            continue;
        } else {
            cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
        }
    }
    flush();
    return out;
}

std::string normalize_answer(std::string_view text) {
    std::string out;
    for (const auto& t : answer_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

bool is_correct(std::string_view prediction, const std::vector<std::string>& gold_answers) {
    const auto pred = answer_tokens(prediction);
    for (const auto& gold : gold_answers) {
        const auto g = answer_tokens(gold);
        if (g.empty() || g.size() > pred.size()) continue;
        if (std::search(pred.begin(), pred.end(), g.begin(), g.end()) != pred.end()) return true;
    }
    return false;
}

double token_f1(std::string_view prediction, std::string_view gold) {
    const auto p = answer_tokens(prediction);
    const auto g = answer_tokens(gold);
    if (p.empty() || g.empty()) return 0.0;
    std::map<std::string_view, long> counts;
    for (const auto& t : g) ++counts[t];
    long overlap = 0;
    for (const auto& t : p) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / static_cast<double>(p.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(g.size());
    return 2.0 * precision * recall / (precision + recall);
}

double token_f1(std::string_view prediction, const std::vector<std::string>& gold_answers) {
    double best = 0.0;
    for (const auto& g : gold_answers) best = std::max(best, token_f1(prediction, g));
    return best;
}

}  // namespace rrqa
