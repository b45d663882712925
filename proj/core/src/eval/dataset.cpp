#include "rrqa/eval/dataset.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

namespace rrqa {

namespace {

// Field names tried in order for each dataset.
struct FieldMap {
    std::vector<std::string> id;
    std::vector<std::string> question;
    std::vector<std::string> golds;  // string or array of strings
    std::string numbered_gold_prefix;  // answer_0, answer_1, ...
    std::vector<std::string> hop;
    bool hop_required = false;
    std::optional<HopClass> fixed_hop;
    std::vector<std::string> anchor;
};

const FieldMap& field_map(DatasetKind kind) {
    static const FieldMap freshqa{{"id"}, {"question"}, {"answers"}, "answer_", {"num_hops", "hop"}, true, {},
                                  {"as_of", "temporal_anchor"}};
    static const FieldMap pat{{"id", "uid"}, {"question"}, {"answers", "answer"}, "", {"hop", "num_hops", "type"},
                              true, {}, {"as_of", "temporal_anchor"}};
    static const FieldMap two_wiki{{"_id", "id"}, {"question"}, {"answer", "answers"}, "", {}, false,
                                   HopClass::multi_hop, {}};
    static const FieldMap multihop_rag{{"id", "query_id"}, {"query", "question"}, {"answer", "answers"}, "", {},
                                       false, HopClass::multi_hop, {"as_of"}};
    static const FieldMap custom{{"id"}, {"question"}, {"answers", "answer"}, "", {"hop", "hop_class"}, false, {},
                                 {"as_of", "temporal_anchor"}};
    switch (kind) {
        case DatasetKind::freshqa: return freshqa;
        case DatasetKind::pat_questions: return pat;
        case DatasetKind::two_wiki: return two_wiki;
        case DatasetKind::multihop_rag: return multihop_rag;
        case DatasetKind::custom: break;
    }
    return custom;
}

const nlohmann::json* first_field(const nlohmann::json& row, const std::vector<std::string>& keys) {
    for (const auto& k : keys) {
        auto it = row.find(k);
        if (it != row.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

std::optional<HopClass> parse_hop(std::string_view raw) {
    const auto s = text::to_lower(text::trim(raw));
    if (s.find("multi") != std::string::npos || s.find("two") != std::string::npos ||
        s.find("2") != std::string::npos)
        return HopClass::multi_hop;
    if (s.find("single") != std::string::npos || s.find("one") != std::string::npos || s == "1")
        return HopClass::single_hop;
    return std::nullopt;
}

EvalRecord map_row(const nlohmann::json& row, DatasetKind kind, std::size_t line_no) {
    if (!row.is_object()) throw ValidationError("not a JSON object");
    const auto& m = field_map(kind);
    EvalRecord r;
    r.dataset = kind;

    if (const auto* id = first_field(row, m.id)) {
        r.record_id = id->is_string() ? id->get<std::string>() : id->dump();
    } else {
        r.record_id = std::string(to_string(kind)) + "-" + std::to_string(line_no);
    }
    const auto* q = first_field(row, m.question);
    if (!q || !q->is_string()) throw ValidationError("missing question");
    r.question = q->get<std::string>();

    auto add_gold = [&](const nlohmann::json& v) {
        if (v.is_string()) {
            if (!text::trim(v.get<std::string>()).empty()) r.gold_answers.push_back(v.get<std::string>());
        } else if (v.is_number()) {
            r.gold_answers.push_back(v.dump());
        } else if (v.is_array()) {
            for (const auto& e : v)
                if (e.is_string() && !text::trim(e.get<std::string>()).empty())
                    r.gold_answers.push_back(e.get<std::string>());
        }
    };
    if (const auto* g = first_field(row, m.golds)) add_gold(*g);
    if (!m.numbered_gold_prefix.empty()) {
        for (int i = 0; i < 10; ++i)
            if (auto it = row.find(m.numbered_gold_prefix + std::to_string(i)); it != row.end()) add_gold(*it);
    }
    if (r.gold_answers.empty()) throw ValidationError("missing gold answers");

    if (m.fixed_hop) {
        r.hop_class = *m.fixed_hop;
    } else if (const auto* h = first_field(row, m.hop); h && h->is_string()) {
        auto hop = parse_hop(h->get<std::string>());
        if (!hop) throw ValidationError("unrecognized hop label '" + h->get<std::string>() + "'");
        r.hop_class = *hop;
    } else if (m.hop_required) {
        throw ValidationError("missing hop label");
    }

    if (const auto* a = first_field(row, m.anchor)) {
        if (!a->is_string()) throw ValidationError("anchor must be a YYYY-MM-DD string");
        r.temporal_anchor = CalendarDate::parse(a->get<std::string>());
    }
    r.validate();
    return r;
}

// Uniform in [0, bound) without modulo bias; std::uniform_int_distribution
// is not specified bit-for-bit across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const auto x = rng();
        if (x < limit) return x % bound;
    }
}

}  // namespace

std::string_view to_string(HopClass h) { return h == HopClass::single_hop ? "single_hop" : "multi_hop"; }

std::string_view to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::freshqa: return "freshqa";
        case DatasetKind::pat_questions: return "pat_questions";
        case DatasetKind::two_wiki: return "two_wiki";
        case DatasetKind::multihop_rag: return "multihop_rag";
        case DatasetKind::custom: break;
    }
    return "custom";
}

DatasetKind parse_dataset_kind(std::string_view s) {
    for (auto k : {DatasetKind::freshqa, DatasetKind::pat_questions, DatasetKind::two_wiki, DatasetKind::multihop_rag,
                   DatasetKind::custom})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown dataset kind '" + std::string(s) +
                      "' (expected freshqa, pat_questions, two_wiki, multihop_rag or custom)");
}

void EvalRecord::validate() const {
    if (text::trim(record_id).empty()) throw ValidationError("record_id is empty");
    if (text::trim(question).empty()) throw ValidationError("question is empty");
    if (gold_answers.empty()) throw ValidationError("record " + record_id + " has no gold answers");
}

std::vector<EvalRecord> load_dataset(const std::string& path, DatasetKind kind) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    std::vector<EvalRecord> out;
    std::vector<std::size_t> bad;
    std::string first_problem;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(map_row(nlohmann::json::parse(line), kind, n));
        } catch (const std::exception& e) {
            if (bad.empty()) first_problem = e.what();
            bad.push_back(n);
        }
    }
    if (!bad.empty()) {
        std::string lines;
        for (auto n : bad) lines += (lines.empty() ? "" : ", ") + std::to_string(n);
        throw SchemaError(path + ": malformed " + std::string(to_string(kind)) + " rows at line(s) " + lines +
                              " (first: " + first_problem + ")",
                          bad);
    }
    return out;
}

std::vector<EvalRecord> sample(const std::vector<EvalRecord>& records, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("sample size must be >= 1");
    if (n >= records.size()) return records;
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) std::swap(idx[i], idx[i + draw_below(rng, idx.size() - i)]);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<EvalRecord> out;
    out.reserve(n);
    for (auto i : idx) out.push_back(records[i]);
    return out;
}

std::size_t default_top_k(DatasetKind kind) { return kind == DatasetKind::freshqa ? 5 : 3; }

}  // namespace rrqa
