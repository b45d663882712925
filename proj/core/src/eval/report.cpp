#include "rrqa/eval/report.hpp"

#include "rrqa/errors.hpp"
#include "rrqa/eval/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace rrqa {

namespace {

void finish(ClassStats& s) {
    s.accuracy = s.total ? static_cast<double>(s.correct) / static_cast<double>(s.total) : 0.0;
}

std::string fixed(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join_golds(const std::vector<std::string>& golds) {
    std::string out;
    for (const auto& g : golds) out += (out.empty() ? "" : " | ") + g;
    return out;
}

nlohmann::json stats_json(const ClassStats& s) {
    return {{"total", s.total}, {"correct", s.correct}, {"accuracy", s.accuracy}};
}

// Pads each column to its widest cell.
std::string aligned(const std::vector<std::vector<std::string>>& table) {
    std::vector<std::size_t> width;
    for (const auto& row : table)
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], row[c].size());
        }
    std::string out;
    for (std::size_t r = 0; r < table.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < table[r].size(); ++c) {
            line += table[r][c];
            if (c + 1 < table[r].size()) line += std::string(width[c] - table[r][c].size() + 2, ' ');
        }
        out += line + "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w + 2;
            out += std::string(total - 2, '-') + "\n";
        }
    }
    return out;
}

}  // namespace

EvalReport evaluate(const std::vector<PipelineTrace>& traces, const std::vector<EvalRecord>& records,
                    const EvaluateOptions& options) {
    if (traces.empty()) throw ValidationError("evaluate needs at least one trace");
    std::map<std::string, const EvalRecord*> by_id;
    for (const auto& r : records) {
        if (!by_id.emplace(r.record_id, &r).second) throw ValidationError("duplicate record id " + r.record_id);
    }
    std::map<std::string, const PipelineTrace*> trace_for;
    std::vector<std::string> orphans;
    for (const auto& t : traces) {
        if (!by_id.count(t.question_id)) {
            orphans.push_back(t.question_id);
            continue;
        }
        if (!trace_for.emplace(t.question_id, &t).second)
            throw ValidationError("more than one trace for question " + t.question_id);
    }
    if (!orphans.empty()) {
        std::sort(orphans.begin(), orphans.end());
        throw UnmatchedTrace(orphans);
    }

    EvalReport rep;
    rep.variant = options.variant;
    rep.dataset = options.dataset;
    rep.seed = options.seed;
    rep.sample_size = records.size();
    rep.judge_used = options.judge != nullptr;
    double f1_sum = 0.0;
    for (const auto& [id, rec] : by_id) {  // std::map: sorted by record_id
        EvalRow row;
        row.record_id = id;
        row.hop_class = rec->hop_class;
        row.question = rec->question;
        row.gold_answers = rec->gold_answers;
        auto it = trace_for.find(id);
        if (it == trace_for.end()) {
            row.status = "missing";
        } else {
            const auto& t = *it->second;
            row.status = t.status == TraceStatus::completed ? "completed" : "aborted";
            row.error = t.error;
            row.steps = t.steps.size();
            row.retriever_calls = t.retriever_calls();
            rep.retriever_calls += row.retriever_calls;
            rep.retrieval_steps += t.retrieval_steps();
            if (t.status == TraceStatus::completed) {
                row.prediction = t.final_answer;
                row.correct = is_correct(row.prediction, row.gold_answers);
                if (!row.correct && options.judge) {
                    try {
                        row.correct = row.judged =
                            options.judge->accepts(row.question, row.gold_answers, row.prediction);
                    } catch (const std::exception& e) {
                        row.error = std::string("judge: ") + e.what();
                    }
                }
                row.f1 = token_f1(row.prediction, row.gold_answers);
            }
        }
        if (row.status != "completed") ++rep.aborted;
        auto& cls = row.hop_class == HopClass::single_hop ? rep.single_hop : rep.multi_hop;
        ++cls.total;
        ++rep.overall.total;
        if (row.correct) {
            ++cls.correct;
            ++rep.overall.correct;
        }
        f1_sum += row.f1;
        rep.rows.push_back(std::move(row));
    }
    finish(rep.single_hop);
    finish(rep.multi_hop);
    finish(rep.overall);
    rep.mean_f1 = rep.rows.empty() ? 0.0 : f1_sum / static_cast<double>(rep.rows.size());
    return rep;
}

nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"record_id", row.record_id},
                        {"hop_class", to_string(row.hop_class)},
                        {"question", row.question},
                        {"prediction", row.prediction},
                        {"gold_answers", row.gold_answers},
                        {"correct", row.correct},
                        {"judged", row.judged},
                        {"f1", row.f1},
                        {"status", row.status},
                        {"error", row.error},
                        {"steps", row.steps},
                        {"retriever_calls", row.retriever_calls}});
    }
    return {{"variant", r.variant},
            {"dataset", r.dataset},
            {"seed", r.seed},
            {"sample_size", r.sample_size},
            {"single_hop", stats_json(r.single_hop)},
            {"multi_hop", stats_json(r.multi_hop)},
            {"overall", stats_json(r.overall)},
            {"mean_f1", r.mean_f1},
            {"aborted", r.aborted},
            {"retriever_calls", r.retriever_calls},
            {"retrieval_steps", r.retrieval_steps},
            {"judge_used", r.judge_used},
            {"rows", rows}};
}

std::string report_to_csv(const EvalReport& r) {
    std::string out = "record_id,hop_class,status,correct,f1,steps,retriever_calls,prediction,gold_answers\n";
    for (const auto& row : r.rows) {
        out += csv_field(row.record_id) + "," + std::string(to_string(row.hop_class)) + "," + row.status + "," +
               (row.correct ? "1" : "0") + "," + fixed(row.f1) + "," + std::to_string(row.steps) + "," +
               std::to_string(row.retriever_calls) + "," + csv_field(row.prediction) + "," +
               csv_field(join_golds(row.gold_answers)) + "\n";
    }
    return out;
}

std::string report_to_text(const EvalReport& r) {
    std::ostringstream out;
    out << "variant: " << r.variant << "   dataset: " << (r.dataset.empty() ? "-" : r.dataset)
        << "   seed: " << r.seed << "   sample: " << r.sample_size << "\n\n";
    out << aligned({{"class", "correct", "total", "accuracy"},
                    {"single_hop", std::to_string(r.single_hop.correct), std::to_string(r.single_hop.total),
                     fixed(r.single_hop.accuracy)},
                    {"multi_hop", std::to_string(r.multi_hop.correct), std::to_string(r.multi_hop.total),
                     fixed(r.multi_hop.accuracy)},
                    {"overall", std::to_string(r.overall.correct), std::to_string(r.overall.total),
                     fixed(r.overall.accuracy)}});
    out << "\nmean F1: " << fixed(r.mean_f1) << "   aborted: " << r.aborted
        << "   retriever calls: " << r.retriever_calls;
    if (r.retriever_calls == 0) out << " (no retrieval)";
    out << "\n\n";
    std::vector<std::vector<std::string>> rows{{"record_id", "hop", "ok", "f1", "steps", "ret", "status"}};
    for (const auto& row : r.rows)
        rows.push_back({row.record_id, row.hop_class == HopClass::single_hop ? "single" : "multi",
                        row.correct ? "yes" : "no", fixed(row.f1, 3), std::to_string(row.steps),
                        std::to_string(row.retriever_calls), row.status});
    out << aligned(rows);
    return out.str();
}

std::string comparison_csv(const std::vector<EvalReport>& reports) {
    std::string out = "variant,single_hop_acc,multi_hop_acc,overall_acc,mean_f1,aborted,retriever_calls,sample_size\n";
    for (const auto& r : reports)
        out += csv_field(r.variant) + "," + fixed(r.single_hop.accuracy) + "," + fixed(r.multi_hop.accuracy) + "," +
               fixed(r.overall.accuracy) + "," + fixed(r.mean_f1) + "," + std::to_string(r.aborted) + "," +
               std::to_string(r.retriever_calls) + "," + std::to_string(r.sample_size) + "\n";
    return out;
}

std::string comparison_text(const std::vector<EvalReport>& reports) {
    std::vector<std::vector<std::string>> rows{
        {"variant", "single-hop", "multi-hop", "overall", "F1", "aborted", "retrievals"}};
    for (const auto& r : reports)
        rows.push_back({r.variant, fixed(r.single_hop.accuracy), fixed(r.multi_hop.accuracy),
                        fixed(r.overall.accuracy), fixed(r.mean_f1), std::to_string(r.aborted),
                        std::to_string(r.retriever_calls)});
    return aligned(rows);
}

}  // namespace rrqa
