#include "cli.hpp"

#include "run_config.hpp"

#include "rrqa/baselines/variant.hpp"
#include "rrqa/digest.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/eval/judge.hpp"
#include "rrqa/eval/runner.hpp"
#include "rrqa/llm/cache.hpp"
#include "rrqa/llm/openai_backend.hpp"
#include "rrqa/llm/scripted_backend.hpp"
#include "rrqa/text.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <mutex>
#include <ostream>
#include <sstream>

#ifndef RRQA_VERSION
#define RRQA_VERSION "0.0.0"
#endif

namespace rrqa::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> variant, anchor, index, corpus, web_fixtures, cache_dir, scripted, output_dir,
        prompts_dir, dataset, dataset_kind, id, context;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> sample_size, top_k, step_budget, concurrency;
    std::vector<std::string> variants;
    bool judge = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--variant", f.variant, "pipeline variant (rrr_full, vanilla, react, ...)");
    cmd->add_option("--anchor", f.anchor, "temporal anchor, YYYY-MM-DD");
    cmd->add_option("--index", f.index, "saved BM25 index");
    cmd->add_option("--corpus", f.corpus, "corpus JSONL, indexed on the fly");
    cmd->add_option("--web-fixtures", f.web_fixtures, "directory of recorded web results");
    cmd->add_option("--cache-dir", f.cache_dir, "response cache directory");
    cmd->add_option("--scripted", f.scripted, "script file replacing the live model");
    cmd->add_option("--output-dir", f.output_dir, "where traces and reports go");
    cmd->add_option("--prompts-dir", f.prompts_dir, "prompt template directory");
    cmd->add_option("--top-k", f.top_k, "documents per retrieval");
    cmd->add_option("--step-budget", f.step_budget, "maximum reasoning steps");
    cmd->add_option("--seed", f.seed, "sampling seed");
}

void add_batch(CLI::App* cmd, Flags& f) {
    cmd->add_option("--dataset", f.dataset, "dataset JSONL");
    cmd->add_option("--dataset-kind", f.dataset_kind, "freshqa, pat_questions, two_wiki, multihop_rag or custom");
    cmd->add_option("--sample-size", f.sample_size, "records to sample");
    cmd->add_option("--concurrency", f.concurrency, "questions in flight");
    cmd->add_flag("--judge", f.judge, "let a model judge answers the token rule rejects");
}

RunConfig resolve_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
    auto set = [](auto& dst, const auto& src) {
        if (src) dst = *src;
    };
    set(c.variant, f.variant);
    if (f.anchor) c.anchor = CalendarDate::parse(*f.anchor);
    set(c.index_path, f.index);
    set(c.corpus_path, f.corpus);
    set(c.web_fixtures, f.web_fixtures);
    set(c.cache_dir, f.cache_dir);
    set(c.scripted, f.scripted);
    set(c.output_dir, f.output_dir);
    set(c.prompts_dir, f.prompts_dir);
    set(c.dataset_path, f.dataset);
    if (f.dataset_kind) c.dataset_kind = parse_dataset_kind(*f.dataset_kind);
    set(c.question_id, f.id);
    set(c.context, f.context);
    set(c.seed, f.seed);
    set(c.sample_size, f.sample_size);
    set(c.step_budget, f.step_budget);
    set(c.concurrency, f.concurrency);
    if (f.top_k) {
        c.retriever.top_k = *f.top_k;
        c.top_k_explicit = true;
    }
    if (!f.variants.empty()) c.variants = f.variants;
    if (f.judge) c.judge = true;
    c.validate();
    return c;
}

std::string safe_name(std::string_view id) {
    std::string out;
    for (char ch : id) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.') ? ch : '_';
    return out.empty() ? "_" : out;
}

void ensure_writable(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto probe = fs::path(dir) / ".rrqa-write-probe";
    try {
        text::write_file_atomic(probe.string(), "");
        fs::remove(probe, ec);
    } catch (const std::exception&) {
        throw ConfigError("output directory " + dir + " is not writable");
    }
}

void write_json(const fs::path& path, const nlohmann::json& j) { text::write_file_atomic(path.string(), j.dump(2) + "\n"); }

/// Backends, retriever and prompts for one invocation.
class Runtime {
public:
    explicit Runtime(RunConfig cfg)
        : cfg_(std::move(cfg)),
          prompts_(PromptSet::load(cfg_.prompts_dir.empty() ? default_prompts_dir() : cfg_.prompts_dir)) {
        if (!cfg_.index_path.empty()) {
            retriever_ = std::make_shared<Bm25Retriever>(std::make_shared<CorpusIndex>(CorpusIndex::load(cfg_.index_path)));
        } else if (!cfg_.corpus_path.empty()) {
            retriever_ = std::make_shared<Bm25Retriever>(
                std::make_shared<CorpusIndex>(CorpusIndex::build(load_corpus_jsonl(cfg_.corpus_path))));
        } else if (!cfg_.web_fixtures.empty()) {
            retriever_ = std::make_shared<FixtureWebRetriever>(cfg_.web_fixtures);
        }
        if (!cfg_.cache_dir.empty()) cache_ = std::make_shared<ResponseCache>(cfg_.cache_dir);
        if (!cfg_.scripted.empty()) {
            book_ = ScriptBook::load(cfg_.scripted);
        } else {
            live_ = std::make_shared<CountingBackend>(std::make_shared<OpenAIBackend>());
            counters_.push_back(live_);
        }
    }

    const RunConfig& config() const { return cfg_; }
    const PromptSet& prompts() const { return prompts_; }
    const Retriever* retriever() const { return retriever_.get(); }

    std::shared_ptr<ChatBackend> backend(std::string_view variant, std::string_view question_id) {
        std::shared_ptr<CountingBackend> counted = live_;
        if (book_) {
            counted = std::make_shared<CountingBackend>(book_->backend_for(variant, question_id));
            std::lock_guard lock(mu_);
            counters_.push_back(counted);
        }
        if (cache_) return std::make_shared<CachingBackend>(counted, cache_);
        return counted;
    }

    BackendFor backend_for(std::string variant) {
        return [this, variant](const EvalRecord& r) { return backend(variant, r.record_id); };
    }

    std::unique_ptr<LlmJudge> judge() {
        if (!cfg_.judge) return nullptr;
        return std::make_unique<LlmJudge>(backend("judge", "judge"), cfg_.model, prompts_);
    }

    nlohmann::json stats() const {
        std::lock_guard lock(mu_);
        std::size_t calls = 0, peak = 0;
        for (const auto& c : counters_) {
            calls += c->calls();
            peak = std::max(peak, c->peak_in_flight());
        }
        return {{"backend_calls", calls},
                {"peak_in_flight", peak},
                {"cache_hits", cache_ ? cache_->hits() : 0},
                {"cache_misses", cache_ ? cache_->misses() : 0}};
    }

    nlohmann::json manifest(const std::string& command, const std::vector<std::string>& variants,
                            const std::vector<EvalRecord>& records) const {
        nlohmann::json digests = nlohmann::json::object();
        for (const auto& v : variants) {
            auto pc = cfg_.pipeline();
            pc.variant = v;
            digests[v] = model_config_digest(pc, prompts_);
        }
        nlohmann::json ids = nlohmann::json::array();
        for (const auto& r : records) ids.push_back(r.record_id);
        auto file_digest = [](const std::string& p) { return p.empty() ? std::string{} : sha256_hex(text::read_file(p)); };
        return {{"command", command},
                {"code_version", RRQA_VERSION},
                {"config", cfg_.to_json()},
                {"config_digests", digests},
                {"prompts_hash", prompts_.content_hash()},
                {"prompts_version", prompts_.version()},
                {"seed", cfg_.seed},
                {"dataset_digest", file_digest(cfg_.dataset_path)},
                {"scripted_digest", file_digest(cfg_.scripted)},
                {"retriever", retriever_ ? retriever_->describe() : std::string("none")},
                {"record_ids", ids}};
    }

private:
    RunConfig cfg_;
    PromptSet prompts_;
    std::shared_ptr<Retriever> retriever_;
    std::shared_ptr<ResponseCache> cache_;
    std::optional<ScriptBook> book_;
    std::shared_ptr<CountingBackend> live_;
    mutable std::mutex mu_;
    std::vector<std::shared_ptr<CountingBackend>> counters_;
};

int cmd_index(const std::string& corpus, const std::string& output, std::ostream& out) {
    auto index = CorpusIndex::build(load_corpus_jsonl(corpus));
    index.save(output);
    std::ostringstream avg;
    avg.precision(4);
    avg << index.avg_doc_length();
    out << "indexed " << index.doc_count() << " documents (avg length " << avg.str() << " tokens) -> " << output
        << "\n";
    return kOk;
}

int cmd_ask(const Flags& flags, const std::string& question_arg, std::ostream& out, std::ostream& err) {
    auto cfg = resolve_config(flags);
    if (!question_arg.empty()) cfg.question = question_arg;
    if (text::trim(cfg.question).empty()) {
        err << "error: ask needs a non-empty question\n";
        return kUsage;
    }
    ensure_writable(cfg.output_dir);
    Runtime rt(cfg);
    OriginalQuery q{cfg.question_id, cfg.question, std::nullopt, cfg.anchor};
    if (!cfg.context.empty()) q.context = cfg.context;

    const auto& v = variant(cfg.variant);
    auto backend = rt.backend(cfg.variant, cfg.question_id);
    const auto trace_path = (fs::path(cfg.output_dir) / ("trace-" + safe_name(cfg.question_id) + ".json")).string();
    try {
        auto trace = run_variant(v, q, *backend, rt.retriever(), cfg.pipeline(), rt.prompts());
        write_trace_file(trace_path, trace);
        out << trace.final_answer << "\n";
        err << "trace: " << trace_path << "\n";
        return kOk;
    } catch (const PipelineAborted& e) {
        write_trace_file(trace_path, e.partial_trace());
        err << "error: run aborted: " << e.what() << "\npartial trace: " << trace_path << "\n";
        return kFailure;
    }
}

std::vector<EvalRecord> load_sample(const RunConfig& cfg) {
    if (cfg.dataset_path.empty()) throw ConfigError("no dataset given (--dataset or config 'dataset.path')");
    return sample(load_dataset(cfg.dataset_path, cfg.dataset_kind), cfg.sample_size, cfg.seed);
}

EvalRun eval_one(Runtime& rt, const std::vector<EvalRecord>& records, const std::string& name, const fs::path& dir,
                 const AnswerJudge* judge) {
    const auto traces_dir = dir / "traces";
    fs::create_directories(traces_dir);
    auto pc = rt.config().pipeline();
    pc.variant = name;
    EvalRunOptions opts{pc, rt.config().concurrency, rt.config().seed,
                        rt.config().dataset_path.empty() ? "" : std::string(to_string(rt.config().dataset_kind)),
                        judge, [&](const PipelineTrace& t) {
                            write_trace_file((traces_dir / (safe_name(t.question_id) + ".json")).string(), t);
                        }};
    auto run = run_evaluation(variant(name), records, rt.backend_for(name), rt.retriever(), rt.prompts(), opts);
    write_json(dir / "report.json", report_to_json(run.report));
    text::write_file_atomic((dir / "report.csv").string(), report_to_csv(run.report));
    text::write_file_atomic((dir / "report.txt").string(), report_to_text(run.report));
    return run;
}

int cmd_eval(const Flags& flags, std::ostream& out) {
    auto cfg = resolve_config(flags);
    ensure_writable(cfg.output_dir);
    const auto records = load_sample(cfg);
    Runtime rt(cfg);
    auto judge = rt.judge();
    const fs::path dir = cfg.output_dir;
    write_json(dir / "manifest.json", rt.manifest("eval", {cfg.variant}, records));
    auto run = eval_one(rt, records, cfg.variant, dir, judge.get());
    auto stats = rt.stats();
    stats["questions"] = records.size();
    stats["aborted"] = run.report.aborted;
    write_json(dir / "eval_stats.json", stats);
    out << report_to_text(run.report);
    return kOk;
}

int cmd_ablate(const Flags& flags, std::ostream& out) {
    auto cfg = resolve_config(flags);
    auto names = cfg.variants;
    if (names.empty()) names = {"rrr_full", "rrr_no_decompose", "rrr_no_retrieval", "rrr_no_rewrite"};
    for (const auto& n : names) parse_variant(n);
    ensure_writable(cfg.output_dir);
    const auto records = load_sample(cfg);
    Runtime rt(cfg);
    auto judge = rt.judge();
    const fs::path dir = cfg.output_dir;
    write_json(dir / "manifest.json", rt.manifest("ablate", names, records));
    std::vector<EvalReport> reports;
    for (const auto& n : names) reports.push_back(eval_one(rt, records, n, dir / n, judge.get()).report);
    text::write_file_atomic((dir / "comparison.csv").string(), comparison_csv(reports));
    text::write_file_atomic((dir / "comparison.txt").string(), comparison_text(reports));
    auto stats = rt.stats();
    stats["questions"] = records.size();
    stats["variants"] = names;
    write_json(dir / "eval_stats.json", stats);
    out << comparison_text(reports);
    return kOk;
}

int cmd_trace(const std::string& path, std::ostream& out) {
    out << render_trace(read_trace_file(path));
    return kOk;
}

}  // namespace

std::string render_trace(const PipelineTrace& t) {
    std::ostringstream o;
    o << "Question: " << t.query.question_text << "\n";
    if (t.query.temporal_anchor) o << "As of: " << t.query.temporal_anchor->month_year() << "\n";
    o << "Variant: " << t.variant << "\n";
    if (!t.plan.empty()) {
        o << "Plan:\n";
        for (std::size_t i = 0; i < t.plan.size(); ++i) o << "  " << i + 1 << ". " << t.plan[i] << "\n";
    }
    for (const auto& s : t.steps) {
        o << "\nStep " << s.index << "\n";
        o << "  Query Rewriting: " << s.rewritten_query << "\n";
        if (s.needs_retrieval) {
            o << "  Answer: [need_retrieval]\n";
            o << "  Retrieve:";
            if (s.documents.empty()) o << " (no documents)";
            for (const auto& d : s.documents) o << "\n    - " << d.title << " [" << d.doc_id << "]";
            o << "\n";
            if (!s.documents.empty()) {
                auto body = std::string(text::trim(s.documents.front().body));
                if (body.size() > 160) body = body.substr(0, 157) + "...";
                o << "  Context: " << body << "\n";
            }
        } else if (!s.anticipated_answer.empty()) {
            o << "  Answer: " << s.anticipated_answer << "\n";
        }
        o << "  Refined Answer: " << s.refined_answer << "\n";
    }
    if (t.status == TraceStatus::completed) {
        o << "\nAggregated Answer: " << t.final_answer << "\n";
    } else {
        o << "\nAborted: " << t.error << "\n";
    }
    return o.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rrqa: review-then-refine multi-hop question answering"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RRQA_VERSION);

    std::string corpus, index_out;
    auto* index = app.add_subcommand("index", "build a BM25 index from a corpus JSONL file");
    index->add_option("corpus", corpus, "corpus JSONL")->required();
    index->add_option("output", index_out, "index file to write")->required();

    Flags ask_flags;
    std::string question;
    auto* ask = app.add_subcommand("ask", "answer one question");
    ask->add_option("question", question, "the question (or 'question' in --config)");
    ask->add_option("--id", ask_flags.id, "question id used in the trace file name");
    ask->add_option("--context", ask_flags.context, "background context");
    add_common(ask, ask_flags);

    Flags eval_flags;
    auto* eval = app.add_subcommand("eval", "run one variant over a dataset sample");
    add_common(eval, eval_flags);
    add_batch(eval, eval_flags);

    Flags ablate_flags;
    auto* ablate = app.add_subcommand("ablate", "run several variants over the same sample");
    add_common(ablate, ablate_flags);
    add_batch(ablate, ablate_flags);
    ablate->add_option("--variants", ablate_flags.variants, "variants to compare")->delimiter(',');

    std::string trace_path;
    auto* trace = app.add_subcommand("trace", "render a trace file");
    trace->add_option("file", trace_path, "trace JSON")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << RRQA_VERSION << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*index) return cmd_index(corpus, index_out, out);
        if (*ask) return cmd_ask(ask_flags, question, out, err);
        if (*eval) return cmd_eval(eval_flags, out);
        if (*ablate) return cmd_ablate(ablate_flags, out);
        if (*trace) return cmd_trace(trace_path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace rrqa::cli
