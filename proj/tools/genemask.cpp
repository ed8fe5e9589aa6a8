// genemask: PMI-guided masking-plan toolkit for genomic MLM pretraining.
//
// Subcommands: prepare, build-stats, mask, simulate-curriculum,
// eval-surrogate, vocab. Data goes to stdout or --out; diagnostics go to
// stderr. Exit codes: 0 success, 1 internal error, 2 usage/input error.
// Every output file begins with a header carrying the tool version and the
// effective config, so runs are auditable and reproducible.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "genemask/corpus.hpp"
#include "genemask/curriculum.hpp"
#include "genemask/errors.hpp"
#include "genemask/fasta.hpp"
#include "genemask/masking.hpp"
#include "genemask/ngram.hpp"
#include "genemask/pmi.hpp"
#include "genemask/rng.hpp"
#include "genemask/tokenizer.hpp"
#include "genemask/version.hpp"

namespace gm = genemask;
using nlohmann::ordered_json;

namespace {

constexpr uint64_t kPlanSalt = 0x706c616e73303031ULL;  // "plans001"
constexpr uint64_t kProbeSalt = 0x70726f6265303031ULL; // "probe001"
constexpr uint64_t kStepSalt = 0x73746570706c616eULL;  // "stepplan"

// ---------------------------------------------------------------- output --

/// Output sink: a file path, or "-" for stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw gm::IoError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (file_.is_open() && !file_) throw gm::IoError("failed writing output");
        if (!file_.is_open() && !std::cout) throw gm::IoError("failed writing stdout");
    }

private:
    std::ofstream file_;
};

std::string header_line(std::string_view command, const ordered_json& config) {
    ordered_json echo;
    echo["command"] = command;
    echo["config"] = config;
    return std::string("# ") + std::string(gm::kToolName) + " " +
           std::string(gm::kVersion) + " " + echo.dump();
}

std::string format_g(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

// --------------------------------------------------------------- workers --

/// GENEMASK_THREADS caps every parallel section; unset or empty = no cap.
std::optional<unsigned> thread_cap() {
    const char* raw = std::getenv("GENEMASK_THREADS");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    const unsigned long v = std::strtoul(raw, &end, 10);
    if (*end != '\0' || v < 1)
        throw gm::ConfigError("GENEMASK_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
}

/// requested = 0 means "auto" (hardware concurrency).
unsigned resolve_workers(unsigned requested) {
    unsigned n = requested != 0 ? requested
                                : std::max(1u, std::thread::hardware_concurrency());
    if (const auto cap = thread_cap()) n = std::min(n, *cap);
    return n;
}

// ------------------------------------------------------------- tokenizing --

/// Tokenize every sequence long enough for the given minimum token count;
/// reports how many were skipped. Index i of the result maps back to
/// `kept_ids[i]` in the input.
struct TokenizedCorpus {
    std::vector<gm::TokenSequence> tokens;
    std::vector<std::string> ids;
    size_t skipped = 0;
};

TokenizedCorpus tokenize_corpus(const std::vector<gm::NucleotideSequence>& seqs,
                                const gm::TokenizerConfig& cfg, size_t min_tokens) {
    TokenizedCorpus out;
    for (const auto& seq : seqs) {
        if (seq.bases.size() < cfg.k ||
            seq.bases.size() - cfg.k + 1 < min_tokens) {
            ++out.skipped;
            continue;
        }
        out.tokens.push_back(gm::tokenize(seq, cfg));
        out.ids.push_back(seq.source_id + ":" + std::to_string(seq.offset));
    }
    if (out.skipped > 0)
        std::cerr << gm::kToolName << ": skipped " << out.skipped
                  << " sequence(s) too short to mask at k=" << cfg.k << "\n";
    if (out.tokens.empty())
        throw gm::EmptyCorpus("no sequence is long enough to process at k=" +
                              std::to_string(cfg.k));
    return out;
}

size_t min_tokens_for(gm::Strategy strategy, uint32_t k) {
    return strategy == gm::Strategy::kRandomToken ||
                   strategy == gm::Strategy::kGlobalPmi
               ? 1
               : k;
}

// ---------------------------------------------------------------- prepare --

struct PrepareOpts {
    std::string input;
    std::string out = "-";
    uint64_t seed = 0;
    gm::CorpusSpec spec;
};

void run_prepare(const PrepareOpts& o) {
    gm::CorpusSpec spec = o.spec;
    spec.rng_seed = o.seed;
    spec.validate();

    const auto records = gm::load_fasta_file(o.input);
    const auto seqs = gm::prepare_corpus(records, spec);

    ordered_json cfg;
    cfg["input"] = o.input;
    cfg["seed"] = o.seed;
    cfg["fixed_fraction"] = spec.half_fixed_fraction;
    cfg["fixed_length"] = spec.fixed_length;
    cfg["min_length"] = spec.min_random_length;
    cfg["max_length"] = spec.max_random_length;

    Output out(o.out);
    out.stream() << header_line("prepare", cfg) << '\n';
    gm::write_sequences(out.stream(), seqs);
    out.finish();
    std::cerr << gm::kToolName << ": prepared " << seqs.size() << " sequence(s) from "
              << records.size() << " record(s)\n";
}

// ------------------------------------------------------------ build-stats --

struct BuildStatsOpts {
    std::string input;
    std::string out = "-";
    uint32_t k = 6;
    uint64_t min_count = 10;
    unsigned workers = 0; // 0 = auto
};

void run_build_stats(const BuildStatsOpts& o) {
    const auto seqs = gm::load_sequences_file(o.input);
    const unsigned workers = resolve_workers(o.workers);
    const auto table = gm::NpmiTable::build(seqs, o.k, o.min_count, workers);

    ordered_json cfg;
    cfg["input"] = o.input;
    cfg["k"] = o.k;
    cfg["min_count"] = o.min_count;
    cfg["workers"] = workers;

    Output out(o.out);
    out.stream() << header_line("build-stats", cfg) << '\n';
    table.save(out.stream());
    out.finish();
    std::cerr << gm::kToolName << ": ranked " << table.entries().size()
              << " k-mer(s) at or above count " << o.min_count << "\n";
}

// ------------------------------------------------------------------- mask --

struct MaskOpts {
    std::string input;
    std::string out = "-";
    std::string table_path;
    std::string strategy = "random-span";
    double rate = 0.15;
    uint32_t k = 6;
    uint32_t neighborhood = 5;
    double local_pmi_fraction = 0.5;
    uint64_t seed = 0;
};

gm::StrategyConfig strategy_config(const MaskOpts& o) {
    gm::StrategyConfig cfg;
    cfg.strategy = gm::strategy_from_name(o.strategy);
    cfg.base_mask_rate = o.rate;
    cfg.neighborhood = o.neighborhood;
    cfg.local_pmi_fraction = o.local_pmi_fraction;
    cfg.validate();
    return cfg;
}

ordered_json plan_header(std::string_view command, const ordered_json& config) {
    ordered_json header;
    header["record"] = "header";
    header["tool"] = gm::kToolName;
    header["version"] = gm::kVersion;
    header["schema"] = 1;
    header["command"] = command;
    header["config"] = config;
    return header;
}

void run_mask(const MaskOpts& o) {
    gm::StrategyConfig cfg = strategy_config(o);
    const gm::TokenizerConfig tok_cfg{.k = o.k, .max_tokens = 512};
    tok_cfg.validate();

    std::optional<gm::NpmiTable> table;
    const bool needs_table = cfg.strategy == gm::Strategy::kGeneMaskLocal ||
                             cfg.strategy == gm::Strategy::kGlobalPmi;
    if (!o.table_path.empty()) {
        table = gm::NpmiTable::load_file(o.table_path);
        if (table->k() != o.k)
            throw gm::TableMismatch("table k=" + std::to_string(table->k()) +
                                    " but --k is " + std::to_string(o.k));
    } else if (needs_table) {
        throw gm::ConfigError("strategy '" + o.strategy + "' requires --table");
    }

    const auto seqs = gm::load_sequences_file(o.input);
    const auto corpus =
        tokenize_corpus(seqs, tok_cfg, min_tokens_for(cfg.strategy, o.k));

    ordered_json echo;
    echo["input"] = o.input;
    echo["strategy"] = o.strategy;
    echo["rate"] = o.rate;
    echo["k"] = o.k;
    echo["neighborhood"] = o.neighborhood;
    echo["local_pmi_fraction"] = o.local_pmi_fraction;
    echo["seed"] = o.seed;
    echo["table"] = o.table_path.empty() ? ordered_json(nullptr)
                                         : ordered_json(o.table_path);
    if (table) echo["table_corpus"] = table->corpus_digest();

    Output out(o.out);
    out.stream() << plan_header("mask", echo).dump() << '\n';
    const uint64_t base = gm::derive_seed(o.seed, kPlanSalt);
    for (size_t i = 0; i < corpus.tokens.size(); ++i) {
        cfg.rng_seed = gm::derive_seed(base, i);
        const auto plan =
            gm::make_mask_plan(corpus.tokens[i], table ? &*table : nullptr, cfg);
        out.stream() << gm::plan_record_json(corpus.ids[i], "-", plan) << '\n';
    }
    out.finish();
    std::cerr << gm::kToolName << ": planned " << corpus.tokens.size()
              << " sequence(s) with strategy " << o.strategy << "\n";
}

// ------------------------------------------------------------- surrogates --

/// Pooled masked-position scores of `model` over plans generated per
/// sequence by `make_plan(i)`; sequences whose plan is empty are skipped.
struct PooledEval {
    double nll_sum = 0.0;
    uint64_t correct = 0;
    uint64_t n = 0;

    double perplexity() const {
        return n == 0 ? 0.0 : std::exp(nll_sum / static_cast<double>(n));
    }
    double accuracy() const {
        return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
    }
};

template <typename PlanFn>
PooledEval pooled_eval(const gm::NgramModel& model,
                       std::span<const gm::TokenSequence> held_out, PlanFn make_plan) {
    PooledEval pooled;
    for (size_t i = 0; i < held_out.size(); ++i) {
        const gm::MaskPlan plan = make_plan(i);
        if (plan.mask_indices.empty()) continue;
        const gm::EvalReport report = model.evaluate_masked(held_out[i], plan);
        pooled.nll_sum +=
            std::log(report.perplexity) * static_cast<double>(report.n_masked);
        pooled.correct += static_cast<uint64_t>(
            std::llround(report.accuracy * static_cast<double>(report.n_masked)));
        pooled.n += report.n_masked;
    }
    return pooled;
}

// ---------------------------------------------------- simulate-curriculum --

struct SimulateOpts {
    std::string input;
    std::string out = "-";
    std::string plans_path; // empty = no plan stream
    std::string table_path;
    std::string controller = "cm-gems";
    uint64_t max_steps = 10000;
    uint64_t eval_every = 100;
    double threshold = 1.0;
    uint32_t smoothing_window = 1;
    double rate = 0.15;
    uint32_t k = 6;
    uint32_t neighborhood = 5;
    double local_pmi_fraction = 0.5;
    uint32_t order = 2;
    double alpha = 0.1;
    double holdout_fraction = 0.2;
    uint64_t seed = 0;
};

ordered_json simulate_config(const SimulateOpts& o) {
    ordered_json cfg;
    cfg["input"] = o.input;
    cfg["controller"] = o.controller;
    cfg["max_steps"] = o.max_steps;
    cfg["eval_every"] = o.eval_every;
    cfg["threshold"] = o.threshold;
    cfg["smoothing_window"] = o.smoothing_window;
    cfg["rate"] = o.rate;
    cfg["k"] = o.k;
    cfg["neighborhood"] = o.neighborhood;
    cfg["local_pmi_fraction"] = o.local_pmi_fraction;
    cfg["order"] = o.order;
    cfg["alpha"] = o.alpha;
    cfg["holdout_fraction"] = o.holdout_fraction;
    cfg["seed"] = o.seed;
    cfg["table"] = o.table_path.empty() ? ordered_json(nullptr)
                                        : ordered_json(o.table_path);
    return cfg;
}

struct PlanStream {
    std::optional<Output> out;
    std::optional<gm::NpmiTable> table;

    void emit(const std::string& id, std::string_view stage, const gm::MaskPlan& plan) {
        if (out) out->stream() << gm::plan_record_json(id, stage, plan) << '\n';
    }
};

void run_simulate_cm_gems(const SimulateOpts& o, Output& log, PlanStream& plans) {
    if (o.eval_every < 1) throw gm::ConfigError("--eval-every must be >= 1");
    if (o.max_steps < 1) throw gm::ConfigError("--max-steps must be >= 1");
    if (!(o.holdout_fraction > 0.0) || o.holdout_fraction >= 1.0)
        throw gm::ConfigError("--holdout-fraction must be in (0, 1)");

    const gm::TokenizerConfig tok_cfg{.k = o.k, .max_tokens = 512};
    tok_cfg.validate();
    const auto seqs = gm::load_sequences_file(o.input);
    const auto corpus = tokenize_corpus(seqs, tok_cfg, o.k);

    const size_t n = corpus.tokens.size();
    const auto holdout = std::max<size_t>(
        1, static_cast<size_t>(std::llround(static_cast<double>(n) * o.holdout_fraction)));
    if (holdout >= n)
        throw gm::ConfigError("need at least 2 usable sequences to split off a "
                              "held-out slice");
    const size_t train = n - holdout;
    const std::span<const gm::TokenSequence> train_span(corpus.tokens.data(), train);
    const std::span<const gm::TokenSequence> held_span(corpus.tokens.data() + train,
                                                       holdout);

    // One fixed probe plan per held-out sequence; the perplexity stream then
    // reflects model improvement only, never a change in what is masked.
    gm::StrategyConfig probe_cfg;
    probe_cfg.strategy = gm::Strategy::kRandomSpan;
    probe_cfg.base_mask_rate = o.rate;
    const uint64_t probe_base = gm::derive_seed(o.seed, kProbeSalt);
    std::vector<gm::MaskPlan> probes(holdout);
    for (size_t i = 0; i < holdout; ++i) {
        probe_cfg.rng_seed = gm::derive_seed(probe_base, i);
        probes[i] = gm::mask_random_span(held_span[i], probe_cfg);
    }

    gm::NgramModel model(gm::NgramConfig{.order = o.order, .alpha = o.alpha, .k = o.k});
    gm::CurriculumController controller(
        gm::CurriculumConfig{.threshold = o.threshold,
                             .smoothing_window = o.smoothing_window});

    gm::StrategyConfig plan_cfg;
    plan_cfg.base_mask_rate = o.rate;
    plan_cfg.neighborhood = o.neighborhood;
    plan_cfg.local_pmi_fraction = o.local_pmi_fraction;
    const uint64_t step_base = gm::derive_seed(o.seed, kStepSalt);

    log.stream() << "step\tperplexity\tstage\tmlm_probability\n";
    const uint64_t n_evals = o.max_steps / o.eval_every;
    if (n_evals == 0)
        std::cerr << gm::kToolName
                  << ": --eval-every exceeds --max-steps; no observations made\n";
    size_t fed = 0;
    for (uint64_t e = 1; e <= n_evals; ++e) {
        // Feed the next slice of training sequences into the surrogate —
        // the stand-in for the model having trained eval_every more steps.
        const size_t until = static_cast<size_t>(
            static_cast<unsigned __int128>(train) * e / n_evals);
        for (; fed < until; ++fed) model.add_sequence(train_span[fed]);

        const uint64_t step = e * o.eval_every;
        const PooledEval pooled = pooled_eval(
            model, held_span, [&](size_t i) { return probes[i]; });
        if (pooled.n == 0)
            throw gm::EmptyCorpus("held-out probe plans mask no tokens");
        controller.observe(step, pooled.perplexity());

        log.stream() << step << '\t' << format_g(pooled.perplexity(), 10) << '\t'
                     << stage_name(controller.stage()) << '\t'
                     << format_g(controller.mlm_probability(), 6) << '\n';

        if (plans.out) {
            plan_cfg.strategy = controller.select();
            plan_cfg.rng_seed = gm::derive_seed(step_base, step);
            const size_t idx = static_cast<size_t>((e - 1) % train);
            const auto plan = gm::make_mask_plan(
                train_span[idx], plans.table ? &*plans.table : nullptr, plan_cfg);
            plans.emit(corpus.ids[idx], stage_name(controller.stage()), plan);
        }
    }
    if (controller.transition_step())
        std::cerr << gm::kToolName << ": curriculum switched to HARD at step "
                  << *controller.transition_step() << "\n";
    else
        std::cerr << gm::kToolName << ": curriculum stayed EASY for all "
                  << n_evals << " observation(s)\n";
}

void run_simulate_cm_step(const SimulateOpts& o, Output& log, PlanStream& plans) {
    if (o.eval_every < 1) throw gm::ConfigError("--eval-every must be >= 1");
    const gm::CmStepSchedule sched{.max_steps = o.max_steps, .rng_seed = o.seed};

    std::vector<gm::TokenSequence> tokens;
    std::vector<std::string> ids;
    if (plans.out) {
        const gm::TokenizerConfig tok_cfg{.k = o.k, .max_tokens = 512};
        tok_cfg.validate();
        const auto seqs = gm::load_sequences_file(o.input);
        auto corpus = tokenize_corpus(seqs, tok_cfg, o.k);
        tokens = std::move(corpus.tokens);
        ids = std::move(corpus.ids);
    }

    gm::StrategyConfig plan_cfg;
    plan_cfg.base_mask_rate = o.rate;
    plan_cfg.neighborhood = o.neighborhood;
    plan_cfg.local_pmi_fraction = o.local_pmi_fraction;
    const uint64_t step_base = gm::derive_seed(o.seed, kStepSalt);

    log.stream() << "step\tblock\tp_global\tstrategy\n";
    size_t emitted = 0;
    for (uint64_t step = 0; step < o.max_steps; step += o.eval_every) {
        const gm::Strategy strategy = sched.select(step);
        log.stream() << step << '\t' << sched.block_of(step) << '\t'
                     << format_g(sched.global_probability(step), 6) << '\t'
                     << gm::strategy_name(strategy) << '\n';
        if (plans.out) {
            plan_cfg.strategy = strategy;
            plan_cfg.rng_seed = gm::derive_seed(step_base, step);
            const size_t idx = emitted++ % tokens.size();
            const auto plan = gm::make_mask_plan(
                tokens[idx], plans.table ? &*plans.table : nullptr, plan_cfg);
            plans.emit(ids[idx], "-", plan);
        }
    }
}

void run_simulate(const SimulateOpts& o) {
    if (o.controller != "cm-gems" && o.controller != "cm-step")
        throw gm::ConfigError("--controller must be cm-gems or cm-step");

    PlanStream plans;
    if (!o.plans_path.empty()) {
        if (o.table_path.empty())
            throw gm::ConfigError("--plans requires --table (PMI-guided strategies)");
        plans.table = gm::NpmiTable::load_file(o.table_path);
        if (plans.table->k() != o.k)
            throw gm::TableMismatch("table k=" + std::to_string(plans.table->k()) +
                                    " but --k is " + std::to_string(o.k));
        plans.out.emplace(o.plans_path);
        plans.out->stream()
            << plan_header("simulate-curriculum", simulate_config(o)).dump() << '\n';
    }

    Output log(o.out);
    log.stream() << header_line("simulate-curriculum", simulate_config(o)) << '\n';
    if (o.controller == "cm-gems")
        run_simulate_cm_gems(o, log, plans);
    else
        run_simulate_cm_step(o, log, plans);
    log.finish();
    if (plans.out) plans.out->finish();
}

// ---------------------------------------------------------- eval-surrogate --

struct EvalOpts {
    std::string input;
    std::string out = "-";
    std::string table_path;
    std::string model_out;
    std::vector<std::string> strategies = {"random-token", "random-span", "genemask",
                                           "global"};
    double rate = 0.15;
    uint32_t k = 6;
    uint32_t neighborhood = 5;
    double local_pmi_fraction = 0.5;
    uint32_t order = 2;
    double alpha = 0.1;
    double holdout_fraction = 0.2;
    uint64_t seed = 0;
};

void run_eval(const EvalOpts& o) {
    if (o.strategies.empty()) throw gm::ConfigError("--strategies is empty");
    if (!(o.holdout_fraction > 0.0) || o.holdout_fraction >= 1.0)
        throw gm::ConfigError("--holdout-fraction must be in (0, 1)");

    std::vector<gm::Strategy> strategies;
    bool needs_table = false;
    for (const auto& name : o.strategies) {
        strategies.push_back(gm::strategy_from_name(name));
        needs_table = needs_table ||
                      strategies.back() == gm::Strategy::kGeneMaskLocal ||
                      strategies.back() == gm::Strategy::kGlobalPmi;
    }
    std::optional<gm::NpmiTable> table;
    if (!o.table_path.empty()) {
        table = gm::NpmiTable::load_file(o.table_path);
        if (table->k() != o.k)
            throw gm::TableMismatch("table k=" + std::to_string(table->k()) +
                                    " but --k is " + std::to_string(o.k));
    } else if (needs_table) {
        throw gm::ConfigError("PMI-guided strategies require --table");
    }

    const gm::TokenizerConfig tok_cfg{.k = o.k, .max_tokens = 512};
    tok_cfg.validate();
    const auto seqs = gm::load_sequences_file(o.input);
    const auto corpus = tokenize_corpus(seqs, tok_cfg, o.k);

    const size_t n = corpus.tokens.size();
    const auto holdout = std::max<size_t>(
        1, static_cast<size_t>(std::llround(static_cast<double>(n) * o.holdout_fraction)));
    if (holdout >= n)
        throw gm::ConfigError("need at least 2 usable sequences to split off a "
                              "held-out slice");
    const size_t train = n - holdout;

    const auto model = gm::NgramModel::fit(
        std::span<const gm::TokenSequence>(corpus.tokens.data(), train),
        gm::NgramConfig{.order = o.order, .alpha = o.alpha, .k = o.k});
    if (!o.model_out.empty()) {
        Output mout(o.model_out);
        model.save(mout.stream());
        mout.finish();
    }

    const std::span<const gm::TokenSequence> held_span(corpus.tokens.data() + train,
                                                       holdout);
    ordered_json cfg;
    cfg["input"] = o.input;
    cfg["strategies"] = o.strategies;
    cfg["rate"] = o.rate;
    cfg["k"] = o.k;
    cfg["neighborhood"] = o.neighborhood;
    cfg["local_pmi_fraction"] = o.local_pmi_fraction;
    cfg["order"] = o.order;
    cfg["alpha"] = o.alpha;
    cfg["holdout_fraction"] = o.holdout_fraction;
    cfg["seed"] = o.seed;
    cfg["table"] = o.table_path.empty() ? ordered_json(nullptr)
                                        : ordered_json(o.table_path);

    Output out(o.out);
    out.stream() << header_line("eval-surrogate", cfg) << '\n';
    out.stream() << "strategy\tperplexity\taccuracy\tn_masked\n";

    gm::StrategyConfig plan_cfg;
    plan_cfg.base_mask_rate = o.rate;
    plan_cfg.neighborhood = o.neighborhood;
    plan_cfg.local_pmi_fraction = o.local_pmi_fraction;
    const uint64_t base = gm::derive_seed(o.seed, kPlanSalt);
    for (size_t s = 0; s < strategies.size(); ++s) {
        plan_cfg.strategy = strategies[s];
        // Same per-sequence seeds for every strategy: differences in the
        // report come from where the masks fall, not from different draws.
        const PooledEval pooled = pooled_eval(model, held_span, [&](size_t i) {
            plan_cfg.rng_seed = gm::derive_seed(base, i);
            if (held_span[i].token_count() < min_tokens_for(plan_cfg.strategy, o.k))
                return gm::MaskPlan{};
            return gm::make_mask_plan(held_span[i], table ? &*table : nullptr,
                                      plan_cfg);
        });
        out.stream() << o.strategies[s] << '\t' << format_g(pooled.perplexity(), 10)
                     << '\t' << format_g(pooled.accuracy(), 10) << '\t' << pooled.n
                     << '\n';
    }
    out.finish();
}

// ------------------------------------------------------------------ vocab --

struct VocabOpts {
    std::string out = "-";
    uint32_t k = 6;
};

void run_vocab(const VocabOpts& o) {
    const gm::TokenizerConfig tok_cfg{.k = o.k, .max_tokens = 512};
    tok_cfg.validate();
    Output out(o.out);
    gm::write_vocabulary(out.stream(), o.k);
    out.finish();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(gm::kToolName) +
                 ": PMI-guided masking plans for genomic MLM pretraining"};
    app.set_version_flag("--version",
                         std::string(gm::kToolName) + " " + std::string(gm::kVersion));
    app.require_subcommand(1);

    PrepareOpts prepare;
    auto* prepare_cmd = app.add_subcommand(
        "prepare", "Cut pretraining sequences out of a FASTA file");
    prepare_cmd->add_option("input", prepare.input, "input FASTA file")->required();
    prepare_cmd->add_option("--out", prepare.out, "output sequences TSV ('-' = stdout)");
    prepare_cmd->add_option("--seed", prepare.seed, "RNG seed");
    prepare_cmd->add_option("--fixed-length", prepare.spec.fixed_length,
                            "length of the fixed-size windows");
    prepare_cmd->add_option("--min-len", prepare.spec.min_random_length,
                            "minimum random window length");
    prepare_cmd->add_option("--max-len", prepare.spec.max_random_length,
                            "maximum random window length");
    prepare_cmd->add_option("--fixed-fraction", prepare.spec.half_fixed_fraction,
                            "fraction of windows cut at the fixed length");

    BuildStatsOpts stats;
    auto* stats_cmd = app.add_subcommand(
        "build-stats", "Count k-mers and rank them by NPMI");
    stats_cmd->add_option("input", stats.input, "prepared sequences TSV")->required();
    stats_cmd->add_option("--out", stats.out, "output NPMI table ('-' = stdout)");
    stats_cmd->add_option("--k", stats.k, "k-mer width");
    stats_cmd->add_option("--min-count", stats.min_count,
                          "frequency cutoff c for NPMI entries");
    stats_cmd->add_option("--workers", stats.workers,
                          "counting threads (0 = all cores; capped by GENEMASK_THREADS)");

    MaskOpts mask;
    auto* mask_cmd =
        app.add_subcommand("mask", "Emit one masking plan per sequence (JSONL)");
    mask_cmd->add_option("input", mask.input, "prepared sequences TSV")->required();
    mask_cmd->add_option("--out", mask.out, "output plan stream ('-' = stdout)");
    mask_cmd->add_option("--strategy", mask.strategy,
                         "random-token | random-span | genemask | global");
    mask_cmd->add_option("--table", mask.table_path, "NPMI table (PMI-guided strategies)");
    mask_cmd->add_option("--rate", mask.rate, "per-token masking budget");
    mask_cmd->add_option("--k", mask.k, "k-mer width");
    mask_cmd->add_option("--neighborhood", mask.neighborhood,
                         "genemask: nucleotide radius of the local NPMI search");
    mask_cmd->add_option("--local-pmi-fraction", mask.local_pmi_fraction,
                         "genemask: fraction of centers using the NPMI table");
    mask_cmd->add_option("--seed", mask.seed, "RNG seed");

    SimulateOpts sim;
    auto* sim_cmd = app.add_subcommand(
        "simulate-curriculum", "Drive a masking curriculum with the surrogate model");
    sim_cmd->add_option("input", sim.input, "prepared sequences TSV")->required();
    sim_cmd->add_option("--out", sim.out, "curriculum log TSV ('-' = stdout)");
    sim_cmd->add_option("--plans", sim.plans_path, "also stream plans to this file");
    sim_cmd->add_option("--table", sim.table_path, "NPMI table (needed with --plans)");
    sim_cmd->add_option("--controller", sim.controller, "cm-gems | cm-step");
    sim_cmd->add_option("--max-steps", sim.max_steps, "total pretraining steps");
    sim_cmd->add_option("--eval-every", sim.eval_every,
                        "steps between perplexity evaluations / log rows");
    sim_cmd->add_option("--threshold", sim.threshold,
                        "cm-gems: minimum perplexity drop to stay EASY");
    sim_cmd->add_option("--smoothing-window", sim.smoothing_window,
                        "cm-gems: observations averaged before the drop rule");
    sim_cmd->add_option("--rate", sim.rate, "per-token masking budget for plans");
    sim_cmd->add_option("--k", sim.k, "k-mer width");
    sim_cmd->add_option("--neighborhood", sim.neighborhood,
                        "genemask: nucleotide radius of the local NPMI search");
    sim_cmd->add_option("--local-pmi-fraction", sim.local_pmi_fraction,
                        "genemask: fraction of centers using the NPMI table");
    sim_cmd->add_option("--order", sim.order, "surrogate context width per side");
    sim_cmd->add_option("--alpha", sim.alpha, "surrogate smoothing constant");
    sim_cmd->add_option("--holdout-fraction", sim.holdout_fraction,
                        "fraction of sequences held out for perplexity");
    sim_cmd->add_option("--seed", sim.seed, "RNG seed");

    EvalOpts eval;
    auto* eval_cmd = app.add_subcommand(
        "eval-surrogate", "Measure per-strategy prediction difficulty");
    eval_cmd->add_option("input", eval.input, "prepared sequences TSV")->required();
    eval_cmd->add_option("--out", eval.out, "report TSV ('-' = stdout)");
    eval_cmd->add_option("--table", eval.table_path, "NPMI table (PMI-guided strategies)");
    eval_cmd->add_option("--strategies", eval.strategies,
                         "comma-separated strategy list")
        ->delimiter(',');
    eval_cmd->add_option("--rate", eval.rate, "per-token masking budget");
    eval_cmd->add_option("--k", eval.k, "k-mer width");
    eval_cmd->add_option("--neighborhood", eval.neighborhood,
                         "genemask: nucleotide radius of the local NPMI search");
    eval_cmd->add_option("--local-pmi-fraction", eval.local_pmi_fraction,
                         "genemask: fraction of centers using the NPMI table");
    eval_cmd->add_option("--order", eval.order, "surrogate context width per side");
    eval_cmd->add_option("--alpha", eval.alpha, "surrogate smoothing constant");
    eval_cmd->add_option("--holdout-fraction", eval.holdout_fraction,
                         "fraction of sequences held out for evaluation");
    eval_cmd->add_option("--model-out", eval.model_out,
                         "also save the fitted surrogate model here");
    eval_cmd->add_option("--seed", eval.seed, "RNG seed");

    VocabOpts vocab;
    auto* vocab_cmd =
        app.add_subcommand("vocab", "Write the k-mer vocabulary file");
    vocab_cmd->add_option("--out", vocab.out, "output path ('-' = stdout)");
    vocab_cmd->add_option("--k", vocab.k, "k-mer width");

    try {
        app.parse(argc, argv);
        if (prepare_cmd->parsed()) run_prepare(prepare);
        if (stats_cmd->parsed()) run_build_stats(stats);
        if (mask_cmd->parsed()) run_mask(mask);
        if (sim_cmd->parsed()) run_simulate(sim);
        if (eval_cmd->parsed()) run_eval(eval);
        if (vocab_cmd->parsed()) run_vocab(vocab);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help/message
        return rc == 0 ? 0 : 2;     // usage problems are exit 2
    } catch (const gm::Error& e) {
        std::cerr << gm::kToolName << ": error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << gm::kToolName << ": internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
