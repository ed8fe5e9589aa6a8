#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "genemask/pmi.hpp"
#include "genemask/tokenizer.hpp"

namespace genemask {

enum class Strategy {
    kRandomToken,   // independent per-token masking
    kRandomSpan,    // random nucleotide centers, k-token spans
    kGeneMaskLocal, // random centers, best-NPMI neighbour picks the span
    kGlobalPmi,     // top-NPMI anchors across the whole sequence
};

/// Stable names used on the command line and in plan files:
/// random-token, random-span, genemask, global.
std::string_view strategy_name(Strategy s);
Strategy strategy_from_name(std::string_view name); // throws ConfigError

struct StrategyConfig {
    Strategy strategy = Strategy::kRandomSpan;
    /// Per-token masking budget; strategy-specific rates derive from it.
    double base_mask_rate = 0.15;
    /// GeneMask: candidate anchors within +/- this many nucleotides of a center.
    uint32_t neighborhood = 5;
    /// GeneMask: probability a center consults the NPMI table at all;
    /// otherwise it degrades to a plain random span.
    double local_pmi_fraction = 0.5;
    uint64_t rng_seed = 0;

    void validate() const; // throws ConfigError
};

/// One sequence's worth of masking decisions.
struct MaskPlan {
    Strategy strategy = Strategy::kRandomSpan;
    std::vector<uint32_t> mask_indices;       // sorted, unique token indices
    std::vector<uint32_t> center_nucleotides; // sorted; empty for random-token
    double effective_token_rate = 0.0;        // |mask_indices| / token_count
    double nucleotide_rate = 0.0;             // |centers| / base_len
};

/// Nucleotide-center sampling rates implied by the per-token budget.
double random_span_center_rate(double base_mask_rate, uint32_t k); // rate / k
double genemask_center_rate(double base_mask_rate, uint32_t k);    // 2*rate / (3k-1)

/// How many top-NPMI anchors the global strategy selects:
/// round(token_count * rate / (2k - 1)), i.e. the budget divided by the
/// widest span a single anchor can mask.
size_t global_center_count(size_t token_count, double base_mask_rate, uint32_t k);

MaskPlan mask_random_token(const TokenSequence& tokens, const StrategyConfig& cfg);
MaskPlan mask_random_span(const TokenSequence& tokens, const StrategyConfig& cfg);
MaskPlan mask_genemask_local(const TokenSequence& tokens, const NpmiTable& table,
                             const StrategyConfig& cfg);
MaskPlan mask_global(const TokenSequence& tokens, const NpmiTable& table,
                     const StrategyConfig& cfg);

/// Dispatch on cfg.strategy. `table` may be null for the two random
/// strategies; the PMI-guided ones throw ConfigError without it.
MaskPlan make_mask_plan(const TokenSequence& tokens, const NpmiTable* table,
                        const StrategyConfig& cfg);

/// One JSONL record for a plan file (no trailing newline). `stage` tags
/// which curriculum stage produced the plan ("-" outside a curriculum).
std::string plan_record_json(std::string_view seq_id, std::string_view stage,
                             const MaskPlan& plan);

} // namespace genemask
