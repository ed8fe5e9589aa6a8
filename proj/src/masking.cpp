#include "genemask/masking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "genemask/errors.hpp"
#include "genemask/kmer.hpp"
#include "genemask/rng.hpp"

namespace genemask {

namespace {

// Independent RNG substreams per plan: center selection must consume the
// same draws in every center-driven strategy (so aligned configurations
// produce aligned centers), while branch decisions come from their own
// stream and cannot shift the centers.
constexpr uint64_t kTokenSalt = 0x746f6b656e6d736bULL;  // "tokenmsk"
constexpr uint64_t kCenterSalt = 0x63656e7465727331ULL; // "centers1"
constexpr uint64_t kBranchSalt = 0x6272616e63686573ULL; // "branches"

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Accumulates a set of token indices as a bitmap; spans union naturally.
class MaskSet {
public:
    explicit MaskSet(size_t token_count) : bits_(token_count, 0) {}

    void set(size_t i) {
        if (!bits_[i]) {
            bits_[i] = 1;
            ++count_;
        }
    }
    void set_range(TokenRange r) {
        for (size_t j = r.begin; j < r.end; ++j) set(j);
    }
    size_t count() const { return count_; }

    std::vector<uint32_t> sorted_indices() const {
        std::vector<uint32_t> out;
        out.reserve(count_);
        for (size_t j = 0; j < bits_.size(); ++j)
            if (bits_[j]) out.push_back(static_cast<uint32_t>(j));
        return out;
    }

private:
    std::vector<char> bits_;
    size_t count_ = 0;
};

MaskPlan finish_plan(Strategy strategy, const TokenSequence& tokens,
                     const MaskSet& set, std::vector<uint32_t> centers) {
    MaskPlan plan;
    plan.strategy = strategy;
    plan.mask_indices = set.sorted_indices();
    std::sort(centers.begin(), centers.end());
    plan.center_nucleotides = std::move(centers);
    plan.effective_token_rate =
        static_cast<double>(set.count()) / static_cast<double>(tokens.token_count());
    plan.nucleotide_rate = static_cast<double>(plan.center_nucleotides.size()) /
                           static_cast<double>(tokens.base_len);
    return plan;
}

void require_tokens(const TokenSequence& tokens, size_t min_count) {
    if (tokens.token_count() < min_count)
        throw SequenceTooShort("sequence has " + std::to_string(tokens.token_count()) +
                               " tokens, need at least " + std::to_string(min_count));
}

void require_same_k(const TokenSequence& tokens, const NpmiTable& table) {
    if (tokens.k != table.k())
        throw TableMismatch("token k=" + std::to_string(tokens.k) +
                            " but NPMI table k=" + std::to_string(table.k()));
}

/// Draw nucleotide centers left to right at the given per-base rate.
std::vector<uint32_t> draw_centers(Rng& rng, uint32_t base_len, double rate) {
    std::vector<uint32_t> centers;
    for (uint32_t i = 0; i < base_len; ++i)
        if (rng.bernoulli(rate)) centers.push_back(i);
    return centers;
}

} // namespace

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::kRandomToken: return "random-token";
        case Strategy::kRandomSpan: return "random-span";
        case Strategy::kGeneMaskLocal: return "genemask";
        case Strategy::kGlobalPmi: return "global";
    }
    throw ConfigError("unknown strategy tag");
}

Strategy strategy_from_name(std::string_view name) {
    if (name == "random-token") return Strategy::kRandomToken;
    if (name == "random-span") return Strategy::kRandomSpan;
    if (name == "genemask") return Strategy::kGeneMaskLocal;
    if (name == "global") return Strategy::kGlobalPmi;
    throw ConfigError("unknown strategy '" + std::string(name) +
                      "' (expected random-token, random-span, genemask or global)");
}

void StrategyConfig::validate() const {
    if (!(base_mask_rate > 0.0) || base_mask_rate > 0.5)
        throw ConfigError("base_mask_rate must be in (0, 0.5]");
    if (neighborhood < 1) throw ConfigError("neighborhood must be >= 1");
    if (local_pmi_fraction < 0.0 || local_pmi_fraction > 1.0)
        throw ConfigError("local_pmi_fraction must be in [0, 1]");
}

double random_span_center_rate(double base_mask_rate, uint32_t k) {
    return base_mask_rate / static_cast<double>(k);
}

double genemask_center_rate(double base_mask_rate, uint32_t k) {
    // The budget divided by the mean masked span under the 50/50 mixture of
    // a k-token span and a (2k-1)-token span: (k + 2k-1)/2 = (3k-1)/2.
    return base_mask_rate * 2.0 / static_cast<double>(3 * k - 1);
}

size_t global_center_count(size_t token_count, double base_mask_rate, uint32_t k) {
    const double spans = static_cast<double>(token_count) * base_mask_rate /
                         static_cast<double>(2 * k - 1);
    return static_cast<size_t>(std::llround(spans));
}

MaskPlan mask_random_token(const TokenSequence& tokens, const StrategyConfig& cfg) {
    require_tokens(tokens, 1);
    Rng rng(derive_seed(cfg.rng_seed, kTokenSalt));
    MaskSet set(tokens.token_count());
    for (size_t j = 0; j < tokens.token_count(); ++j)
        if (rng.bernoulli(cfg.base_mask_rate)) set.set(j);
    return finish_plan(Strategy::kRandomToken, tokens, set, {});
}

MaskPlan mask_random_span(const TokenSequence& tokens, const StrategyConfig& cfg) {
    require_tokens(tokens, tokens.k);
    Rng rng(derive_seed(cfg.rng_seed, kCenterSalt));
    const auto centers =
        draw_centers(rng, tokens.base_len, random_span_center_rate(cfg.base_mask_rate, tokens.k));
    MaskSet set(tokens.token_count());
    for (uint32_t c : centers)
        set.set_range(nucleotide_to_token_span(c, tokens.token_count(), tokens.k));
    return finish_plan(Strategy::kRandomSpan, tokens, set, centers);
}

MaskPlan mask_genemask_local(const TokenSequence& tokens, const NpmiTable& table,
                             const StrategyConfig& cfg) {
    require_tokens(tokens, tokens.k);
    require_same_k(tokens, table);

    const uint32_t k = tokens.k;
    const size_t tc = tokens.token_count();
    Rng center_rng(derive_seed(cfg.rng_seed, kCenterSalt));
    Rng branch_rng(derive_seed(cfg.rng_seed, kBranchSalt));

    const auto centers =
        draw_centers(center_rng, tokens.base_len, genemask_center_rate(cfg.base_mask_rate, k));

    MaskSet set(tc);
    for (uint32_t c : centers) {
        if (!branch_rng.bernoulli(cfg.local_pmi_fraction)) {
            set.set_range(nucleotide_to_token_span(c, tc, k));
            continue;
        }
        // Candidate tokens whose anchor lies within +/- neighborhood of the
        // center. Absent k-mers score -inf, i.e. below every table entry;
        // ties prefer the anchor closest to the center, then the leftmost.
        const int64_t center = c;
        const int64_t left = anchor_left(k);
        const int64_t lo = std::max<int64_t>(0, center - cfg.neighborhood - left);
        const int64_t hi =
            std::min<int64_t>(static_cast<int64_t>(tc) - 1, center + cfg.neighborhood - left);
        int64_t best_token = -1;
        double best_score = 0.0;
        int64_t best_dist = 0;
        for (int64_t j = lo; j <= hi; ++j) {
            const double score = table.npmi_or(tokens.token_codes[j], kNegInf);
            const int64_t dist =
                std::llabs(static_cast<int64_t>(token_anchor(j, k)) - center);
            if (best_token < 0 || score > best_score ||
                (score == best_score && dist < best_dist)) {
                best_token = j;
                best_score = score;
                best_dist = dist;
            }
        }
        if (best_token < 0) {
            // Center so close to the edge that no token anchor is in reach.
            set.set_range(nucleotide_to_token_span(c, tc, k));
            continue;
        }
        set.set_range(pmi_token_span(token_anchor(best_token, k), tc, k));
    }
    return finish_plan(Strategy::kGeneMaskLocal, tokens, set, centers);
}

MaskPlan mask_global(const TokenSequence& tokens, const NpmiTable& table,
                     const StrategyConfig& cfg) {
    require_tokens(tokens, 1);
    require_same_k(tokens, table);

    const uint32_t k = tokens.k;
    const size_t tc = tokens.token_count();
    size_t m = global_center_count(tc, cfg.base_mask_rate, k);
    m = std::min(m, tc);

    MaskSet set(tc);
    std::vector<uint32_t> centers;
    if (m > 0) {
        std::vector<double> score(tc);
        for (size_t j = 0; j < tc; ++j)
            score[j] = table.npmi_or(tokens.token_codes[j], kNegInf);

        std::vector<uint32_t> order(tc);
        std::iota(order.begin(), order.end(), 0u);
        // Full sort keeps "top-m" semantics exact; ties go to the leftmost
        // token. Overlapping spans union without re-drawing.
        std::sort(order.begin(), order.end(), [&score](uint32_t a, uint32_t b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });

        centers.reserve(m);
        for (size_t i = 0; i < m; ++i) {
            const uint32_t j = order[i];
            const size_t anchor = token_anchor(j, k);
            set.set_range(pmi_token_span(anchor, tc, k));
            centers.push_back(static_cast<uint32_t>(anchor));
        }
    }
    return finish_plan(Strategy::kGlobalPmi, tokens, set, std::move(centers));
}

MaskPlan make_mask_plan(const TokenSequence& tokens, const NpmiTable* table,
                        const StrategyConfig& cfg) {
    switch (cfg.strategy) {
        case Strategy::kRandomToken: return mask_random_token(tokens, cfg);
        case Strategy::kRandomSpan: return mask_random_span(tokens, cfg);
        case Strategy::kGeneMaskLocal:
            if (!table) throw ConfigError("genemask strategy needs an NPMI table");
            return mask_genemask_local(tokens, *table, cfg);
        case Strategy::kGlobalPmi:
            if (!table) throw ConfigError("global strategy needs an NPMI table");
            return mask_global(tokens, *table, cfg);
    }
    throw ConfigError("unknown strategy tag");
}

std::string plan_record_json(std::string_view seq_id, std::string_view stage,
                             const MaskPlan& plan) {
    nlohmann::ordered_json record;
    record["seq_id"] = seq_id;
    record["strategy"] = strategy_name(plan.strategy);
    record["stage"] = stage;
    record["centers"] = plan.center_nucleotides;
    record["mask_indices"] = plan.mask_indices;
    record["token_rate"] = plan.effective_token_rate;
    return record.dump();
}

} // namespace genemask
