#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "genemask/masking.hpp"

namespace genemask {

enum class Stage { kEasy, kHard };

std::string_view stage_name(Stage s); // "EASY" / "HARD"

/// Nucleotide-level mask-center rates tied to each stage: the easy stage
/// masks at the local-PMI rate, the hard stage at the budget spread over
/// full-width (2k-1)-token spans, 0.15/11 at defaults.
constexpr double kEasyMlmProbability = 0.01765;
constexpr double kHardMlmProbability = 0.0136;

struct CurriculumConfig {
    /// Minimum drop between consecutive perplexity observations required to
    /// stay in the easy stage.
    double threshold = 1.0;
    /// Observations averaged before computing the drop; 1 = raw rule.
    uint32_t smoothing_window = 1;

    void validate() const; // throws ConfigError
};

struct PplObservation {
    uint64_t step = 0;
    double perplexity = 0.0;
};

/// Perplexity-gated two-stage schedule: start easy (local PMI masking),
/// switch to hard (global PMI masking) the first time the perplexity
/// improvement stalls. The gate is one-way; later observations are recorded
/// but change nothing.
class CurriculumController {
public:
    CurriculumController() : CurriculumController(CurriculumConfig{}) {}
    explicit CurriculumController(CurriculumConfig cfg);

    Stage stage() const { return stage_; }
    double mlm_probability() const {
        return stage_ == Stage::kEasy ? kEasyMlmProbability : kHardMlmProbability;
    }
    Strategy select() const {
        return stage_ == Stage::kEasy ? Strategy::kGeneMaskLocal : Strategy::kGlobalPmi;
    }

    /// Record a perplexity measurement. Steps must be strictly increasing
    /// (NonMonotonicStep) and perplexity positive (ConfigError). The first
    /// observation can never trigger the switch.
    void observe(uint64_t step, double perplexity);

    const std::vector<PplObservation>& history() const { return history_; }
    /// Step at which the stage flipped, if it has.
    std::optional<uint64_t> transition_step() const { return transition_step_; }

private:
    CurriculumConfig cfg_;
    Stage stage_ = Stage::kEasy;
    std::vector<PplObservation> history_;
    std::optional<uint64_t> transition_step_;

    double smoothed_at(size_t index) const;
};

constexpr uint32_t kCmStepBlocks = 100;

/// Step-indexed binomial mixture: pretraining is divided into 100 equal
/// blocks and the probability of picking the hard (global PMI) strategy
/// rises linearly from 0 to 0.99 across them; the rest of the draws use
/// plain random spans. Selection is a pure function of (rng_seed, step).
struct CmStepSchedule {
    uint64_t max_steps = 0;
    uint64_t rng_seed = 0;

    uint32_t block_of(uint64_t step) const;          // floor(step*100/max_steps)
    double global_probability(uint64_t step) const;  // block/100
    Strategy select(uint64_t step) const;            // kGlobalPmi or kRandomSpan

private:
    void check_step(uint64_t step) const; // ConfigError / StepOutOfRange
};

} // namespace genemask
