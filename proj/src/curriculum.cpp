#include "genemask/curriculum.hpp"

#include <cmath>
#include <string>

#include "genemask/errors.hpp"
#include "genemask/rng.hpp"

namespace genemask {

namespace {
constexpr uint64_t kCmStepSalt = 0x636d737465703031ULL; // "cmstep01"
} // namespace

std::string_view stage_name(Stage s) {
    return s == Stage::kEasy ? "EASY" : "HARD";
}

void CurriculumConfig::validate() const {
    if (!std::isfinite(threshold))
        throw ConfigError("curriculum threshold must be finite");
    if (smoothing_window < 1)
        throw ConfigError("smoothing window must be >= 1");
}

CurriculumController::CurriculumController(CurriculumConfig cfg) : cfg_(cfg) {
    cfg_.validate();
}

double CurriculumController::smoothed_at(size_t index) const {
    // Mean of up to `smoothing_window` observations ending at `index`;
    // window 1 degenerates to the raw value.
    const size_t window = cfg_.smoothing_window;
    const size_t begin = index + 1 >= window ? index + 1 - window : 0;
    double sum = 0.0;
    for (size_t i = begin; i <= index; ++i) sum += history_[i].perplexity;
    return sum / static_cast<double>(index - begin + 1);
}

void CurriculumController::observe(uint64_t step, double perplexity) {
    if (!(perplexity > 0.0) || !std::isfinite(perplexity))
        throw ConfigError("perplexity must be a positive finite value");
    if (!history_.empty() && step <= history_.back().step)
        throw NonMonotonicStep("observation step " + std::to_string(step) +
                               " does not increase past " +
                               std::to_string(history_.back().step));
    history_.push_back({step, perplexity});

    // The gate is evaluated only while easy, needs a previous observation,
    // and flips at the first stalled drop (including negative drops).
    if (stage_ != Stage::kEasy || history_.size() < 2) return;
    const double previous = smoothed_at(history_.size() - 2);
    const double current = smoothed_at(history_.size() - 1);
    if (previous - current < cfg_.threshold) {
        stage_ = Stage::kHard;
        transition_step_ = step;
    }
}

void CmStepSchedule::check_step(uint64_t step) const {
    if (max_steps == 0) throw ConfigError("max_steps must be >= 1");
    if (step >= max_steps)
        throw StepOutOfRange("step " + std::to_string(step) + " outside [0, " +
                             std::to_string(max_steps) + ")");
}

uint32_t CmStepSchedule::block_of(uint64_t step) const {
    check_step(step);
    const auto wide = static_cast<unsigned __int128>(step) * kCmStepBlocks;
    return static_cast<uint32_t>(wide / max_steps); // < kCmStepBlocks since step < max_steps
}

double CmStepSchedule::global_probability(uint64_t step) const {
    return static_cast<double>(block_of(step)) / kCmStepBlocks;
}

Strategy CmStepSchedule::select(uint64_t step) const {
    const double p = global_probability(step);
    Rng rng(derive_seed(derive_seed(rng_seed, kCmStepSalt), step));
    return rng.bernoulli(p) ? Strategy::kGlobalPmi : Strategy::kRandomSpan;
}

} // namespace genemask
