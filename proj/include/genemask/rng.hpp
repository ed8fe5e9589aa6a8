#pragma once

#include <cstdint>
#include <random>

namespace genemask {

/// SplitMix64 mixer; used for seed derivation and content hashing salts.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from (base seed, salt). Used to give
/// each record / step / purpose its own reproducible stream, so output is
/// invariant under processing order and parallel scheduling.
constexpr uint64_t derive_seed(uint64_t base, uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

/// Deterministic RNG. The engine is mt19937_64 (sequence pinned by the
/// standard); all distributions are hand-rolled here so draws are
/// bit-reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// p=0 never fires, p>=1 always fires.
    bool bernoulli(double p) { return uniform01() < p; }

    /// Unbiased uniform integer in [0, n). n must be >= 1.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    uint64_t uniform_int(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

private:
    std::mt19937_64 eng_;
};

} // namespace genemask
