#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "genemask/masking.hpp"
#include "genemask/tokenizer.hpp"

namespace genemask {

struct NgramConfig {
    /// Flanking tokens per side in the widest context (1 or 2).
    uint32_t order = 2;
    /// Add-alpha smoothing constant.
    double alpha = 0.1;
    /// Token k-mer width; fixes vocab_size = 4^k.
    uint32_t k = 6;

    void validate() const; // throws ConfigError
};

struct EvalReport {
    double perplexity = 0.0; // exp(mean NLL over masked positions)
    double accuracy = 0.0;   // top-1
    uint64_t n_masked = 0;
};

/// Back-off n-gram masked-token predictor over k-mer token codes. Counts
/// condition the center token on flanking context shapes, widest first
/// ({-2,-1,+1,+2} down to the empty context = unigram). A flank only counts
/// as context when it is in range AND not itself masked, which is exactly
/// the information-leakage bookkeeping span masking is about. Stands in for
/// a trained MLM: supplies perplexity to the curriculum controller and
/// measures per-strategy prediction difficulty.
class NgramModel {
public:
    explicit NgramModel(NgramConfig cfg = {});

    /// Counts are additive, so fitting is one pass; throws EmptyCorpus.
    static NgramModel fit(std::span<const TokenSequence> corpus, const NgramConfig& cfg);
    void add_sequence(const TokenSequence& tokens);

    const NgramConfig& config() const { return cfg_; }
    uint64_t vocab_size() const { return vocab_; }

    struct Prediction {
        double log_prob = 0.0; // log P(true token | context)
        uint32_t argmax = 0;   // most likely token under the same context
        int backoff_level = -1; // shape index used; -1 = uniform fallback
    };

    /// Predict position `pos` of `tokens`; positions with masked[i] true are
    /// invisible as context. Backs off to the widest fully-available, seen
    /// context; an unfitted model falls back to uniform 1/4^k.
    Prediction predict(const TokenSequence& tokens, const std::vector<char>& masked,
                       size_t pos) const;

    /// Full predictive distribution (4^k entries, sums to 1); test support.
    std::vector<double> predictive_distribution(const TokenSequence& tokens,
                                                const std::vector<char>& masked,
                                                size_t pos) const;

    /// Score every masked position of the plan. Throws EmptyPlan on a plan
    /// with no indices, IndexOutOfRange on indices past the sequence.
    EvalReport evaluate_masked(const TokenSequence& tokens, const MaskPlan& plan) const;

    /// TSV: `# ngram v1 k=.. order=.. alpha=..` then
    /// `<ctx_hi>\t<ctx_lo>\t<token>\t<count>` rows (hex context key halves),
    /// sorted; save/load round-trips exactly.
    void save(std::ostream& out) const;
    static NgramModel load(std::istream& in);
    static NgramModel load_file(const std::string& path);

private:
    /// 128-bit packed (shape id, context codes...) key; with order <= 2 and
    /// k <= 12 the widest key (shape + 4 context codes + center) is exactly
    /// 8 + 5*24 = 128 bits.
    struct Key {
        uint64_t hi = 0;
        uint64_t lo = 0;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        size_t operator()(const Key& key) const;
    };
    struct ContextStats {
        uint64_t total = 0;
        uint64_t max_count = 0; // of the argmax token
        uint32_t argmax = 0;    // smallest code among the most frequent
    };

    NgramConfig cfg_;
    uint64_t vocab_ = 0;
    std::vector<std::vector<int>> shapes_; // widest first, ends with {}
    std::unordered_map<Key, uint64_t, KeyHash> counts_;     // (ctx, center) -> n
    std::unordered_map<Key, ContextStats, KeyHash> contexts_;

    static Key push(Key key, uint64_t value, unsigned bits);
    void bump(const Key& ctx, uint32_t center, uint64_t n);
    bool gather(const TokenSequence& tokens, const std::vector<char>* masked,
                size_t pos, const std::vector<int>& shape, Key& ctx) const;
};

} // namespace genemask
