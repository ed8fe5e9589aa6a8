#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genemask/corpus.hpp"

namespace genemask {

/// Exact occurrence counts of every m-mer, m = 1..k, over a corpus.
/// Counts are dense arrays indexed by the 2-bit packed m-mer (4^m slots),
/// so k is capped at 12. Windows overlap: a sequence of length L contributes
/// max(0, L - m + 1) windows at width m.
class CountTable {
public:
    explicit CountTable(uint32_t k);

    uint32_t k() const { return k_; }
    uint64_t count(uint32_t m, uint64_t code) const;
    uint64_t total(uint32_t m) const;
    /// log(count/total); -inf when the m-mer was never seen.
    double log_probability(uint32_t m, uint64_t code) const;

    void add_sequence(std::string_view bases);
    /// Shard merge: elementwise addition. Throws TableMismatch if k differs.
    void merge(const CountTable& other);

private:
    uint32_t k_;
    std::vector<std::vector<uint64_t>> counts_; // [m-1] -> 4^m slots
    std::vector<uint64_t> totals_;              // [m-1]
};

/// Count all m-mers (m = 1..k) of the corpus. `workers` > 1 counts
/// contiguous shards in parallel and merges them; the result is exactly
/// equal to single-worker counting. Throws EmptyCorpus.
CountTable count_mmers(std::span<const NucleotideSequence> corpus, uint32_t k,
                       unsigned workers = 1);

/// Pointwise mutual information of a k-mer: the minimum over all proper
/// contiguous segmentations (2^(k-1) - 1 of them) of
/// log [ p(w) / prod_{s in seg} p(s) ], natural log, with p the
/// maximum-likelihood window frequency at each width. Returns -inf if the
/// k-mer was never observed. A segmentation with an unseen part is skipped
/// rather than poisoning the minimum.
double pmi_score(std::string_view w, const CountTable& table);
double pmi_score_code(uint64_t code, const CountTable& table);

/// NPMI_k = PMI_k * log f / (log c + log f), down-weighting rare k-mers.
/// Throws BelowCutoff when f(w) < min_count.
double npmi_score(std::string_view w, const CountTable& table, uint64_t min_count);
double npmi_score_code(uint64_t code, const CountTable& table, uint64_t min_count);

struct NpmiEntry {
    std::string kmer;
    uint64_t freq = 0;
    double pmi = 0.0;
    double npmi = 0.0;
    uint32_t rank = 0; // 1-based, npmi descending, ties broken lexicographically
};

/// FNV-1a over the sequences' bases (newline-separated); identifies the
/// corpus a table was built from.
uint64_t corpus_digest64(std::span<const NucleotideSequence> corpus);
std::string digest_hex(uint64_t digest);

/// Ranked NPMI scores for every k-mer at or above the frequency cutoff.
class NpmiTable {
public:
    NpmiTable() = default;

    static NpmiTable build(std::span<const NucleotideSequence> corpus, uint32_t k,
                           uint64_t min_count, unsigned workers = 1);

    uint32_t k() const { return k_; }
    uint64_t min_count() const { return min_count_; }
    const std::string& corpus_digest() const { return corpus_digest_; }
    const std::vector<NpmiEntry>& entries() const { return entries_; }

    bool contains(uint64_t code) const;
    /// NPMI of a packed k-mer; `fallback` (typically -inf) for k-mers that
    /// did not make the cutoff — they rank below every table entry.
    double npmi_or(uint64_t code, double fallback) const;

    /// TSV: `# k=<k> c=<c> corpus=<digest>` then `kmer\tf\tpmi\tnpmi\trank`
    /// rows sorted by rank. Floats are printed with 17 significant digits,
    /// so save/load round-trips exactly.
    void save(std::ostream& out) const;
    static NpmiTable load(std::istream& in);
    static NpmiTable load_file(const std::string& path);

private:
    uint32_t k_ = 0;
    uint64_t min_count_ = 0;
    std::string corpus_digest_;
    std::vector<NpmiEntry> entries_;
    std::vector<double> npmi_by_code_; // 4^k, NaN for absent

    void rebuild_lookup();
};

} // namespace genemask
