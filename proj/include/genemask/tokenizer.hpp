#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "genemask/corpus.hpp"

namespace genemask {

struct TokenizerConfig {
    uint32_t k = 6;           // k-mer window length in bases
    uint32_t max_tokens = 512; // model input budget (510 sequence tokens + CLS/SEP)

    void validate() const; // throws ConfigError (1 <= k <= 12, max_tokens >= k)
};

/// Overlapping k-mer view of a nucleotide sequence: token j covers bases
/// [j, j+k-1] (stride 1), so token_count = base_len - k + 1. Tokens are kept
/// 2-bit packed; token_string() rebuilds the text form.
struct TokenSequence {
    std::vector<uint32_t> token_codes;
    uint32_t k = 6;
    uint32_t base_len = 0;

    size_t token_count() const { return token_codes.size(); }
    std::string token_string(size_t i) const;
};

/// Throws SequenceTooShort if the sequence has fewer than k bases.
TokenSequence tokenize(std::string_view bases, const TokenizerConfig& cfg);
TokenSequence tokenize(const NucleotideSequence& seq, const TokenizerConfig& cfg);

/// Half-open token index range [begin, end).
struct TokenRange {
    size_t begin = 0;
    size_t end = 0;

    size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
    bool contains(size_t i) const { return i >= begin && i < end; }
};

/// A token is anchored at its 3rd base for k=6 (generalized: ceil(k/2)-1
/// bases to the left of the anchor). Span arithmetic below works in
/// anchor-relative coordinates, matching the masking rate bookkeeping.
constexpr uint32_t anchor_left(uint32_t k) { return (k + 1) / 2 - 1; }
constexpr uint32_t anchor_right(uint32_t k) { return k - 1 - anchor_left(k); }

/// Anchor base position of stored token j.
constexpr size_t token_anchor(size_t j, uint32_t k) { return j + anchor_left(k); }

/// Token indices to mask so nucleotide i cannot be predicted trivially:
/// [i - anchor_left, i + anchor_right], clamped into [0, token_count).
/// Exactly k indices away from the sequence edges.
/// Throws IndexOutOfRange unless 0 <= i < token_count + k - 1 and token_count >= 1.
TokenRange nucleotide_to_token_span(size_t i, size_t token_count, uint32_t k);

/// Token indices to mask so the whole k-mer anchored at `center` is hidden:
/// the union of nucleotide_to_token_span over its k bases, i.e.
/// [center - 2*anchor_left, center + 2*anchor_right] clamped. Exactly 2k-1
/// indices (11 for k=6) away from the edges.
TokenRange pmi_token_span(size_t center, size_t token_count, uint32_t k);

/// Vocabulary file: specials first, then all 4^k k-mers in lexicographic
/// order. IDs are stable: [PAD]=0, [UNK]=1, [CLS]=2, [SEP]=3, [MASK]=4,
/// k-mers from 5 upward.
void write_vocabulary(std::ostream& out, uint32_t k);

} // namespace genemask
