#include "genemask/tokenizer.hpp"

#include <algorithm>
#include <ostream>

#include "genemask/errors.hpp"
#include "genemask/kmer.hpp"

namespace genemask {

void TokenizerConfig::validate() const {
    if (k < 1 || k > kMaxK)
        throw ConfigError("k must be in [1, " + std::to_string(kMaxK) + "]");
    if (max_tokens < k) throw ConfigError("max_tokens must be >= k");
}

std::string TokenSequence::token_string(size_t i) const {
    return decode_kmer(token_codes.at(i), k);
}

TokenSequence tokenize(std::string_view bases, const TokenizerConfig& cfg) {
    cfg.validate();
    if (bases.size() < cfg.k)
        throw SequenceTooShort("sequence of " + std::to_string(bases.size()) +
                               " bases is shorter than k=" + std::to_string(cfg.k));

    TokenSequence ts;
    ts.k = cfg.k;
    ts.base_len = static_cast<uint32_t>(bases.size());
    ts.token_codes.reserve(bases.size() - cfg.k + 1);

    const uint32_t mask = static_cast<uint32_t>(kmer_space(cfg.k) - 1);
    uint32_t code = 0;
    for (size_t i = 0; i < bases.size(); ++i) {
        const int b = base_code(bases[i]);
        if (b < 0) throw UnknownKmer("non-ACGT base in sequence at position " + std::to_string(i));
        code = ((code << 2) | static_cast<uint32_t>(b)) & mask;
        if (i + 1 >= cfg.k) ts.token_codes.push_back(code);
    }
    return ts;
}

TokenSequence tokenize(const NucleotideSequence& seq, const TokenizerConfig& cfg) {
    return tokenize(std::string_view(seq.bases), cfg);
}

namespace {

TokenRange clamped_span(int64_t lo, int64_t hi, size_t token_count) {
    const int64_t last = static_cast<int64_t>(token_count) - 1;
    lo = std::clamp<int64_t>(lo, 0, last);
    hi = std::clamp<int64_t>(hi, 0, last);
    return {static_cast<size_t>(lo), static_cast<size_t>(hi) + 1};
}

void check_position(size_t i, size_t token_count, uint32_t k) {
    if (token_count == 0) throw IndexOutOfRange("empty token sequence");
    const size_t base_len = token_count + k - 1;
    if (i >= base_len)
        throw IndexOutOfRange("nucleotide index " + std::to_string(i) +
                              " out of range for base length " + std::to_string(base_len));
}

} // namespace

TokenRange nucleotide_to_token_span(size_t i, size_t token_count, uint32_t k) {
    check_position(i, token_count, k);
    const int64_t pos = static_cast<int64_t>(i);
    return clamped_span(pos - anchor_left(k), pos + anchor_right(k), token_count);
}

TokenRange pmi_token_span(size_t center, size_t token_count, uint32_t k) {
    check_position(center, token_count, k);
    const int64_t pos = static_cast<int64_t>(center);
    return clamped_span(pos - 2 * static_cast<int64_t>(anchor_left(k)),
                        pos + 2 * static_cast<int64_t>(anchor_right(k)), token_count);
}

void write_vocabulary(std::ostream& out, uint32_t k) {
    TokenizerConfig cfg;
    cfg.k = k;
    cfg.validate();
    for (const char* special : {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"})
        out << special << '\n';
    const uint64_t n = kmer_space(k);
    for (uint64_t code = 0; code < n; ++code) out << decode_kmer(code, k) << '\n';
}

} // namespace genemask
