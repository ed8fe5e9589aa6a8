#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "genemask/errors.hpp"

namespace genemask {

/// 2-bit nucleotide code: A=0, C=1, G=2, T=3 (code order == lexicographic
/// order, so sorting by packed code sorts k-mer strings). -1 for anything else.
constexpr int base_code(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return -1;
    }
}

constexpr bool is_acgt(char c) { return base_code(c) >= 0; }

constexpr char code_base(uint32_t code) {
    constexpr char bases[4] = {'A', 'C', 'G', 'T'};
    return bases[code & 3u];
}

/// Number of distinct m-mers, 4^m. m must be <= 31.
constexpr uint64_t kmer_space(uint32_t m) { return uint64_t{1} << (2 * m); }

/// Largest k-mer width supported by the dense count tables (4^12 = 16.8M slots).
constexpr uint32_t kMaxK = 12;

/// Pack an ACGT string into a 2-bit code, first base in the high bits.
/// Throws UnknownKmer on non-ACGT characters.
inline uint64_t encode_kmer(std::string_view w) {
    uint64_t code = 0;
    for (char c : w) {
        const int b = base_code(c);
        if (b < 0) throw UnknownKmer("non-ACGT character in k-mer: " + std::string(w));
        code = (code << 2) | static_cast<uint64_t>(b);
    }
    return code;
}

inline std::string decode_kmer(uint64_t code, uint32_t m) {
    std::string w(m, 'A');
    for (uint32_t i = 0; i < m; ++i) {
        w[m - 1 - i] = code_base(static_cast<uint32_t>(code & 3u));
        code >>= 2;
    }
    return w;
}

} // namespace genemask
