#pragma once

// Independent brute-force reference for the PMI/NPMI statistics. This file
// deliberately shares no code or representation with the library: counting
// walks substrings into string-keyed maps, segmentations are enumerated as
// explicit length compositions, and probabilities are plain divisions. Keep
// it dumb; its value is that it can't share a bug with the fast path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace oracle {

struct Counts {
    int k = 0;
    // by_len[m] maps every length-m substring to its occurrence count.
    std::vector<std::map<std::string, long long>> by_len;
    std::vector<long long> totals;
};

inline Counts count(const std::vector<std::string>& seqs, int k) {
    Counts c;
    c.k = k;
    c.by_len.resize(static_cast<size_t>(k) + 1);
    c.totals.assign(static_cast<size_t>(k) + 1, 0);
    for (const auto& seq : seqs) {
        for (int m = 1; m <= k; ++m) {
            if (seq.size() < static_cast<size_t>(m)) continue;
            for (size_t i = 0; i + m <= seq.size(); ++i)
                ++c.by_len[m][seq.substr(i, static_cast<size_t>(m))];
            c.totals[m] += static_cast<long long>(seq.size()) - m + 1;
        }
    }
    return c;
}

inline long long freq(const Counts& c, const std::string& part) {
    const auto& m = c.by_len[part.size()];
    const auto it = m.find(part);
    return it == m.end() ? 0 : it->second;
}

inline double prob(const Counts& c, const std::string& part) {
    return static_cast<double>(freq(c, part)) /
           static_cast<double>(c.totals[part.size()]);
}

/// All ways to split k into ordered parts >= 1, excluding the single part
/// {k}. For k=6 this yields exactly 31 compositions.
inline std::vector<std::vector<int>> segmentations(int k) {
    std::vector<std::vector<int>> all;
    std::vector<int> parts;
    auto recurse = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            if (parts.size() >= 2) all.push_back(parts);
            return;
        }
        for (int first = 1; first <= remaining; ++first) {
            parts.push_back(first);
            self(self, remaining - first);
            parts.pop_back();
        }
    };
    recurse(recurse, k);
    return all;
}

inline double pmi(const Counts& c, const std::string& w) {
    if (freq(c, w) == 0) return -std::numeric_limits<double>::infinity();
    const double pw = prob(c, w);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : segmentations(c.k)) {
        double denom = 1.0;
        bool unseen = false;
        size_t at = 0;
        for (int len : seg) {
            const std::string part = w.substr(at, static_cast<size_t>(len));
            if (freq(c, part) == 0) {
                unseen = true;
                break;
            }
            denom *= prob(c, part);
            at += static_cast<size_t>(len);
        }
        if (unseen) continue; // probability-zero denominator: ratio is +inf
        best = std::min(best, std::log(pw / denom));
    }
    return best;
}

inline double npmi(const Counts& c, const std::string& w, long long cutoff) {
    const long long f = freq(c, w);
    const double factor =
        f == cutoff ? 0.5
                    : std::log(static_cast<double>(f)) /
                          (std::log(static_cast<double>(cutoff)) +
                           std::log(static_cast<double>(f)));
    return pmi(c, w) * factor;
}

struct Entry {
    std::string kmer;
    long long f = 0;
    double pmi = 0.0;
    double npmi = 0.0;
    int rank = 0;
};

/// Every k-mer over {A,C,G,T} with f >= cutoff, ranked by npmi descending,
/// ties broken by the k-mer string.
inline std::vector<Entry> table(const std::vector<std::string>& seqs, int k,
                                long long cutoff) {
    const Counts c = count(seqs, k);
    std::vector<Entry> entries;
    std::string kmer(static_cast<size_t>(k), 'A');
    auto enumerate = [&](auto&& self, int pos) -> void {
        if (pos == k) {
            const long long f = freq(c, kmer);
            if (f >= cutoff)
                entries.push_back({kmer, f, pmi(c, kmer), npmi(c, kmer, cutoff), 0});
            return;
        }
        for (char base : {'A', 'C', 'G', 'T'}) {
            kmer[static_cast<size_t>(pos)] = base;
            self(self, pos + 1);
        }
    };
    enumerate(enumerate, 0);
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.npmi != b.npmi) return a.npmi > b.npmi;
        return a.kmer < b.kmer;
    });
    for (size_t i = 0; i < entries.size(); ++i)
        entries[i].rank = static_cast<int>(i) + 1;
    return entries;
}

} // namespace oracle
