#include "genemask/pmi.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "genemask/errors.hpp"
#include "genemask/kmer.hpp"

namespace genemask {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_width(uint32_t m, uint32_t k) {
    if (m < 1 || m > k)
        throw IndexOutOfRange("m-mer width " + std::to_string(m) +
                              " outside [1, " + std::to_string(k) + "]");
}

} // namespace

CountTable::CountTable(uint32_t k) : k_(k) {
    if (k < 1 || k > kMaxK)
        throw ConfigError("k must be in [1, " + std::to_string(kMaxK) + "], got " +
                          std::to_string(k));
    counts_.resize(k);
    totals_.assign(k, 0);
    for (uint32_t m = 1; m <= k; ++m)
        counts_[m - 1].assign(kmer_space(m), 0);
}

uint64_t CountTable::count(uint32_t m, uint64_t code) const {
    check_width(m, k_);
    if (code >= kmer_space(m))
        throw IndexOutOfRange("m-mer code out of range");
    return counts_[m - 1][code];
}

uint64_t CountTable::total(uint32_t m) const {
    check_width(m, k_);
    return totals_[m - 1];
}

double CountTable::log_probability(uint32_t m, uint64_t code) const {
    const uint64_t c = count(m, code);
    const uint64_t t = totals_[m - 1];
    if (c == 0 || t == 0) return kNegInf;
    return std::log(static_cast<double>(c) / static_cast<double>(t));
}

void CountTable::add_sequence(std::string_view bases) {
    // One rolling window per width; windows that would cross the end are
    // simply never completed, so short sequences contribute what they can.
    for (uint32_t m = 1; m <= k_; ++m) {
        if (bases.size() < m) break; // widths only grow
        const uint64_t mask = kmer_space(m) - 1;
        auto& slots = counts_[m - 1];
        uint64_t code = 0;
        for (size_t i = 0; i < bases.size(); ++i) {
            code = ((code << 2) | base_code(bases[i])) & mask;
            if (i + 1 >= m) ++slots[code];
        }
        totals_[m - 1] += bases.size() - m + 1;
    }
}

void CountTable::merge(const CountTable& other) {
    if (other.k_ != k_)
        throw TableMismatch("cannot merge count tables with k=" + std::to_string(k_) +
                            " and k=" + std::to_string(other.k_));
    for (uint32_t m = 1; m <= k_; ++m) {
        auto& dst = counts_[m - 1];
        const auto& src = other.counts_[m - 1];
        for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        totals_[m - 1] += other.totals_[m - 1];
    }
}

CountTable count_mmers(std::span<const NucleotideSequence> corpus, uint32_t k,
                       unsigned workers) {
    if (corpus.empty()) throw EmptyCorpus("count_mmers: empty corpus");
    if (workers < 1) workers = 1;
    workers = static_cast<unsigned>(
        std::min<size_t>(workers, corpus.size()));

    if (workers == 1) {
        CountTable table(k);
        for (const auto& seq : corpus) table.add_sequence(seq.bases);
        return table;
    }

    // Contiguous shards, merged in shard order. Counts are integers, so the
    // merged table is byte-identical to the single-worker one.
    std::vector<CountTable> shards;
    shards.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) shards.emplace_back(k);

    std::vector<std::thread> threads;
    threads.reserve(workers);
    const size_t n = corpus.size();
    for (unsigned w = 0; w < workers; ++w) {
        const size_t begin = n * w / workers;
        const size_t end = n * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
            for (size_t i = begin; i < end; ++i)
                shards[w].add_sequence(corpus[i].bases);
        });
    }
    for (auto& t : threads) t.join();

    CountTable table = std::move(shards.front());
    for (unsigned w = 1; w < workers; ++w) table.merge(shards[w]);
    return table;
}

double pmi_score_code(uint64_t code, const CountTable& table) {
    const uint32_t k = table.k();
    if (k < 2) throw ConfigError("PMI needs k >= 2");
    const double log_pw = table.log_probability(k, code);
    if (log_pw == kNegInf) return kNegInf;

    // Bit b of `cuts` set == a boundary after position b. Every nonzero
    // mask is one proper segmentation; 2^(k-1) - 1 in total.
    double best = std::numeric_limits<double>::infinity();
    const uint32_t all_cuts = (1u << (k - 1));
    for (uint32_t cuts = 1; cuts < all_cuts; ++cuts) {
        double log_parts = 0.0;
        bool unseen_part = false;
        uint32_t start = 0;
        for (uint32_t pos = 1; pos <= k; ++pos) {
            const bool boundary = pos == k || ((cuts >> (pos - 1)) & 1u);
            if (!boundary) continue;
            const uint32_t len = pos - start;
            const uint64_t part = (code >> (2 * (k - pos))) & (kmer_space(len) - 1);
            const double lp = table.log_probability(len, part);
            if (lp == kNegInf) {
                unseen_part = true;
                break;
            }
            log_parts += lp;
            start = pos;
        }
        if (unseen_part) continue;
        best = std::min(best, log_pw - log_parts);
    }
    // Every 1-mer of an observed k-mer was observed, so the full split
    // always survives and `best` is finite here.
    assert(std::isfinite(best));
    return best;
}

double pmi_score(std::string_view w, const CountTable& table) {
    if (w.size() != table.k())
        throw UnknownKmer("pmi_score: word length " + std::to_string(w.size()) +
                          " != table k " + std::to_string(table.k()));
    return pmi_score_code(encode_kmer(w), table);
}

double npmi_score_code(uint64_t code, const CountTable& table, uint64_t min_count) {
    if (min_count < 1) throw ConfigError("frequency cutoff must be >= 1");
    const uint64_t f = table.count(table.k(), code);
    if (f < min_count)
        throw BelowCutoff("k-mer frequency " + std::to_string(f) +
                          " below cutoff " + std::to_string(min_count));
    // f == c gives log f / (2 log f); written as 1/2 directly so that
    // c = f = 1 (log 0/0) is well-defined too.
    const double factor =
        f == min_count
            ? 0.5
            : std::log(static_cast<double>(f)) /
                  (std::log(static_cast<double>(min_count)) +
                   std::log(static_cast<double>(f)));
    return pmi_score_code(code, table) * factor;
}

double npmi_score(std::string_view w, const CountTable& table, uint64_t min_count) {
    if (w.size() != table.k())
        throw UnknownKmer("npmi_score: word length " + std::to_string(w.size()) +
                          " != table k " + std::to_string(table.k()));
    return npmi_score_code(encode_kmer(w), table, min_count);
}

uint64_t corpus_digest64(std::span<const NucleotideSequence> corpus) {
    // FNV-1a 64-bit over bases, newline-terminated per sequence.
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    };
    for (const auto& seq : corpus) {
        for (char c : seq.bases) mix(c);
        mix('\n');
    }
    return h;
}

std::string digest_hex(uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(digest));
    return std::string(buf, 16);
}

NpmiTable NpmiTable::build(std::span<const NucleotideSequence> corpus, uint32_t k,
                           uint64_t min_count, unsigned workers) {
    if (k < 2 || k > kMaxK)
        throw ConfigError("NPMI table needs k in [2, " + std::to_string(kMaxK) + "]");
    if (min_count < 1) throw ConfigError("frequency cutoff must be >= 1");

    const CountTable counts = count_mmers(corpus, k, workers);

    struct Scored {
        uint64_t code;
        uint64_t freq;
        double pmi;
        double npmi;
    };
    std::vector<Scored> scored;
    for (uint64_t code = 0; code < kmer_space(k); ++code) {
        const uint64_t f = counts.count(k, code);
        if (f < min_count) continue;
        const double pmi = pmi_score_code(code, counts);
        scored.push_back({code, f, pmi, npmi_score_code(code, counts, min_count)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.npmi != b.npmi) return a.npmi > b.npmi;
        return a.code < b.code; // packed order == lexicographic order
    });

    NpmiTable table;
    table.k_ = k;
    table.min_count_ = min_count;
    table.corpus_digest_ = digest_hex(corpus_digest64(corpus));
    table.entries_.reserve(scored.size());
    for (size_t i = 0; i < scored.size(); ++i) {
        const auto& s = scored[i];
        table.entries_.push_back({decode_kmer(s.code, k), s.freq, s.pmi, s.npmi,
                                  static_cast<uint32_t>(i + 1)});
    }
    table.rebuild_lookup();
    return table;
}

void NpmiTable::rebuild_lookup() {
    npmi_by_code_.assign(kmer_space(k_),
                         std::numeric_limits<double>::quiet_NaN());
    for (const auto& e : entries_) npmi_by_code_[encode_kmer(e.kmer)] = e.npmi;
}

bool NpmiTable::contains(uint64_t code) const {
    return code < npmi_by_code_.size() && !std::isnan(npmi_by_code_[code]);
}

double NpmiTable::npmi_or(uint64_t code, double fallback) const {
    if (code >= npmi_by_code_.size()) throw IndexOutOfRange("k-mer code out of range");
    const double v = npmi_by_code_[code];
    return std::isnan(v) ? fallback : v;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

uint64_t parse_u64(std::string_view text, const char* what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw TableMismatch(std::string("bad ") + what + " field: '" +
                            std::string(text) + "'");
    return value;
}

double parse_f64(std::string_view text, const char* what) {
    // strtod accepts "inf"/"nan" spellings, matching what %.17g emits.
    std::string buf(text);
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        throw TableMismatch(std::string("bad ") + what + " field: '" + buf + "'");
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        const size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

} // namespace

void NpmiTable::save(std::ostream& out) const {
    out << "# k=" << k_ << " c=" << min_count_ << " corpus=" << corpus_digest_
        << '\n';
    for (const auto& e : entries_) {
        out << e.kmer << '\t' << e.freq << '\t' << format_double(e.pmi) << '\t'
            << format_double(e.npmi) << '\t' << e.rank << '\n';
    }
    if (!out) throw IoError("failed writing NPMI table");
}

NpmiTable NpmiTable::load(std::istream& in) {
    NpmiTable table;
    bool saw_header = false;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            // The table header is the '# k=... c=... corpus=...' line; any
            // other comment (e.g. a tool config echo) is ignored.
            if (line.rfind("# k=", 0) != 0) continue;
            std::istringstream hdr(line.substr(1));
            std::string field;
            while (hdr >> field) {
                if (field.rfind("k=", 0) == 0)
                    table.k_ = static_cast<uint32_t>(parse_u64(field.substr(2), "k"));
                else if (field.rfind("c=", 0) == 0)
                    table.min_count_ = parse_u64(field.substr(2), "c");
                else if (field.rfind("corpus=", 0) == 0)
                    table.corpus_digest_ = field.substr(7);
            }
            saw_header = true;
            continue;
        }
        if (!saw_header)
            throw TableMismatch("NPMI table missing '# k=... c=... corpus=...' header");
        const auto fields = split_tabs(line);
        if (fields.size() != 5)
            throw TableMismatch("NPMI table line " + std::to_string(lineno) +
                                ": expected 5 tab-separated fields");
        NpmiEntry e;
        e.kmer = std::string(fields[0]);
        if (e.kmer.size() != table.k_)
            throw TableMismatch("NPMI table line " + std::to_string(lineno) +
                                ": k-mer length does not match header k");
        e.freq = parse_u64(fields[1], "frequency");
        e.pmi = parse_f64(fields[2], "pmi");
        e.npmi = parse_f64(fields[3], "npmi");
        e.rank = static_cast<uint32_t>(parse_u64(fields[4], "rank"));
        if (e.rank != table.entries_.size() + 1)
            throw TableMismatch("NPMI table line " + std::to_string(lineno) +
                                ": ranks must be 1..N in order");
        encode_kmer(e.kmer); // validates the alphabet
        table.entries_.push_back(std::move(e));
    }
    if (!saw_header)
        throw TableMismatch("NPMI table missing '# k=... c=... corpus=...' header");
    if (table.k_ < 2 || table.k_ > kMaxK)
        throw TableMismatch("NPMI table header has unusable k");
    table.rebuild_lookup();
    return table;
}

NpmiTable NpmiTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open NPMI table: " + path);
    return load(in);
}

} // namespace genemask
