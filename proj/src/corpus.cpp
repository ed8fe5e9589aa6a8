#include "genemask/corpus.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "genemask/errors.hpp"
#include "genemask/kmer.hpp"
#include "genemask/rng.hpp"

namespace genemask {

void CorpusSpec::validate() const {
    if (half_fixed_fraction < 0.0 || half_fixed_fraction > 1.0)
        throw ConfigError("half_fixed_fraction must be in [0, 1]");
    if (min_random_length == 0)
        throw ConfigError("min_random_length must be >= 1");
    if (min_random_length > max_random_length)
        throw ConfigError("min_random_length must be <= max_random_length");
    if (fixed_length == 0) throw ConfigError("fixed_length must be >= 1");
}

namespace {

constexpr uint64_t kRecordSalt = 0x7265636f72647331ULL;

struct Segment {
    uint64_t offset; // in the source record
    std::string_view bases;
};

// Maximal runs of ACGT within the (already uppercased) record body.
std::vector<Segment> valid_segments(std::string_view bases) {
    std::vector<Segment> segs;
    size_t start = 0;
    bool in_run = false;
    for (size_t i = 0; i < bases.size(); ++i) {
        if (is_acgt(bases[i])) {
            if (!in_run) {
                start = i;
                in_run = true;
            }
        } else if (in_run) {
            segs.push_back({start, bases.substr(start, i - start)});
            in_run = false;
        }
    }
    if (in_run) segs.push_back({start, bases.substr(start)});
    return segs;
}

} // namespace

std::vector<NucleotideSequence> prepare_corpus(std::span<const FastaRecord> records,
                                               const CorpusSpec& spec) {
    spec.validate();
    std::vector<NucleotideSequence> out;

    for (size_t rec_idx = 0; rec_idx < records.size(); ++rec_idx) {
        const FastaRecord& rec = records[rec_idx];
        // Tolerate soft-masked (lowercase) input when records were built by hand.
        std::string upper;
        upper.reserve(rec.bases.size());
        for (char c : rec.bases)
            upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));

        Rng rng(derive_seed(spec.rng_seed, splitmix64(kRecordSalt + rec_idx)));
        for (const Segment& seg : valid_segments(upper)) {
            if (seg.bases.size() < spec.min_random_length) continue;
            size_t pos = 0;
            while (seg.bases.size() - pos >= spec.min_random_length) {
                const bool fixed = rng.bernoulli(spec.half_fixed_fraction);
                const uint64_t len =
                    fixed ? spec.fixed_length
                          : rng.uniform_int(spec.min_random_length, spec.max_random_length);
                if (pos + len > seg.bases.size()) break; // tail shorter than the draw
                out.push_back({std::string(seg.bases.substr(pos, len)), rec.id,
                               seg.offset + pos});
                pos += len;
            }
        }
    }

    if (out.empty())
        throw EmptyCorpus("no usable ACGT segment of length >= min_random_length");
    return out;
}

void write_sequences(std::ostream& out, std::span<const NucleotideSequence> seqs) {
    for (const NucleotideSequence& s : seqs)
        out << s.source_id << '\t' << s.offset << '\t' << s.bases << '\n';
}

std::vector<NucleotideSequence> read_sequences(std::istream& in) {
    std::vector<NucleotideSequence> seqs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const size_t t1 = line.find('\t');
        const size_t t2 = (t1 == std::string::npos) ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw IoError("sequences file: line " + std::to_string(lineno) +
                          " is not <id>\\t<offset>\\t<bases>");
        NucleotideSequence s;
        s.source_id = line.substr(0, t1);
        const char* off_begin = line.data() + t1 + 1;
        const char* off_end = line.data() + t2;
        auto [ptr, ec] = std::from_chars(off_begin, off_end, s.offset);
        if (ec != std::errc{} || ptr != off_end)
            throw IoError("sequences file: bad offset on line " + std::to_string(lineno));
        s.bases = line.substr(t2 + 1);
        for (char c : s.bases)
            if (!is_acgt(c))
                throw IoError("sequences file: non-ACGT base on line " + std::to_string(lineno));
        seqs.push_back(std::move(s));
    }
    if (in.bad()) throw IoError("I/O error while reading sequences file");
    return seqs;
}

std::vector<NucleotideSequence> load_sequences_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sequences file: " + path);
    return read_sequences(in);
}

} // namespace genemask
