#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "genemask/fasta.hpp"

namespace genemask {

/// A validated pretraining sequence: ACGT only, provenance attached.
struct NucleotideSequence {
    std::string bases;     // strictly {A,C,G,T}
    std::string source_id; // id of the originating FASTA record
    uint64_t offset = 0;   // 0-based start position within the source record
};

/// Window-cutting rules for pretraining corpus construction. Half of the
/// windows (by independent per-window draw) are cut at `fixed_length`, the
/// rest at a uniform random length in [min_random_length, max_random_length].
struct CorpusSpec {
    double half_fixed_fraction = 0.5;
    uint32_t fixed_length = 510;
    uint32_t min_random_length = 5;
    uint32_t max_random_length = 510;
    uint64_t rng_seed = 0;

    void validate() const; // throws ConfigError
};

/// Cut pretraining sequences out of the records' ACGT segments.
///
/// Each record is split at every non-ACGT base (the offending base is
/// dropped, flanking valid segments are kept). Segments shorter than
/// min_random_length are discarded. Windows are cut sequentially and
/// non-overlapping; a segment tail shorter than the drawn window length is
/// discarded. Each record uses an RNG stream derived from (rng_seed, record
/// index), so output is deterministic and independent of processing order.
///
/// Throws EmptyCorpus if nothing could be emitted.
std::vector<NucleotideSequence> prepare_corpus(std::span<const FastaRecord> records,
                                               const CorpusSpec& spec);

/// Sequences file: one `<source_id>\t<offset>\t<bases>` line per sequence.
void write_sequences(std::ostream& out, std::span<const NucleotideSequence> seqs);

/// Reads a sequences file; '#' comment lines are skipped.
std::vector<NucleotideSequence> read_sequences(std::istream& in);
std::vector<NucleotideSequence> load_sequences_file(const std::string& path);

} // namespace genemask
