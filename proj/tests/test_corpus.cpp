#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genemask/corpus.hpp"
#include "genemask/errors.hpp"
#include "genemask/kmer.hpp"
#include "genemask/rng.hpp"
#include "support.hpp"

using namespace genemask;

namespace {

std::vector<NucleotideSequence> prepare(const std::vector<FastaRecord>& records,
                                        const CorpusSpec& spec) {
    return prepare_corpus(records, spec);
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("N splits a record and short segments are discarded") {
    CorpusSpec spec;
    spec.half_fixed_fraction = 0.0; // always a random-length draw
    spec.min_random_length = 5;
    spec.max_random_length = 8;
    spec.rng_seed = 1;
    const auto seqs = prepare({{"rec", "ACGTNNACGTACGT"}}, spec);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].source_id == "rec");
    CHECK(seqs[0].offset == 6); // the 4-base prefix before the Ns is too short
    CHECK(seqs[0].bases.size() >= 5);
    CHECK(seqs[0].bases.size() <= 8);
    // Emitted bases really are the suffix segment at that offset.
    CHECK(std::string("ACGTACGT").substr(0, seqs[0].bases.size()) == seqs[0].bases);
}

TEST_CASE("all-fixed spec cuts exact fixed-length windows") {
    CorpusSpec spec;
    spec.half_fixed_fraction = 1.0;
    spec.fixed_length = 510;
    spec.rng_seed = 7;
    Rng rng(99);
    const std::string bases = testsupport::random_bases(rng, 1020);
    const auto seqs = prepare({{"rec", bases}}, spec);
    REQUIRE(seqs.size() == 2);
    for (const auto& s : seqs) CHECK(s.bases.size() == 510);
    CHECK(seqs[0].offset == 0);
    CHECK(seqs[1].offset == 510);
    CHECK(seqs[0].bases == bases.substr(0, 510));
    CHECK(seqs[1].bases == bases.substr(510, 510));
}

TEST_CASE("windows are sequential, non-overlapping, and within the segment") {
    CorpusSpec spec;
    spec.half_fixed_fraction = 0.3;
    spec.fixed_length = 50;
    spec.min_random_length = 5;
    spec.max_random_length = 40;
    spec.rng_seed = 3;
    Rng rng(5);
    std::string bases = testsupport::random_bases(rng, 5000);
    bases[1234] = 'N';
    bases[1235] = 'X';
    const auto seqs = prepare({{"rec", bases}}, spec);
    REQUIRE(!seqs.empty());
    uint64_t watermark = 0;
    for (const auto& s : seqs) {
        CHECK(s.offset >= watermark);
        watermark = s.offset + s.bases.size();
        CHECK(s.bases == bases.substr(s.offset, s.bases.size()));
        const bool ok_len = s.bases.size() == spec.fixed_length ||
                            (s.bases.size() >= spec.min_random_length &&
                             s.bases.size() <= spec.max_random_length);
        CHECK(ok_len);
    }
    CHECK(watermark <= bases.size());
}

TEST_CASE("alphabet closure under byte noise") {
    Rng rng(11);
    std::string bases;
    for (size_t i = 0; i < 4000; ++i) {
        // Mostly ACGT with random bytes sprinkled in.
        if (rng.bernoulli(0.05))
            bases.push_back(static_cast<char>('!' + rng.below(90)));
        else
            bases.push_back("ACGT"[rng.below(4)]);
    }
    CorpusSpec spec;
    spec.half_fixed_fraction = 0.0;
    spec.min_random_length = 5;
    spec.max_random_length = 20;
    spec.rng_seed = 17;
    const auto seqs = prepare({{"noisy", bases}}, spec);
    REQUIRE(!seqs.empty());
    for (const auto& s : seqs)
        for (char c : s.bases) CHECK(is_acgt(c));
}

TEST_CASE("fixed-length fraction converges to half_fixed_fraction") {
    // fixed_length sits outside [min, max] so the two window kinds are
    // distinguishable by length alone.
    CorpusSpec spec;
    spec.half_fixed_fraction = 0.5;
    spec.fixed_length = 200;
    spec.min_random_length = 5;
    spec.max_random_length = 100;
    spec.rng_seed = 23;
    Rng rng(29);
    std::vector<FastaRecord> records;
    for (int r = 0; r < 300; ++r)
        records.push_back({"r" + std::to_string(r), testsupport::random_bases(rng, 8000)});
    const auto seqs = prepare(records, spec);
    size_t fixed = 0;
    for (const auto& s : seqs)
        if (s.bases.size() == spec.fixed_length) ++fixed;
    const auto n = static_cast<double>(seqs.size());
    REQUIRE(n >= 10000);
    const double fraction = static_cast<double>(fixed) / n;
    const double sigma = std::sqrt(0.5 * 0.5 / n);
    CHECK(std::abs(fraction - 0.5) <= 3.0 * sigma);
}

TEST_CASE("deterministic per seed and per record index") {
    Rng rng(31);
    std::vector<FastaRecord> records = {{"a", testsupport::random_bases(rng, 3000)},
                                        {"b", testsupport::random_bases(rng, 3000)}};
    CorpusSpec spec;
    spec.rng_seed = 5;
    const auto first = prepare(records, spec);
    const auto second = prepare(records, spec);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].bases == second[i].bases);
        CHECK(first[i].offset == second[i].offset);
        CHECK(first[i].source_id == second[i].source_id);
    }

    spec.rng_seed = 6;
    const auto reseeded = prepare(records, spec);
    bool any_difference = reseeded.size() != first.size();
    for (size_t i = 0; !any_difference && i < first.size(); ++i)
        any_difference = first[i].bases != reseeded[i].bases;
    CHECK(any_difference);
}

TEST_CASE("empty corpus throws") {
    CorpusSpec spec;
    CHECK_THROWS_AS(prepare({{"only-ns", "NNNNNNNNNN"}}, spec), EmptyCorpus);
    CHECK_THROWS_AS(prepare({{"too-short", "ACG"}}, spec), EmptyCorpus);
    CHECK_THROWS_AS(prepare({}, spec), EmptyCorpus);
}

TEST_CASE("spec validation") {
    CorpusSpec spec;
    spec.half_fixed_fraction = 1.5;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = CorpusSpec{};
    spec.min_random_length = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = CorpusSpec{};
    spec.min_random_length = 100;
    spec.max_random_length = 50;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("sequences file round-trips") {
    Rng rng(37);
    std::vector<NucleotideSequence> seqs;
    for (int i = 0; i < 20; ++i)
        seqs.push_back({testsupport::random_bases(rng, 30 + rng.below(100)),
                        "src" + std::to_string(i), rng.below(100000)});
    std::ostringstream out;
    write_sequences(out, seqs);
    std::istringstream in(out.str());
    const auto back = read_sequences(in);
    REQUIRE(back.size() == seqs.size());
    for (size_t i = 0; i < seqs.size(); ++i) {
        CHECK(back[i].bases == seqs[i].bases);
        CHECK(back[i].source_id == seqs[i].source_id);
        CHECK(back[i].offset == seqs[i].offset);
    }
}

TEST_CASE("sequences reader skips comments and validates rows") {
    {
        std::istringstream in("# a comment\nid\t12\tACGT\n\nid2\t0\tTTTT\n");
        const auto seqs = read_sequences(in);
        REQUIRE(seqs.size() == 2);
        CHECK(seqs[0].offset == 12);
    }
    {
        std::istringstream in("id\tnot-a-number\tACGT\n");
        CHECK_THROWS_AS(read_sequences(in), IoError);
    }
    {
        std::istringstream in("id\t3\tACGU\n");
        CHECK_THROWS_AS(read_sequences(in), IoError);
    }
    {
        std::istringstream in("no-tabs-here\n");
        CHECK_THROWS_AS(read_sequences(in), IoError);
    }
}

} // TEST_SUITE
