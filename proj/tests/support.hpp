#pragma once

// Shared plumbing for the test binaries: paths handed in on the command
// line (--cli=, --data=), scratch directories, tiny file helpers, CLI
// invocation, and synthetic-corpus builders used across suites.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "genemask/corpus.hpp"
#include "genemask/rng.hpp"

namespace testsupport {

struct Env {
    inline static std::string cli;      // path to the genemask binary
    inline static std::string data_dir; // path to tests/data
};

inline std::string data_path(const std::string& name) {
    if (Env::data_dir.empty())
        throw std::runtime_error("test data dir not set (pass --data=<dir>)");
    return Env::data_dir + "/" + name;
}

/// Self-deleting scratch directory.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        static std::mt19937_64 rng(std::random_device{}());
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("genemask-test-" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Run the genemask binary with the given argument string. `env_prefix` may
/// carry VAR=value assignments (it is prepended to the shell command).
inline CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    if (Env::cli.empty())
        throw std::runtime_error("CLI path not set (pass --cli=<binary>)");
    TempDir scratch;
    const std::string out_path = scratch.file("stdout");
    const std::string err_path = scratch.file("stderr");
    std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
    cmd += "'" + Env::cli + "' " + args + " >'" + out_path + "' 2>'" + err_path + "'";
    const int status = std::system(cmd.c_str());

    CliResult result;
    if (status == -1)
        result.exit_code = -1;
    else if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

// ------------------------------------------------------- synthetic corpora --

inline std::string random_bases(genemask::Rng& rng, size_t len) {
    static const char alphabet[] = "ACGT";
    std::string bases(len, 'A');
    for (auto& c : bases) c = alphabet[rng.below(4)];
    return bases;
}

inline std::vector<genemask::NucleotideSequence> random_corpus(uint64_t seed, size_t n,
                                                               size_t len) {
    genemask::Rng rng(seed);
    std::vector<genemask::NucleotideSequence> seqs;
    seqs.reserve(n);
    for (size_t i = 0; i < n; ++i)
        seqs.push_back({random_bases(rng, len), "synthetic" + std::to_string(i), 0});
    return seqs;
}

/// Overwrite with `motif` starting at roughly every `spacing` bases,
/// jittered, so the motif is heavily over-represented.
inline void plant_motif(std::string& bases, const std::string& motif,
                        genemask::Rng& rng, size_t spacing) {
    if (bases.size() < motif.size()) return;
    for (size_t at = rng.below(spacing); at + motif.size() <= bases.size();
         at += 1 + rng.below(2 * spacing))
        bases.replace(at, motif.size(), motif);
}

inline std::vector<genemask::NucleotideSequence> motif_corpus(uint64_t seed, size_t n,
                                                              size_t len,
                                                              const std::string& motif,
                                                              size_t spacing) {
    auto seqs = random_corpus(seed, n, len);
    genemask::Rng rng(genemask::derive_seed(seed, 0x6d6f746966313233ULL));
    for (auto& seq : seqs) plant_motif(seq.bases, motif, rng, spacing);
    return seqs;
}

/// Serialize sequences as a bare TSV (no header comment) for CLI input.
inline std::string sequences_tsv(const std::vector<genemask::NucleotideSequence>& seqs) {
    std::ostringstream out;
    genemask::write_sequences(out, seqs);
    return out.str();
}

} // namespace testsupport
