#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace genemask {

/// One FASTA record, body lines concatenated and uppercased. The body may
/// still contain non-ACGT letters (N, IUPAC ambiguity codes); filtering
/// happens in corpus preparation.
struct FastaRecord {
    std::string id;
    std::string bases;
};

/// Streaming parser: invokes `sink` once per record, in file order.
/// Throws MalformedFasta on body text before any header, an empty header,
/// or a header with no body.
void parse_fasta(std::istream& in, const std::function<void(FastaRecord&&)>& sink);

std::vector<FastaRecord> parse_fasta(std::istream& in);

/// Opens and parses a FASTA file. Throws IoError if the file cannot be read.
std::vector<FastaRecord> load_fasta_file(const std::string& path);

} // namespace genemask
