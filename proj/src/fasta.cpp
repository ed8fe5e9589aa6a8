#include "genemask/fasta.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include "genemask/errors.hpp"

namespace genemask {

namespace {

// Trailing whitespace (including '\r' from CRLF files) is stripped per line.
void rstrip(std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
}

} // namespace

void parse_fasta(std::istream& in, const std::function<void(FastaRecord&&)>& sink) {
    FastaRecord current;
    bool have_header = false;

    auto flush = [&] {
        if (!have_header) return;
        if (current.bases.empty())
            throw MalformedFasta("record '" + current.id + "' has no sequence body");
        sink(std::move(current));
        current = FastaRecord{};
    };

    std::string line;
    while (std::getline(in, line)) {
        rstrip(line);
        if (line.empty()) continue;
        if (line[0] == '>') {
            flush();
            current.id = line.substr(1);
            rstrip(current.id);
            if (current.id.empty()) throw MalformedFasta("empty FASTA header");
            have_header = true;
        } else {
            if (!have_header)
                throw MalformedFasta("sequence body before any '>' header");
            for (char c : line)
                current.bases.push_back(
                    static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    if (in.bad()) throw IoError("I/O error while reading FASTA stream");
    flush();
}

std::vector<FastaRecord> parse_fasta(std::istream& in) {
    std::vector<FastaRecord> records;
    parse_fasta(in, [&](FastaRecord&& r) { records.push_back(std::move(r)); });
    return records;
}

std::vector<FastaRecord> load_fasta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open FASTA file: " + path);
    return parse_fasta(in);
}

} // namespace genemask
