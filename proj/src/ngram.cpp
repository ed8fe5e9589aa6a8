#include "genemask/ngram.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "genemask/errors.hpp"
#include "genemask/kmer.hpp"
#include "genemask/rng.hpp"

namespace genemask {

namespace {
constexpr unsigned kShapeBits = 8;
constexpr unsigned kCodeBits = 24; // holds any k-mer code up to k = 12
} // namespace

void NgramConfig::validate() const {
    if (order < 1 || order > 2)
        throw ConfigError("n-gram order must be 1 or 2 flanking tokens per side");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw ConfigError("smoothing alpha must be finite and >= 0");
    if (k < 1 || k > kMaxK)
        throw ConfigError("k must be in [1, " + std::to_string(kMaxK) + "]");
}

NgramModel::NgramModel(NgramConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    vocab_ = kmer_space(cfg_.k);
    // Back-off chain, widest context first: symmetric windows shrinking to
    // one flank per side, the two single flanks, then the empty context
    // (unigram) as the final counted fallback.
    for (uint32_t w = cfg_.order; w >= 1; --w) {
        std::vector<int> shape;
        for (int off = -static_cast<int>(w); off <= static_cast<int>(w); ++off)
            if (off != 0) shape.push_back(off);
        shapes_.push_back(std::move(shape));
    }
    shapes_.push_back({-1});
    shapes_.push_back({+1});
    shapes_.push_back({});
}

size_t NgramModel::KeyHash::operator()(const Key& key) const {
    return static_cast<size_t>(splitmix64(key.hi ^ splitmix64(key.lo)));
}

NgramModel::Key NgramModel::push(Key key, uint64_t value, unsigned bits) {
    assert(bits < 64 && value < (uint64_t{1} << bits));
    key.hi = (key.hi << bits) | (key.lo >> (64 - bits));
    key.lo = (key.lo << bits) | value;
    return key;
}

void NgramModel::bump(const Key& ctx, uint32_t center, uint64_t n) {
    const uint64_t count = counts_[push(ctx, center, kCodeBits)] += n;
    ContextStats& stats = contexts_[ctx];
    stats.total += n;
    // Invariant: argmax is the smallest code among the most frequent tokens.
    // Exact under +1 increments (fit) and under one bulk add per key (load).
    if (count > stats.max_count ||
        (count == stats.max_count && center < stats.argmax)) {
        stats.max_count = count;
        stats.argmax = center;
    }
}

bool NgramModel::gather(const TokenSequence& tokens, const std::vector<char>* masked,
                        size_t pos, const std::vector<int>& shape, Key& ctx) const {
    const size_t tc = tokens.token_count();
    for (int off : shape) {
        const int64_t ipos = static_cast<int64_t>(pos) + off;
        if (ipos < 0 || ipos >= static_cast<int64_t>(tc)) return false;
        if (masked && (*masked)[static_cast<size_t>(ipos)]) return false;
        ctx = push(ctx, tokens.token_codes[static_cast<size_t>(ipos)], kCodeBits);
    }
    return true;
}

void NgramModel::add_sequence(const TokenSequence& tokens) {
    if (tokens.k != cfg_.k)
        throw TableMismatch("token k=" + std::to_string(tokens.k) +
                            " but model k=" + std::to_string(cfg_.k));
    for (size_t pos = 0; pos < tokens.token_count(); ++pos) {
        for (size_t level = 0; level < shapes_.size(); ++level) {
            Key ctx = push({}, level, kShapeBits);
            if (gather(tokens, nullptr, pos, shapes_[level], ctx))
                bump(ctx, tokens.token_codes[pos], 1);
        }
    }
}

NgramModel NgramModel::fit(std::span<const TokenSequence> corpus, const NgramConfig& cfg) {
    if (corpus.empty()) throw EmptyCorpus("fit: empty token corpus");
    NgramModel model(cfg);
    for (const auto& tokens : corpus) model.add_sequence(tokens);
    return model;
}

NgramModel::Prediction NgramModel::predict(const TokenSequence& tokens,
                                           const std::vector<char>& masked,
                                           size_t pos) const {
    if (tokens.k != cfg_.k)
        throw TableMismatch("token k=" + std::to_string(tokens.k) +
                            " but model k=" + std::to_string(cfg_.k));
    if (pos >= tokens.token_count() || masked.size() != tokens.token_count())
        throw IndexOutOfRange("predict: position/mask outside the token sequence");

    for (size_t level = 0; level < shapes_.size(); ++level) {
        Key ctx = push({}, level, kShapeBits);
        if (!gather(tokens, &masked, pos, shapes_[level], ctx)) continue;
        const auto stats_it = contexts_.find(ctx);
        if (stats_it == contexts_.end()) continue; // context never seen: back off

        const ContextStats& stats = stats_it->second;
        const auto count_it = counts_.find(push(ctx, tokens.token_codes[pos], kCodeBits));
        const double count =
            count_it == counts_.end() ? 0.0 : static_cast<double>(count_it->second);
        const double denom = static_cast<double>(stats.total) +
                             cfg_.alpha * static_cast<double>(vocab_);
        return {std::log((count + cfg_.alpha) / denom), stats.argmax,
                static_cast<int>(level)};
    }
    // No counts at any level (unfitted model): uniform over the vocabulary.
    return {-std::log(static_cast<double>(vocab_)), 0, -1};
}

std::vector<double> NgramModel::predictive_distribution(const TokenSequence& tokens,
                                                        const std::vector<char>& masked,
                                                        size_t pos) const {
    std::vector<double> dist(vocab_, 1.0 / static_cast<double>(vocab_));
    const Prediction pred = predict(tokens, masked, pos);
    if (pred.backoff_level < 0) return dist;

    Key ctx = push({}, static_cast<uint64_t>(pred.backoff_level), kShapeBits);
    gather(tokens, &masked, pos, shapes_[static_cast<size_t>(pred.backoff_level)], ctx);
    const ContextStats& stats = contexts_.at(ctx);
    const double denom =
        static_cast<double>(stats.total) + cfg_.alpha * static_cast<double>(vocab_);
    for (uint64_t v = 0; v < vocab_; ++v) {
        const auto it = counts_.find(push(ctx, static_cast<uint32_t>(v), kCodeBits));
        const double count = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
        dist[v] = (count + cfg_.alpha) / denom;
    }
    return dist;
}

EvalReport NgramModel::evaluate_masked(const TokenSequence& tokens,
                                       const MaskPlan& plan) const {
    if (plan.mask_indices.empty()) throw EmptyPlan("plan masks no tokens");
    const size_t tc = tokens.token_count();
    std::vector<char> masked(tc, 0);
    for (uint32_t idx : plan.mask_indices) {
        if (idx >= tc)
            throw IndexOutOfRange("plan index " + std::to_string(idx) +
                                  " outside token sequence of " + std::to_string(tc));
        masked[idx] = 1;
    }

    double nll = 0.0;
    uint64_t correct = 0;
    for (uint32_t idx : plan.mask_indices) {
        const Prediction pred = predict(tokens, masked, idx);
        nll -= pred.log_prob;
        if (pred.argmax == tokens.token_codes[idx]) ++correct;
    }
    const auto n = static_cast<double>(plan.mask_indices.size());
    return {std::exp(nll / n), static_cast<double>(correct) / n,
            plan.mask_indices.size()};
}

namespace {

std::string hex16(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf, 16);
}

uint64_t parse_hex16(std::string_view text, const char* what) {
    uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw TableMismatch(std::string("bad ") + what + " field in model file");
    return value;
}

uint64_t parse_dec(std::string_view text, const char* what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw TableMismatch(std::string("bad ") + what + " field in model file");
    return value;
}

} // namespace

void NgramModel::save(std::ostream& out) const {
    char alpha_buf[64];
    std::snprintf(alpha_buf, sizeof alpha_buf, "%.17g", cfg_.alpha);
    out << "# ngram v1 k=" << cfg_.k << " order=" << cfg_.order
        << " alpha=" << alpha_buf << '\n';

    struct Row {
        uint64_t ctx_hi, ctx_lo;
        uint32_t center;
        uint64_t count;
    };
    std::vector<Row> rows;
    rows.reserve(counts_.size());
    for (const auto& [key, count] : counts_) {
        // Peel the center (last pushed, low 24 bits) off the full key.
        const auto center = static_cast<uint32_t>(key.lo & ((1u << kCodeBits) - 1));
        const uint64_t ctx_lo = (key.lo >> kCodeBits) | (key.hi << (64 - kCodeBits));
        const uint64_t ctx_hi = key.hi >> kCodeBits;
        rows.push_back({ctx_hi, ctx_lo, center, count});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.ctx_hi, a.ctx_lo, a.center) <
               std::tie(b.ctx_hi, b.ctx_lo, b.center);
    });
    for (const auto& r : rows)
        out << hex16(r.ctx_hi) << '\t' << hex16(r.ctx_lo) << '\t' << r.center
            << '\t' << r.count << '\n';
    if (!out) throw IoError("failed writing n-gram model");
}

NgramModel NgramModel::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw TableMismatch("empty n-gram model file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    NgramConfig cfg;
    {
        std::istringstream hdr(line);
        std::string tag, version, field;
        hdr >> tag >> version;
        if (tag != "#" || version != "ngram")
            throw TableMismatch("n-gram model header must start with '# ngram'");
        bool v1 = false;
        while (hdr >> field) {
            if (field == "v1")
                v1 = true;
            else if (field.rfind("k=", 0) == 0)
                cfg.k = static_cast<uint32_t>(parse_dec(field.substr(2), "k"));
            else if (field.rfind("order=", 0) == 0)
                cfg.order = static_cast<uint32_t>(parse_dec(field.substr(6), "order"));
            else if (field.rfind("alpha=", 0) == 0) {
                char* end = nullptr;
                const std::string text = field.substr(6);
                cfg.alpha = std::strtod(text.c_str(), &end);
                if (end != text.c_str() + text.size())
                    throw TableMismatch("bad alpha field in model file");
            }
        }
        if (!v1) throw TableMismatch("unsupported n-gram model version");
    }

    NgramModel model(cfg);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        std::array<std::string_view, 4> fields;
        std::string_view rest = line;
        for (size_t f = 0; f < 4; ++f) {
            const size_t tab = rest.find('\t');
            if ((f < 3) != (tab != std::string_view::npos))
                throw TableMismatch("model line " + std::to_string(lineno) +
                                    ": expected 4 tab-separated fields");
            fields[f] = rest.substr(0, tab);
            if (tab != std::string_view::npos) rest = rest.substr(tab + 1);
        }
        Key ctx{parse_hex16(fields[0], "context"), parse_hex16(fields[1], "context")};
        const auto center = static_cast<uint32_t>(parse_dec(fields[2], "token"));
        const uint64_t count = parse_dec(fields[3], "count");
        if (center >= model.vocab_ || count == 0)
            throw TableMismatch("model line " + std::to_string(lineno) +
                                ": token or count out of range");
        if (model.counts_.contains(push(ctx, center, kCodeBits)))
            throw TableMismatch("model line " + std::to_string(lineno) +
                                ": duplicate (context, token) row");
        model.bump(ctx, center, count);
    }
    return model;
}

NgramModel NgramModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open n-gram model: " + path);
    return load(in);
}

} // namespace genemask
