#include "phonosim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "phonosim/parallel.hpp"

namespace phonosim {

void SimilarityConfig::validate() const {
    if (!std::isfinite(penalty) || penalty < 1.0)
        throw InputError("non-diagonal penalty must be a finite value >= 1");
    if (vowel_weighted && gram_mode != GramMode::bigram)
        throw InputError("vowel weighting is only defined in bigram mode");
}

std::string SimilarityConfig::describe() const {
    std::ostringstream out;
    out << "gram=" << (gram_mode == GramMode::bigram ? "bigram" : "unigram") << " penalty=" << penalty
        << " vowel_weighted=" << (vowel_weighted ? 1 : 0)
        << " path=" << (path_select == PathSelect::min ? "min" : "max");
    return out.str();
}

std::vector<Bigram> to_bigram_sequence(const Pronunciation& pron, const Inventory& inventory) {
    if (pron.empty()) throw InputError("cannot build bigrams of an empty pronunciation");
    std::vector<Bigram> out;
    out.reserve(pron.size() + 1);
    PhonemeId prev = inventory.begin_id();
    auto push = [&](PhonemeId next) {
        out.push_back({prev, next, inventory.features(prev) | inventory.features(next), inventory.is_vowel(next)});
        prev = next;
    };
    for (auto id : pron) push(id);
    push(inventory.end_id());
    return out;
}

double vowel_weighted_similarity(const Bigram& x, const Bigram& y) noexcept {
    const double s = bigram_similarity(x, y);
    return (x.second_is_vowel && x.second == y.second) ? std::sqrt(s) : s * s;
}

std::vector<AlignElement> encode(const Pronunciation& pron, const Inventory& inventory, GramMode mode) {
    if (pron.empty()) throw InputError("cannot score an empty pronunciation");
    std::vector<AlignElement> out;
    if (mode == GramMode::unigram) {
        out.reserve(pron.size());
        for (auto id : pron) out.push_back({inventory.features(id), id, inventory.is_vowel(id)});
    } else {
        for (const auto& bg : to_bigram_sequence(pron, inventory))
            out.push_back({bg.features, bg.second, bg.second_is_vowel});
    }
    return out;
}

namespace {

inline double similarity(const AlignElement& x, const AlignElement& y, bool vowel_weighted) noexcept {
    const double s = jaccard_unchecked(x.features, y.features);
    if (!vowel_weighted) return s;
    return (x.last_is_vowel && x.last == y.last) ? std::sqrt(s) : s * s;
}

inline double pick(double up, double left, PathSelect select) noexcept {
    return select == PathSelect::min ? std::min(up, left) : std::max(up, left);
}

} // namespace

double element_similarity(const AlignElement& x, const AlignElement& y, const SimilarityConfig& cfg) noexcept {
    return similarity(x, y, cfg.vowel_weighted);
}

AlignmentTable align(std::span<const AlignElement> a, std::span<const AlignElement> b, const SimilarityConfig& cfg) {
    if (a.empty() || b.empty()) throw InputError("cannot align an empty sequence");
    AlignmentTable t;
    t.rows = a.size();
    t.cols = b.size();
    t.cells.assign(t.rows * t.cols, 0.0);
    auto d = [&](std::size_t i, std::size_t j) -> double& { return t.cells[i * t.cols + j]; };
    const double p = cfg.penalty;

    for (std::size_t i = 0; i < t.rows; ++i) {
        for (std::size_t j = 0; j < t.cols; ++j) {
            const double s = similarity(a[i], b[j], cfg.vowel_weighted);
            if (i == 0 && j == 0)
                d(i, j) = s;
            else if (j == 0)
                d(i, j) = d(i - 1, 0) + s;
            else if (i == 0)
                d(i, j) = d(0, j - 1) + s;
            else if (s == 1.0)
                d(i, j) = s + d(i - 1, j - 1);
            else
                d(i, j) = s / p + pick(d(i - 1, j), d(i, j - 1), cfg.path_select);
            ++t.cells_filled;
        }
    }
    return t;
}

double normalized_alignment_score(std::span<const AlignElement> a, std::span<const AlignElement> b,
                                  const SimilarityConfig& cfg) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    constexpr std::size_t kStackCols = 64;
    double stack_row[kStackCols];
    std::vector<double> heap_row;
    double* row = stack_row;
    if (m > kStackCols) {
        heap_row.resize(m);
        row = heap_row.data();
    }

    const bool vw = cfg.vowel_weighted;
    const bool take_min = cfg.path_select == PathSelect::min;
    const double p = cfg.penalty;

    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        acc += similarity(a[0], b[j], vw);
        row[j] = acc;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const AlignElement& ai = a[i];
        double diag = row[0]; // d[i-1][j-1] for the next column
        row[0] += similarity(ai, b[0], vw);
        for (std::size_t j = 1; j < m; ++j) {
            const double up = row[j];
            const double s = similarity(ai, b[j], vw);
            double cell;
            if (s == 1.0)
                cell = s + diag;
            else
                cell = s / p + (take_min ? std::min(up, row[j - 1]) : std::max(up, row[j - 1]));
            diag = up;
            row[j] = cell;
        }
    }
    return row[m - 1] / static_cast<double>(std::max(n, m));
}

double word_similarity(const Pronunciation& a, const Pronunciation& b, const SimilarityConfig& cfg,
                       const Inventory& inventory) {
    cfg.validate();
    const auto ea = encode(a, inventory, cfg.gram_mode);
    const auto eb = encode(b, inventory, cfg.gram_mode);
    return normalized_alignment_score(ea, eb, cfg);
}

EncodedLexicon::EncodedLexicon(const Lexicon& lexicon, const SimilarityConfig& cfg)
    : lexicon_(&lexicon), cfg_(cfg) {
    cfg_.validate();
    offsets_.reserve(lexicon.size() + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < lexicon.size(); ++i) {
        auto seq = encode(lexicon.primary(i), lexicon.inventory(), cfg_.gram_mode);
        elements_.insert(elements_.end(), seq.begin(), seq.end());
        offsets_.push_back(elements_.size());
    }
}

std::vector<ScoredWord> similarity_scan(const Pronunciation& query, const EncodedLexicon& index, std::size_t top,
                                        unsigned threads) {
    const auto& lex = index.lexicon();
    const auto encoded = encode(query, lex.inventory(), index.config().gram_mode);
    std::vector<double> scores(index.size());
    parallel_for(index.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            scores[i] = normalized_alignment_score(encoded, index.sequence(i), index.config());
    });

    std::vector<std::size_t> order(index.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto better = [&](std::size_t x, std::size_t y) {
        if (scores[x] != scores[y]) return scores[x] > scores[y];
        return lex.word(x) < lex.word(y);
    };
    const std::size_t keep = top == 0 ? order.size() : std::min(top, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), better);

    std::vector<ScoredWord> out;
    out.reserve(keep);
    for (std::size_t r = 0; r < keep; ++r) out.push_back({order[r], lex.word(order[r]), scores[order[r]]});
    return out;
}

std::vector<ScoredWord> similarity_scan(const Pronunciation& query, const Lexicon& lexicon,
                                        const SimilarityConfig& cfg, std::size_t top, unsigned threads) {
    const EncodedLexicon index(lexicon, cfg);
    return similarity_scan(query, index, top, threads);
}

void write_scan_tsv(std::ostream& out, std::span<const ScoredWord> results) {
    char buf[32];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%.4f", r.score);
        out << r.word << '\t' << buf << '\n';
    }
}

} // namespace phonosim
