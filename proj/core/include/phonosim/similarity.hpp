#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phonosim/feature_set.hpp"
#include "phonosim/inventory.hpp"
#include "phonosim/lexicon.hpp"

namespace phonosim {

enum class GramMode { unigram, bigram };

// Which accumulated neighbour an off-diagonal cell extends. The published
// recurrence takes the minimum; `max` exists for experiments only.
enum class PathSelect { min, max };

struct SimilarityConfig {
    GramMode gram_mode = GramMode::bigram;
    double penalty = 2.5;
    bool vowel_weighted = true;
    PathSelect path_select = PathSelect::min;

    // Throws InputError: penalty < 1 or non-finite, vowel weighting outside bigram mode.
    void validate() const;
    // e.g. "gram=bigram penalty=2.5 vowel_weighted=1 path=min"
    std::string describe() const;
};

// Adjacent phoneme pair; features is the union of both members' features.
struct Bigram {
    PhonemeId first;
    PhonemeId second;
    FeatureSet features;
    bool second_is_vowel;
};

// (BEG,a1), (a1,a2), ..., (an,END). Throws InputError on an empty pronunciation.
std::vector<Bigram> to_bigram_sequence(const Pronunciation& pron, const Inventory& inventory);

inline double bigram_similarity(const Bigram& x, const Bigram& y) noexcept {
    return jaccard_unchecked(x.features, y.features);
}

// sqrt(s) when both bigrams end in the same vowel, s^2 otherwise.
double vowel_weighted_similarity(const Bigram& x, const Bigram& y) noexcept;

// One alignment element: a phoneme (unigram mode) or a bigram.
struct AlignElement {
    FeatureSet features;
    PhonemeId last;
    bool last_is_vowel;
};

std::vector<AlignElement> encode(const Pronunciation& pron, const Inventory& inventory, GramMode mode);

// Element similarity under cfg (Jaccard, optionally vowel-weighted).
double element_similarity(const AlignElement& x, const AlignElement& y, const SimilarityConfig& cfg) noexcept;

// Full accumulated-score table, kept for inspection and tests; scoring itself
// uses a single rolling row.
struct AlignmentTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> cells;
    std::size_t cells_filled = 0;

    double at(std::size_t i, std::size_t j) const { return cells.at(i * cols + j); }
    double final_score() const { return cells.back(); }
};

AlignmentTable align(std::span<const AlignElement> a, std::span<const AlignElement> b, const SimilarityConfig& cfg);

// d[n][m] / max(n, m) over pre-encoded sequences. Both must be non-empty.
double normalized_alignment_score(std::span<const AlignElement> a, std::span<const AlignElement> b,
                                  const SimilarityConfig& cfg);

// Word similarity W_S (or W_S^V when cfg.vowel_weighted).
double word_similarity(const Pronunciation& a, const Pronunciation& b, const SimilarityConfig& cfg,
                       const Inventory& inventory);

// Primary pronunciations of a lexicon, encoded once for repeated scoring.
class EncodedLexicon {
public:
    EncodedLexicon(const Lexicon& lexicon, const SimilarityConfig& cfg);

    std::size_t size() const noexcept { return offsets_.size() - 1; }
    std::span<const AlignElement> sequence(std::size_t i) const noexcept {
        return {elements_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    const SimilarityConfig& config() const noexcept { return cfg_; }
    const Lexicon& lexicon() const noexcept { return *lexicon_; }

    // Similarity of two lexicon rows.
    double score(std::size_t i, std::size_t j) const noexcept {
        return normalized_alignment_score(sequence(i), sequence(j), cfg_);
    }

private:
    const Lexicon* lexicon_;
    SimilarityConfig cfg_;
    std::vector<AlignElement> elements_;
    std::vector<std::size_t> offsets_;
};

struct ScoredWord {
    std::size_t index;
    std::string word;
    double score;
};

// Scores query against every primary pronunciation. Sorted by descending score,
// ties by word. top == 0 keeps every row. The result does not depend on threads.
std::vector<ScoredWord> similarity_scan(const Pronunciation& query, const EncodedLexicon& index, std::size_t top = 0,
                                        unsigned threads = 1);
std::vector<ScoredWord> similarity_scan(const Pronunciation& query, const Lexicon& lexicon,
                                        const SimilarityConfig& cfg, std::size_t top = 0, unsigned threads = 1);

// "word<TAB>score" lines, scores at 4 decimals.
void write_scan_tsv(std::ostream& out, std::span<const ScoredWord> results);

} // namespace phonosim
