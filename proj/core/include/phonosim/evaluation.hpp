#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonosim/embedding.hpp"
#include "phonosim/lexicon.hpp"
#include "phonosim/similarity.hpp"

namespace phonosim {

// Pearson product-moment correlation. Throws InputError on length mismatch,
// fewer than two points, or zero variance in either series.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Human ratings of one standard word against comparison words, scaled to [0, 1].
struct JudgmentSet {
    std::string standard_word;
    std::vector<std::string> words;
    std::vector<double> human_scores;
};

// First non-comment line: standard word. Then "word<TAB>score" rows on the 0-4 scale.
JudgmentSet load_judgments(std::istream& in);
JudgmentSet load_judgments(const std::filesystem::path& path);
// Every *.tsv in the directory, ordered by file name.
std::vector<JudgmentSet> load_judgment_dir(const std::filesystem::path& dir);

using PairScorer = std::function<double(std::string_view, std::string_view)>;

// Scores primary pronunciations; throws InputError naming any word not in the lexicon.
PairScorer lexicon_scorer(const Lexicon& lexicon, const SimilarityConfig& cfg);
// Cosine of embedding rows; throws InputError naming any word not embedded.
PairScorer embedding_scorer(const EmbeddingMatrix& emb);

struct SetCorrelation {
    std::string standard_word;
    double r;
    std::size_t comparisons;
};

std::vector<SetCorrelation> vitz_eval(std::span<const JudgmentSet> sets, const PairScorer& scorer);

struct SweepRow {
    double penalty;
    double mean_r;
    std::vector<double> per_set;
};

// Bigram, vowel-weighted scorer at each penalty.
std::vector<SweepRow> penalty_sweep(std::span<const JudgmentSet> sets, const Lexicon& lexicon,
                                    std::span<const double> penalties);
void write_sweep_tsv(std::ostream& out, std::span<const SweepRow> rows, std::span<const JudgmentSet> sets);

struct DistributionStats {
    static constexpr std::size_t kBins = 40;

    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0; // population variance
    double min = 0.0;
    double max = 0.0;
    std::vector<std::size_t> histogram; // kBins equal-width bins over [-1, 1]
};

DistributionStats distribution(std::span<const double> values);

struct WordPair {
    std::string first;
    std::string second;
};

// "word1<TAB>word2" rows; '#' comments. Duplicates (unordered, case-insensitive) dropped.
std::vector<WordPair> load_pun_pairs(std::istream& in);
std::vector<WordPair> load_pun_pairs(const std::filesystem::path& path);

struct PairScore {
    std::string first;
    std::string second;
    double cosine;
    double similarity; // W_S^V of the pair when a lexicon was supplied, NaN otherwise
};

struct PunReport {
    DistributionStats stats;
    std::vector<PairScore> pairs; // descending cosine
    std::size_t skipped = 0;
    std::vector<std::string> missing_words;
};

// Cosine per pair; pairs with a word missing from the embedding are skipped
// and counted. With a lexicon, W_S^V is reported next to each cosine.
PunReport pun_eval(std::span<const WordPair> pairs, const EmbeddingMatrix& emb, const Lexicon* lexicon = nullptr,
                   const SimilarityConfig& cfg = {});

// Cosine statistics over n seeded uniform pairs of distinct rows.
DistributionStats random_baseline(const EmbeddingMatrix& emb, std::size_t n, std::uint64_t seed);

struct PublishedPairScore {
    std::string_view first;
    std::string_view second;
    double reference_baseline; // feature-bigram PCA vectors, for display only
    double published;
};

// Rows of the published pun score-difference table.
std::span<const PublishedPairScore> published_pun_scores();

void write_pair_scores_tsv(std::ostream& out, const PunReport& report);
void write_histogram_tsv(std::ostream& out, const DistributionStats& stats);
void write_distribution_summary(std::ostream& out, std::string_view label, const DistributionStats& stats);

} // namespace phonosim
