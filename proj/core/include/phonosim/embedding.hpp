#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phonosim/lexicon.hpp"
#include "phonosim/similarity.hpp"

namespace phonosim {

// k x d word vectors, row i belonging to words()[i].
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::vector<std::string> words, std::size_t dim, std::string fingerprint);
    EmbeddingMatrix(std::vector<std::string> words, std::size_t dim, std::vector<double> values,
                    std::string fingerprint);

    std::size_t size() const noexcept { return words_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::string>& words() const noexcept { return words_; }
    const std::string& word(std::size_t i) const { return words_.at(i); }
    const std::string& fingerprint() const noexcept { return fingerprint_; }
    std::optional<std::size_t> index_of(std::string_view word) const;

    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * dim_, dim_}; }
    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * dim_, dim_}; }
    std::span<const double> values() const noexcept { return values_; }

    // Text layout: "k d fingerprint", then k lines "word v1 ... vd" at 6 decimals.
    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static EmbeddingMatrix load(std::istream& in);
    static EmbeddingMatrix load(const std::filesystem::path& path);

private:
    void build_index();

    std::vector<std::string> words_;
    std::size_t dim_ = 0;
    std::vector<double> values_;
    std::string fingerprint_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct TrainConfig {
    std::size_t dim = 50;
    std::size_t epochs = 10;
    std::size_t batch_size = 1024;
    // Linear decay from learning_rate to final_learning_rate over the whole run.
    double learning_rate = 0.05;
    double final_learning_rate = 0.001;
    // Share of sampled pairs that are (i, i).
    double self_pair_fraction = 0.1;
    // Pairs per epoch are sized so each word takes part in about this many.
    std::size_t word_visits_per_epoch = 2000;
    std::uint64_t rng_seed = 1;
    // Workers computing similarity targets. Updates are applied in sampling
    // order, so the result is identical for any worker count.
    unsigned threads = 1;

    void validate() const;
};

struct IndexPair {
    std::size_t i;
    std::size_t j;
};

// Similarity target for a pair of rows. Must be safe to call concurrently.
using TargetFn = std::function<double(std::size_t, std::size_t)>;

struct TrainStats {
    std::vector<double> epoch_loss; // mean squared error of sampled pairs, before each update
    std::size_t pairs_seen = 0;
};

// Loss sum over pairs of (v_i . v_j - t)^2 and its gradient with respect to
// every entry of `vectors` (row-major k x dim). `gradient` is overwritten.
double batch_loss_gradient(std::span<const double> vectors, std::size_t dim, std::span<const IndexPair> pairs,
                           std::span<const double> targets, std::span<double> gradient);
double batch_loss(std::span<const double> vectors, std::size_t dim, std::span<const IndexPair> pairs,
                  std::span<const double> targets);

// Learns k x dim vectors whose dot products approximate target(i, j).
// Returns the row-major matrix.
std::vector<double> factorize(std::size_t k, const TargetFn& target, const TrainConfig& cfg,
                              TrainStats* stats = nullptr);

// W_S^V of the primary pronunciations of rows i and j; nothing is cached.
double target_similarity(std::size_t i, std::size_t j, const EncodedLexicon& index);

std::string config_fingerprint(const SimilarityConfig& sim, const Inventory& inventory);

EmbeddingMatrix train(const Lexicon& lexicon, const SimilarityConfig& sim, const TrainConfig& cfg,
                      TrainStats* stats = nullptr);

// Mean |v_i . v_j - target(i, j)| over the given pairs.
double mean_abs_error(const EmbeddingMatrix& emb, const TargetFn& target, std::span<const IndexPair> pairs);

// Throws InputError on a zero vector or a size mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
    std::size_t index;
    std::string word;
    double cosine;
};

// Exact top-n rows by cosine to `query`; ties by row order; rows in `exclude` skipped.
std::vector<Neighbor> nearest(std::span<const double> query, const EmbeddingMatrix& emb, std::size_t n,
                              std::span<const std::size_t> exclude = {});

// Top-n candidates for b - a + c. With exclude_inputs, a, b and c are never returned.
std::vector<Neighbor> analogy(std::string_view a, std::string_view b, std::string_view c,
                              const EmbeddingMatrix& emb, std::size_t n = 1, bool exclude_inputs = true);

} // namespace phonosim
