#include "phonosim/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "phonosim/digest.hpp"
#include "phonosim/parallel.hpp"

namespace phonosim {

// ---------------------------------------------------------------------------
// EmbeddingMatrix

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words, std::size_t dim, std::string fingerprint)
    : EmbeddingMatrix(std::move(words), dim, {}, std::move(fingerprint)) {}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words, std::size_t dim, std::vector<double> values,
                                 std::string fingerprint)
    : words_(std::move(words)), dim_(dim), values_(std::move(values)), fingerprint_(std::move(fingerprint)) {
    if (dim_ == 0) throw InputError("embedding dimension must be positive");
    if (values_.empty()) values_.assign(words_.size() * dim_, 0.0);
    if (values_.size() != words_.size() * dim_) throw InputError("embedding values do not match k x d");
    build_index();
}

void EmbeddingMatrix::build_index() {
    index_.clear();
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (!index_.try_emplace(words_[i], i).second) throw InputError("duplicate embedding word '" + words_[i] + "'");
}

std::optional<std::size_t> EmbeddingMatrix::index_of(std::string_view word) const {
    if (auto it = index_.find(fold_case(word)); it != index_.end()) return it->second;
    if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
    return std::nullopt;
}

void EmbeddingMatrix::save(std::ostream& out) const {
    if (fingerprint_.empty() || fingerprint_.find_first_of(" \t\n") != std::string::npos)
        throw Error("embedding fingerprint must be a single non-empty token");
    out << size() << ' ' << dim_ << ' ' << fingerprint_ << '\n';
    char buf[64];
    for (std::size_t i = 0; i < size(); ++i) {
        out << words_[i];
        for (double v : row(i)) {
            std::snprintf(buf, sizeof buf, " %.6f", v);
            out << buf;
        }
        out << '\n';
    }
}

void EmbeddingMatrix::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    save(out);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

EmbeddingMatrix EmbeddingMatrix::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("missing embedding header", 1);
    std::istringstream hs(header);
    long long k = -1, d = -1;
    std::string fingerprint, extra;
    if (!(hs >> k >> d >> fingerprint) || (hs >> extra) || k < 0 || d <= 0)
        throw ParseError("embedding header must be 'k d fingerprint'", 1);

    std::vector<std::string> words;
    std::vector<double> values;
    words.reserve(static_cast<std::size_t>(k));
    values.reserve(static_cast<std::size_t>(k * d));
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (words.size() == static_cast<std::size_t>(k))
            throw ParseError("more rows than the header's word count " + std::to_string(k), lineno);
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        for (long long c = 0; c < d; ++c) {
            double v;
            if (!(ls >> v)) throw ParseError("expected " + std::to_string(d) + " values for '" + word + "'", lineno);
            if (!std::isfinite(v)) throw ParseError("non-finite value for '" + word + "'", lineno);
            values.push_back(v);
        }
        if (ls >> extra) throw ParseError("more than " + std::to_string(d) + " values for '" + word + "'", lineno);
        words.push_back(std::move(word));
    }
    if (words.size() != static_cast<std::size_t>(k))
        throw ParseError("header declares " + std::to_string(k) + " words but file has " +
                             std::to_string(words.size()),
                         0);
    return EmbeddingMatrix(std::move(words), static_cast<std::size_t>(d), std::move(values), std::move(fingerprint));
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open embedding file '" + path.string() + "'");
    try {
        return load(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

// ---------------------------------------------------------------------------
// Training

void TrainConfig::validate() const {
    if (dim == 0 || epochs == 0 || batch_size == 0 || word_visits_per_epoch == 0)
        throw InputError("dim, epochs, batch size and visits per epoch must be positive");
    if (!(learning_rate > 0) || !(final_learning_rate > 0) || !std::isfinite(learning_rate) ||
        !std::isfinite(final_learning_rate))
        throw InputError("learning rates must be positive");
    if (!(self_pair_fraction >= 0.0 && self_pair_fraction <= 1.0))
        throw InputError("self-pair fraction must lie in [0, 1]");
}

namespace {

inline double dot(const double* a, const double* b, std::size_t d) noexcept {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += a[c] * b[c];
    return s;
}

} // namespace

double batch_loss(std::span<const double> vectors, std::size_t dim, std::span<const IndexPair> pairs,
                  std::span<const double> targets) {
    double loss = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double err = dot(&vectors[pairs[p].i * dim], &vectors[pairs[p].j * dim], dim) - targets[p];
        loss += err * err;
    }
    return loss;
}

double batch_loss_gradient(std::span<const double> vectors, std::size_t dim, std::span<const IndexPair> pairs,
                           std::span<const double> targets, std::span<double> gradient) {
    if (gradient.size() != vectors.size() || targets.size() != pairs.size())
        throw Error("batch_loss_gradient: size mismatch");
    std::fill(gradient.begin(), gradient.end(), 0.0);
    double loss = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double* vi = &vectors[pairs[p].i * dim];
        const double* vj = &vectors[pairs[p].j * dim];
        const double err = dot(vi, vj, dim) - targets[p];
        loss += err * err;
        double* gi = &gradient[pairs[p].i * dim];
        double* gj = &gradient[pairs[p].j * dim];
        // i == j accumulates twice, giving d/dv (v.v - t)^2 = 4 err v
        for (std::size_t c = 0; c < dim; ++c) {
            gi[c] += 2.0 * err * vj[c];
            gj[c] += 2.0 * err * vi[c];
        }
    }
    return loss;
}

std::vector<double> factorize(std::size_t k, const TargetFn& target, const TrainConfig& cfg, TrainStats* stats) {
    cfg.validate();
    if (k == 0) throw InputError("cannot train on an empty word list");
    if (cfg.dim > k)
        throw InputError("embedding dimension " + std::to_string(cfg.dim) + " exceeds word count " +
                         std::to_string(k));

    const std::size_t d = cfg.dim;
    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<double> v(k * d);
    {
        const double bound = 1.0 / std::sqrt(static_cast<double>(d));
        std::uniform_real_distribution<double> init(-bound, bound);
        for (auto& x : v) x = init(rng);
    }

    const std::size_t pairs_per_epoch = std::max<std::size_t>(1, (k * cfg.word_visits_per_epoch + 1) / 2);
    const double total = static_cast<double>(pairs_per_epoch * cfg.epochs);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> any_row(0, k - 1);
    std::uniform_int_distribution<std::size_t> other_row(0, k > 1 ? k - 2 : 0);

    std::vector<IndexPair> batch;
    std::vector<double> targets;
    std::vector<double> old_i(d);
    std::size_t step = 0;
    if (stats) stats->epoch_loss.clear();

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t done = 0; done < pairs_per_epoch; done += batch.size()) {
            const std::size_t count = std::min(cfg.batch_size, pairs_per_epoch - done);
            batch.resize(count);
            for (auto& pair : batch) {
                const std::size_t i = any_row(rng);
                if (k == 1 || coin(rng) < cfg.self_pair_fraction) {
                    pair = {i, i};
                } else {
                    std::size_t j = other_row(rng);
                    if (j >= i) ++j;
                    pair = {i, j};
                }
            }
            targets.resize(count);
            parallel_for(count, cfg.threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t p = begin; p < end; ++p) targets[p] = target(batch[p].i, batch[p].j);
            });

            for (std::size_t p = 0; p < count; ++p, ++step) {
                const double lr =
                    cfg.learning_rate + (cfg.final_learning_rate - cfg.learning_rate) * static_cast<double>(step) / total;
                double* vi = &v[batch[p].i * d];
                double* vj = &v[batch[p].j * d];
                const double err = dot(vi, vj, d) - targets[p];
                epoch_loss += err * err;
                const double scale = 2.0 * lr * err;
                if (vi == vj) {
                    for (std::size_t c = 0; c < d; ++c) vi[c] -= 2.0 * scale * vi[c];
                } else {
                    std::copy(vi, vi + d, old_i.begin());
                    for (std::size_t c = 0; c < d; ++c) vi[c] -= scale * vj[c];
                    for (std::size_t c = 0; c < d; ++c) vj[c] -= scale * old_i[c];
                }
            }
            if (!std::isfinite(epoch_loss)) {
                std::ostringstream msg;
                msg << "training diverged: non-finite loss in epoch " << epoch + 1 << " after " << step
                    << " pair updates (learning rate " << cfg.learning_rate << ")";
                throw Error(msg.str());
            }
        }
        if (stats) stats->epoch_loss.push_back(epoch_loss / static_cast<double>(pairs_per_epoch));
    }
    if (stats) stats->pairs_seen = step;
    return v;
}

double target_similarity(std::size_t i, std::size_t j, const EncodedLexicon& index) { return index.score(i, j); }

std::string config_fingerprint(const SimilarityConfig& sim, const Inventory& inventory) {
    return to_hex(fnv1a64(inventory.canonical(), fnv1a64(sim.describe())));
}

EmbeddingMatrix train(const Lexicon& lexicon, const SimilarityConfig& sim, const TrainConfig& cfg,
                      TrainStats* stats) {
    if (lexicon.empty()) throw InputError("cannot train on an empty lexicon");
    const EncodedLexicon index(lexicon, sim);
    auto values = factorize(
        lexicon.size(), [&index](std::size_t i, std::size_t j) { return target_similarity(i, j, index); }, cfg, stats);
    return EmbeddingMatrix(lexicon.words(), cfg.dim, std::move(values), config_fingerprint(sim, lexicon.inventory()));
}

double mean_abs_error(const EmbeddingMatrix& emb, const TargetFn& target, std::span<const IndexPair> pairs) {
    if (pairs.empty()) throw InputError("no pairs to evaluate");
    double sum = 0.0;
    for (const auto& p : pairs) {
        const auto a = emb.row(p.i);
        const auto b = emb.row(p.j);
        sum += std::abs(dot(a.data(), b.data(), emb.dim()) - target(p.i, p.j));
    }
    return sum / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Queries

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw InputError("cosine: vectors differ in length");
    const double uu = dot(u.data(), u.data(), u.size());
    const double vv = dot(v.data(), v.data(), v.size());
    if (uu == 0.0 || vv == 0.0) throw InputError("cosine: zero vector");
    const double c = dot(u.data(), v.data(), u.size()) / std::sqrt(uu * vv);
    return std::clamp(c, -1.0, 1.0);
}

std::vector<Neighbor> nearest(std::span<const double> query, const EmbeddingMatrix& emb, std::size_t n,
                              std::span<const std::size_t> exclude) {
    if (n == 0) throw InputError("nearest: n must be at least 1");
    if (query.size() != emb.dim()) throw InputError("nearest: query dimension mismatch");
    const double qq = dot(query.data(), query.data(), query.size());
    if (qq == 0.0) throw InputError("nearest: zero query vector");

    std::vector<char> skip(emb.size(), 0);
    for (auto e : exclude)
        if (e < skip.size()) skip[e] = 1;

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(emb.size());
    for (std::size_t i = 0; i < emb.size(); ++i) {
        if (skip[i]) continue;
        const auto r = emb.row(i);
        const double rr = dot(r.data(), r.data(), r.size());
        const double c = rr == 0.0 ? 0.0 : std::clamp(dot(query.data(), r.data(), r.size()) / std::sqrt(qq * rr), -1.0, 1.0);
        scored.emplace_back(c, i);
    }
    const std::size_t keep = std::min(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      [](const auto& x, const auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
    std::vector<Neighbor> out;
    out.reserve(keep);
    for (std::size_t r = 0; r < keep; ++r) out.push_back({scored[r].second, emb.word(scored[r].second), scored[r].first});
    return out;
}

std::vector<Neighbor> analogy(std::string_view a, std::string_view b, std::string_view c, const EmbeddingMatrix& emb,
                              std::size_t n, bool exclude_inputs) {
    std::size_t idx[3];
    const std::string_view names[3] = {a, b, c};
    for (int t = 0; t < 3; ++t) {
        auto found = emb.index_of(names[t]);
        if (!found) throw InputError("word '" + std::string(names[t]) + "' is not in the embedding");
        idx[t] = *found;
    }
    std::vector<double> query(emb.dim());
    const auto va = emb.row(idx[0]);
    const auto vb = emb.row(idx[1]);
    const auto vc = emb.row(idx[2]);
    for (std::size_t col = 0; col < emb.dim(); ++col) query[col] = vb[col] - va[col] + vc[col];
    if (exclude_inputs) return nearest(query, emb, n, idx);
    return nearest(query, emb, n);
}

} // namespace phonosim
