#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "phonosim/embedding.hpp"

using namespace phonosim;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Lexicon tiny_lexicon(const std::vector<std::pair<std::string, std::string>>& rows) {
    Lexicon lex(fixtures::english());
    for (const auto& [w, p] : rows) lex.add(w, fixtures::pron(p));
    return lex;
}

std::string saved(const EmbeddingMatrix& emb) {
    std::ostringstream out;
    emb.save(out);
    return out.str();
}

} // namespace

TEST_CASE("analytic batch gradient matches central finite differences") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> row(0, 4);
    for (int instance = 0; instance < 20; ++instance) {
        const std::size_t k = 5, d = 3;
        std::vector<double> v(k * d);
        for (auto& x : v) x = u(rng);
        std::vector<IndexPair> pairs;
        std::vector<double> targets;
        for (int p = 0; p < 12; ++p) {
            pairs.push_back({row(rng), row(rng)});
            targets.push_back(0.5 * (u(rng) + 1.0));
        }
        pairs.push_back({2, 2});
        targets.push_back(1.0);

        std::vector<double> grad(v.size());
        batch_loss_gradient(v, d, pairs, targets, grad);
        const double h = 1e-6;
        for (std::size_t c = 0; c < v.size(); ++c) {
            auto plus = v, minus = v;
            plus[c] += h;
            minus[c] -= h;
            const double numeric = (batch_loss(plus, d, pairs, targets) - batch_loss(minus, d, pairs, targets)) / (2 * h);
            const double scale = std::max({std::abs(numeric), std::abs(grad[c]), 1e-3});
            CHECK(std::abs(numeric - grad[c]) / scale <= 1e-5);
        }
    }
}

TEST_CASE("two identical words converge to a shared unit vector") {
    const auto lex = tiny_lexicon({{"cat", "K AE T"}, {"kat", "K AE T"}});
    TrainConfig cfg;
    cfg.dim = 2;
    cfg.epochs = 20;
    const auto emb = train(lex, SimilarityConfig{}, cfg);
    CHECK(dot(emb.row(0), emb.row(1)) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(dot(emb.row(0), emb.row(0)) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("single word learns a unit norm") {
    const auto lex = tiny_lexicon({{"cat", "K AE T"}});
    TrainConfig cfg;
    cfg.dim = 1;
    cfg.epochs = 20;
    const auto emb = train(lex, SimilarityConfig{}, cfg);
    CHECK(std::abs(dot(emb.row(0), emb.row(0)) - 1.0) <= 0.01);
}

TEST_CASE("exactly factorizable targets are recovered") {
    // M = U U^T with U 3 x 2
    const double U[3][2] = {{0.9, 0.1}, {0.3, 0.8}, {0.6, 0.5}};
    auto target = [&](std::size_t i, std::size_t j) { return U[i][0] * U[j][0] + U[i][1] * U[j][1]; };
    TrainConfig cfg;
    cfg.dim = 2;
    cfg.epochs = 50;
    cfg.self_pair_fraction = 0.3;
    TrainStats stats;
    const auto v = factorize(3, target, cfg, &stats);
    double loss = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double vv = v[i * 2] * v[j * 2] + v[i * 2 + 1] * v[j * 2 + 1];
            loss += (vv - target(i, j)) * (vv - target(i, j));
        }
    CHECK(loss < 1e-3);
    CHECK(stats.epoch_loss.back() < 1e-3);
}

TEST_CASE("training errors") {
    const auto lex = tiny_lexicon({{"cat", "K AE T"}, {"bat", "B AE T"}});
    TrainConfig cfg;
    cfg.dim = 3;
    CHECK_THROWS_AS(train(lex, SimilarityConfig{}, cfg), InputError);
    CHECK_THROWS_AS(train(Lexicon(fixtures::english()), SimilarityConfig{}, TrainConfig{}), InputError);
    cfg.dim = 2;
    cfg.self_pair_fraction = 1.5;
    CHECK_THROWS_AS(train(lex, SimilarityConfig{}, cfg), InputError);

    TrainConfig wild;
    wild.dim = 2;
    wild.learning_rate = 1e6;
    wild.final_learning_rate = 1e6;
    auto target = [](std::size_t, std::size_t) { return 1.0; };
    CHECK_THROWS_WITH_AS(factorize(4, target, wild), doctest::Contains("non-finite loss"), Error);
}

TEST_CASE("training is deterministic and independent of worker count") {
    const auto& full = fixtures::cmu();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < 400; ++i) rows.push_back(i * 211);
    const auto lex = full.subset(rows);
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 3;
    cfg.word_visits_per_epoch = 50;
    cfg.rng_seed = 17;
    const auto a = train(lex, SimilarityConfig{}, cfg);
    const auto b = train(lex, SimilarityConfig{}, cfg);
    CHECK(saved(a) == saved(b));
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    cfg.threads = 3;
    const auto c = train(lex, SimilarityConfig{}, cfg);
    CHECK(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
    cfg.rng_seed = 18;
    cfg.threads = 1;
    CHECK(saved(train(lex, SimilarityConfig{}, cfg)) != saved(a));
}

TEST_CASE("epoch loss decreases on a dictionary sample") {
    const auto& full = fixtures::cmu();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < 1000; ++i) rows.push_back(i * 123);
    const auto lex = full.subset(rows);
    TrainConfig cfg;
    cfg.dim = 20;
    cfg.epochs = 10;
    cfg.word_visits_per_epoch = 100;
    TrainStats stats;
    train(lex, SimilarityConfig{}, cfg, &stats);
    REQUIRE(stats.epoch_loss.size() == 10);
    for (std::size_t e = 1; e < stats.epoch_loss.size(); ++e) CHECK(stats.epoch_loss[e] <= stats.epoch_loss[e - 1]);
}

TEST_CASE("targets are computed on the fly from the lexicon") {
    const auto& lex = fixtures::cmu();
    const EncodedLexicon index(lex, SimilarityConfig{});
    const auto i = *lex.index_of("mutter");
    const auto j = *lex.index_of("mother");
    CHECK(target_similarity(i, i, index) == 1.0);
    CHECK(target_similarity(i, j, index) == target_similarity(j, i, index));
    CHECK(target_similarity(i, j, index) == word_similarity(lex.primary(i), lex.primary(j), SimilarityConfig{}, lex.inventory()));
}

TEST_CASE("embedding file round trip") {
    EmbeddingMatrix emb({"cat", "bat", "mat"}, 2, {0.1234567, -0.5, 1.0, 0.0, -0.0000004, 2.5}, "00ff00ff00ff00ff");
    const auto first = saved(emb);
    CHECK(first.substr(0, first.find('\n')) == "3 2 00ff00ff00ff00ff");
    CHECK(first.find("cat 0.123457 -0.500000") != std::string::npos);

    std::istringstream in(first);
    const auto loaded = EmbeddingMatrix::load(in);
    CHECK(loaded.fingerprint() == emb.fingerprint());
    CHECK(loaded.size() == 3);
    CHECK(saved(loaded) == first);

    std::istringstream truncated("3 2 abc\ncat 0.1 0.2\nbat 0.3\n");
    CHECK_THROWS_AS(EmbeddingMatrix::load(truncated), ParseError);
    std::istringstream short_body("3 2 abc\ncat 0.1 0.2\nbat 0.3 0.4\n");
    CHECK_THROWS_AS(EmbeddingMatrix::load(short_body), ParseError);
    std::istringstream long_body("1 2 abc\ncat 0.1 0.2\nbat 0.3 0.4\n");
    CHECK_THROWS_AS(EmbeddingMatrix::load(long_body), ParseError);
    std::istringstream wide("1 2 abc\ncat 0.1 0.2 0.3\n");
    CHECK_THROWS_AS(EmbeddingMatrix::load(wide), ParseError);
    std::istringstream bad_header("two 2 abc\n");
    CHECK_THROWS_AS(EmbeddingMatrix::load(bad_header), ParseError);
}

TEST_CASE("fingerprint tracks configuration and inventory") {
    SimilarityConfig a, b;
    b.penalty = 2.0;
    CHECK(config_fingerprint(a, *fixtures::english()) == config_fingerprint(a, *fixtures::english()));
    CHECK(config_fingerprint(a, *fixtures::english()) != config_fingerprint(b, *fixtures::english()));
    b = a;
    b.vowel_weighted = false;
    CHECK(config_fingerprint(a, *fixtures::english()) != config_fingerprint(b, *fixtures::english()));
    CHECK(config_fingerprint(a, *fixtures::english()).size() == 16);
}

TEST_CASE("cosine") {
    const std::vector<double> v{1.0, 2.0, -3.0};
    const std::vector<double> neg{-1.0, -2.0, 3.0};
    const std::vector<double> orth{2.0, -1.0, 0.0};
    CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(v, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(cosine(v, orth) == 0.0);
    CHECK_THROWS_AS(cosine(v, std::vector<double>{0.0, 0.0, 0.0}), InputError);
}

TEST_CASE("nearest neighbours and analogies") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    const std::size_t k = 1000, d = 16;
    std::vector<std::string> words;
    std::vector<double> values(k * d);
    for (std::size_t i = 0; i < k; ++i) words.push_back("w" + std::to_string(i));
    for (auto& x : values) x = g(rng);
    const EmbeddingMatrix emb(words, d, values, "test");

    const auto self = nearest(emb.row(42), emb, 1);
    REQUIRE(self.size() == 1);
    CHECK(self[0].word == "w42");
    CHECK(self[0].cosine == doctest::Approx(1.0));
    CHECK(nearest(emb.row(0), emb, 5000).size() == k);
    CHECK_THROWS_AS(nearest(emb.row(0), emb, 0), InputError);

    const std::size_t skip[] = {42};
    CHECK(nearest(emb.row(42), emb, 1, skip)[0].word != "w42");

    const auto top = nearest(emb.row(7), emb, 5);
    std::vector<std::pair<double, std::size_t>> brute;
    for (std::size_t i = 0; i < k; ++i) brute.emplace_back(cosine(emb.row(7), emb.row(i)), i);
    std::sort(brute.begin(), brute.end(), [](auto& x, auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
    for (std::size_t r = 0; r < 5; ++r) {
        CHECK(top[r].index == brute[r].second);
        CHECK(top[r].cosine == doctest::Approx(brute[r].first).epsilon(1e-12));
    }

    CHECK(analogy("w1", "w2", "w1", emb, 1, false)[0].word == "w2");
    CHECK(analogy("w1", "w1", "w3", emb, 1, false)[0].word == "w3");
    for (const auto& n : analogy("w1", "w2", "w3", emb, 10, true)) {
        CHECK(n.word != "w1");
        CHECK(n.word != "w2");
        CHECK(n.word != "w3");
    }
    CHECK_THROWS_AS(analogy("w1", "nope", "w3", emb), InputError);
}

TEST_CASE("ties in nearest are broken by row order") {
    const EmbeddingMatrix emb({"a", "b", "c"}, 2, {1.0, 0.0, 2.0, 0.0, 0.0, 1.0}, "t");
    const std::vector<double> q{1.0, 0.0};
    const auto top = nearest(q, emb, 3);
    CHECK(top[0].word == "a");
    CHECK(top[1].word == "b");
    CHECK(top[2].word == "c");
}
