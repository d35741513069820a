// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "phonosim/embedding.hpp"
#include "phonosim/evaluation.hpp"
#include "phonosim/feature_set.hpp"
#include "phonosim/similarity.hpp"

namespace fs = std::filesystem;
using namespace phonosim;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<std::string> symbols(const Pronunciation& p) { return fixtures::symbols(p, *fixtures::english()); }

const oracle::Table& table() {
    static const oracle::Table t(fixtures::data_path("en_features.txt"));
    return t;
}

// 1
Outcome kernel_oracle() {
    const auto t0 = Clock::now();
    const auto& lex = fixtures::cmu();
    std::vector<std::size_t> short_rows;
    for (std::size_t i = 0; i < lex.size(); ++i)
        if (lex.primary(i).size() <= 11) short_rows.push_back(i);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, short_rows.size() - 1);

    struct Variant {
        bool bigram, vowel;
        double p;
    };
    const Variant variants[] = {{true, true, 2.5}, {true, false, 2.5}, {false, false, 2.5}, {true, true, 1.0},
                                {false, false, 1.0}};
    double worst = 0.0;
    std::size_t compared = 0;
    while (compared < 100000) {
        const auto& a = lex.primary(short_rows[pick(rng)]);
        const auto& b = lex.primary(short_rows[pick(rng)]);
        if (a.size() + b.size() > 12) continue;
        const auto& v = variants[compared % std::size(variants)];
        SimilarityConfig cfg;
        cfg.gram_mode = v.bigram ? GramMode::bigram : GramMode::unigram;
        cfg.vowel_weighted = v.vowel;
        cfg.penalty = v.p;
        const double fast = word_similarity(a, b, cfg, *fixtures::english());
        const double slow = oracle::word_similarity(table(), symbols(a), symbols(b), v.bigram, v.vowel, v.p);
        worst = std::max(worst, std::abs(fast - slow));
        ++compared;
    }
    const double secs = elapsed(t0);
    return {worst <= 1e-12 && secs <= 120.0,
            fmt("%zu pairs, max |diff| = %.3g (limit 1e-12), %.1f s (limit 120 s)", compared, worst, secs)};
}

// 2
Outcome range_symmetry_identity() {
    const auto t0 = Clock::now();
    const auto& lex = fixtures::cmu();
    const EncodedLexicon index(lex, SimilarityConfig{});
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, lex.size() - 1);
    std::size_t out_of_range = 0, asymmetric = 0, not_identity = 0;
    double lo = 1.0, hi = 0.0, worst_asym = 0.0;
    std::string example;
    for (std::size_t t = 0; t < 100000; ++t) {
        const std::size_t i = pick(rng), j = pick(rng);
        const double ab = index.score(i, j), ba = index.score(j, i);
        lo = std::min(lo, ab);
        hi = std::max(hi, ab);
        if (ab < 0.0 || ab > 1.0) {
            if (out_of_range++ == 0) example = fmt(" e.g. %s/%s = %.6f", lex.word(i).c_str(), lex.word(j).c_str(), ab);
        }
        worst_asym = std::max(worst_asym, std::abs(ab - ba));
        if (std::abs(ab - ba) > 1e-12) ++asymmetric;
        if (index.score(i, i) != 1.0) ++not_identity;
    }
    const double secs = elapsed(t0);
    return {out_of_range == 0 && asymmetric == 0 && not_identity == 0 && secs <= 60.0,
            fmt("1e5 pairs at p=2.5: range [%.6f, %.6f], %zu out of [0,1]%s; max asymmetry %.3g, %zu over 1e-12; "
                "%zu self-scores != 1; %.1f s (limit 60 s)",
                lo, hi, out_of_range, example.c_str(), worst_asym, asymmetric, not_identity, secs)};
}

// 3
Outcome vitz_ordering() {
    fs::path dir = fixtures::data_path("vitz");
    if (const char* env = std::getenv("PHONOSIM_VITZ_DIR"); env && *env) dir = env;
    std::vector<JudgmentSet> sets;
    try {
        sets = load_judgment_dir(dir);
    } catch (const std::exception& e) {
        return {false, std::string("cannot read judgment sets: ") + e.what()};
    }
    if (sets.size() != 4)
        return {false, fmt("expected 4 judgment sets in %s, found %zu (human judgment data not available)",
                           dir.string().c_str(), sets.size())};
    const auto& lex = fixtures::cmu();
    SimilarityConfig uni;
    uni.gram_mode = GramMode::unigram;
    uni.vowel_weighted = false;
    uni.penalty = 1.0;
    const auto ours = vitz_eval(sets, lexicon_scorer(lex, SimilarityConfig{}));
    const auto base = vitz_eval(sets, lexicon_scorer(lex, uni));
    const std::vector<double> ps{1.0, 2.5};
    const auto sweep = penalty_sweep(sets, lex, ps);
    bool ok = sweep[1].mean_r > sweep[0].mean_r;
    std::string detail;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        ok = ok && ours[s].r > base[s].r;
        detail += fmt("%s %.3f vs %.3f; ", sets[s].standard_word.c_str(), ours[s].r, base[s].r);
    }
    detail += fmt("mean r p=2.5 %.3f vs p=1 %.3f", sweep[1].mean_r, sweep[0].mean_r);
    return {ok, detail};
}

// 4
Outcome jaccard_oracle() {
    const auto& inv = *fixtures::english();
    const auto universe = inv.feature_universe();
    std::mt19937_64 rng(11);
    std::bernoulli_distribution coin(0.3);
    std::size_t mismatches = 0, n = 0;
    for (; n < 10000; ++n) {
        oracle::Features sa, sb;
        std::vector<std::string> la, lb;
        for (const auto& f : universe) {
            if (coin(rng)) la.push_back(f), sa.insert(f);
            if (coin(rng)) lb.push_back(f), sb.insert(f);
        }
        if (sa.empty() && sb.empty()) sa.insert(universe.front()), la.push_back(universe.front());
        const double fast = jaccard(inv.make_set(la), inv.make_set(lb));
        if (fast != oracle::jaccard(sa, sb)) ++mismatches;
    }
    return {mismatches == 0, fmt("%zu random pairs, %zu mismatches", n, mismatches)};
}

// 5
Outcome gradient_check() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> row(0, 4);
    double worst = 0.0;
    const std::size_t k = 5, d = 3;
    for (int instance = 0; instance < 50; ++instance) {
        std::vector<double> v(k * d);
        for (auto& x : v) x = u(rng);
        std::vector<IndexPair> pairs;
        std::vector<double> targets;
        for (int p = 0; p < 16; ++p) {
            pairs.push_back({row(rng), row(rng)});
            targets.push_back(0.5 * (u(rng) + 1.0));
        }
        std::vector<double> grad(v.size());
        batch_loss_gradient(v, d, pairs, targets, grad);
        for (std::size_t c = 0; c < v.size(); ++c) {
            const double h = 1e-6;
            auto plus = v, minus = v;
            plus[c] += h;
            minus[c] -= h;
            const double numeric = (batch_loss(plus, d, pairs, targets) - batch_loss(minus, d, pairs, targets)) / (2 * h);
            const double scale = std::max({std::abs(numeric), std::abs(grad[c]), 1e-3});
            worst = std::max(worst, std::abs(numeric - grad[c]) / scale);
        }
    }
    return {worst <= 1e-5, fmt("50 instances k=5 d=3, max relative error %.3g (limit 1e-5)", worst)};
}

// 6
Outcome desk_fidelity() {
    const auto t0 = Clock::now();
    const auto& full = fixtures::cmu();
    std::vector<std::size_t> all(full.size()), rows;
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::mt19937_64 pick_rng(6);
    std::sample(all.begin(), all.end(), std::back_inserter(rows), 5000, pick_rng);
    const auto lex = full.subset(rows);

    TrainConfig cfg;
    cfg.dim = 50;
    cfg.rng_seed = 6;
    const auto emb = train(lex, SimilarityConfig{}, cfg);

    const EncodedLexicon index(lex, SimilarityConfig{});
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, lex.size() - 1);
    std::vector<IndexPair> pairs;
    while (pairs.size() < 10000) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i != j) pairs.push_back({i, j});
    }
    const double mae =
        mean_abs_error(emb, [&](std::size_t i, std::size_t j) { return index.score(i, j); }, pairs);
    const double secs = elapsed(t0);
    return {mae <= 0.1 && secs <= 600.0,
            fmt("5000 words, d=50: mean |v_i.v_j - W| = %.4f on 1e4 pairs (limit 0.1), %.1f s (limit 600 s)", mae, secs)};
}

// 7
Outcome pun_spot_values() {
    const auto t0 = Clock::now();
    const auto& lex = fixtures::cmu();
    TrainConfig cfg;
    cfg.rng_seed = 7;
    cfg.threads = 0;
    const auto emb = train(lex, SimilarityConfig{}, cfg);
    auto cos = [&](const char* a, const char* b) {
        return cosine(emb.row(*emb.index_of(a)), emb.row(*emb.index_of(b)));
    };
    const double mm = cos("mutter", "mother");
    const double tt = cos("truffle", "trouble");
    const auto pairs = load_pun_pairs(fs::path(fixtures::data_path("puns.tsv")));
    const auto report = pun_eval(pairs, emb);
    const auto baseline = random_baseline(emb, 10000, 7);
    const double gap = report.stats.mean - baseline.mean;
    const bool ok = std::abs(mm - 0.8993) <= 0.15 && std::abs(tt - 0.9629) <= 0.15 && gap >= 0.3;
    return {ok, fmt("cos(mutter,mother) = %.4f (0.8993 +- 0.15), cos(truffle,trouble) = %.4f (0.9629 +- 0.15), "
                    "pun mean %.4f over %zu pairs - random mean %.4f = %.4f (limit >= 0.3), %.0f s",
                    mm, tt, report.stats.mean, report.stats.count, baseline.mean, gap, elapsed(t0))};
}

// 8
Outcome lexicon_scale() {
    const auto n = static_cast<double>(fixtures::cmu().size());
    const double rel = (n - 133859.0) / 133859.0;
    return {std::abs(rel) <= 0.03, fmt("%.0f headwords vs 133859 (%+.2f%%, limit +-3%%)", n, 100.0 * rel)};
}

// 9
Outcome scan_budget() {
    const auto& lex = fixtures::cmu();
    const auto query = *lex.index_of("sinking");
    double total = 0.0, worst = 0.0;
    for (int r = 0; r < 5; ++r) {
        const auto t0 = Clock::now();
        const auto hits = similarity_scan(lex.primary(query), lex, SimilarityConfig{}, 10, 1);
        const double s = elapsed(t0);
        total += s;
        worst = std::max(worst, s);
        if (hits.empty() || hits.front().word != "sinking") return {false, "scan did not rank the query first"};
    }
    const double mean = total / 5.0;
    return {mean <= 5.0, fmt("%zu words, mean %.3f s over 5 runs (slowest %.3f s, limit 5 s)", lex.size(), mean, worst)};
}

// 10
Outcome train_determinism() {
    const fs::path dir = fs::temp_directory_path() / ("phonosim_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    ::setenv("PHONOSIM_DATA_DIR", PHONOSIM_TEST_DATA_DIR, 1);
    auto run_once = [&](const std::string& name) {
        const std::vector<std::string> args{"phonosim", "train", "--subset", "3000", "--dim", "20",
                                            "--epochs", "3", "--seed", "42", "--threads", "1",
                                            "--out", (dir / name).string()};
        std::ostringstream out, err;
        return cli::run(args, out, err);
    };
    const int a = run_once("a.emb"), b = run_once("b.emb");
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const auto fa = slurp(dir / "a.emb"), fb = slurp(dir / "b.emb");
    fs::remove_all(dir);
    const bool ok = a == 0 && b == 0 && !fa.empty() && fa == fb;
    return {ok, fmt("exit codes %d/%d, %zu bytes, files %s", a, b, fa.size(), fa == fb ? "identical" : "differ")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "Run just these criteria (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "kernel matches recursive oracle", kernel_oracle},
        {2, "range, symmetry and identity", range_symmetry_identity},
        {3, "human judgment ordering", vitz_ordering},
        {4, "bit-parallel Jaccard matches set oracle", jaccard_oracle},
        {5, "trainer gradient check", gradient_check},
        {6, "desk-scale embedding fidelity", desk_fidelity},
        {7, "pun spot values", pun_spot_values},
        {8, "lexicon scale", lexicon_scale},
        {9, "full scan time budget", scan_budget},
        {10, "training determinism", train_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << o.detail << std::endl;
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
