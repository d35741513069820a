#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "cli/manifest.hpp"
#include "phonosim/embedding.hpp"
#include "phonosim/evaluation.hpp"
#include "phonosim/inventory.hpp"
#include "phonosim/lexicon.hpp"
#include "phonosim/similarity.hpp"

#ifndef PHONOSIM_VERSION
#define PHONOSIM_VERSION "0.0.0"
#endif
#ifndef PHONOSIM_DEFAULT_DATA_DIR
#define PHONOSIM_DEFAULT_DATA_DIR "data"
#endif

namespace phonosim::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

fs::path data_dir() {
    if (const char* env = std::getenv("PHONOSIM_DATA_DIR"); env && *env) return env;
    return PHONOSIM_DEFAULT_DATA_DIR;
}

struct DataOptions {
    std::string lang = "en";
    std::string inventory;
    std::string lexicon;
    std::string format;
    bool letters_only = false;

    void attach(CLI::App& app) {
        app.add_option("--lang", lang, "Bundled language data")->check(CLI::IsMember({"en", "hi"}));
        app.add_option("--inventory", inventory, "Phoneme feature table (overrides --lang)");
        app.add_option("--lexicon", lexicon, "Pronunciation dictionary (overrides --lang)");
        app.add_option("--lexicon-format", format, "cmu or plain")->check(CLI::IsMember({"cmu", "plain"}));
        app.add_flag("--letters-only", letters_only,
                     "Skip headwords with characters other than letters, apostrophe, hyphen, period");
    }

    fs::path inventory_path() const {
        if (!inventory.empty()) return inventory;
        return data_dir() / (lang == "hi" ? "hi_features.txt" : "en_features.txt");
    }
    fs::path lexicon_path() const {
        if (!lexicon.empty()) return lexicon;
        return data_dir() / (lang == "hi" ? "hi_lexicon.tsv" : "cmudict-0.7b");
    }
    Lexicon::Format lexicon_format() const {
        if (!format.empty()) return format == "cmu" ? Lexicon::Format::cmu : Lexicon::Format::plain;
        return lang == "hi" ? Lexicon::Format::plain : Lexicon::Format::cmu;
    }

    std::shared_ptr<const Inventory> load_inventory() const {
        return std::make_shared<const Inventory>(Inventory::load_file(inventory_path(), lang));
    }
    Lexicon load_lexicon(std::shared_ptr<const Inventory> inv) const {
        ParseOptions opts;
        opts.letters_only = letters_only;
        return Lexicon::load_file(lexicon_path(), std::move(inv), lexicon_format(), opts);
    }
    void record(RunManifest& m) const {
        m.add_config("lang", lang);
        m.add_config("letters_only", letters_only ? "1" : "0");
        m.add_input(inventory_path());
        m.add_input(lexicon_path());
    }
};

struct ScoreOptions {
    double penalty = 2.5;
    bool unigram = false;
    bool no_vowel_weight = false;
    bool max_path = false;

    void attach(CLI::App& app) {
        app.add_option("--penalty", penalty, "Non-diagonal penalty p (>= 1)");
        app.add_flag("--unigram", unigram, "Align phonemes instead of bigrams (disables vowel weighting)");
        app.add_flag("--no-vowel-weight", no_vowel_weight, "Plain bigram Jaccard without vowel weighting");
        app.add_flag("--max-path", max_path, "Extend the larger neighbour instead of the smaller (experimental)");
    }

    SimilarityConfig config() const {
        SimilarityConfig cfg;
        cfg.penalty = penalty;
        cfg.gram_mode = unigram ? GramMode::unigram : GramMode::bigram;
        cfg.vowel_weighted = !unigram && !no_vowel_weight;
        cfg.path_select = max_path ? PathSelect::max : PathSelect::min;
        cfg.validate();
        return cfg;
    }
};

Pronunciation resolve_word(const Lexicon& lex, const std::string& word) {
    const auto prons = lex.lookup(word);
    if (prons.empty()) throw InputError("unknown word '" + word + "'");
    return prons.front();
}

// Seeded sample of n rows kept in lexicon order; all rows when n is 0 or too large.
std::vector<std::size_t> sample_rows(std::size_t total, std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> all(total);
    for (std::size_t i = 0; i < total; ++i) all[i] = i;
    if (n == 0 || n >= total) return all;
    std::vector<std::size_t> picked;
    picked.reserve(n);
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), n, rng);
    return picked;
}

std::string join(const std::vector<double>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    return out.str();
}

// ---------------------------------------------------------------------------

struct SimCommand {
    DataOptions data;
    ScoreOptions score;
    std::vector<std::string> words;
    bool phones = false;

    void attach(CLI::App& app) {
        data.attach(app);
        score.attach(app);
        app.add_option("words", words, "Two words, or two quoted phoneme sequences with --phones")
            ->required()
            ->expected(2);
        app.add_flag("--phones", phones, "Arguments are phoneme sequences, e.g. \"S IH NG K IH NG\"");
    }

    int run(std::ostream& out) const {
        const auto cfg = score.config();
        auto inv = data.load_inventory();
        Pronunciation a, b;
        if (phones) {
            a = parse_pronunciation(words[0], *inv, true);
            b = parse_pronunciation(words[1], *inv, true);
        } else {
            const auto lex = data.load_lexicon(inv);
            a = resolve_word(lex, words[0]);
            b = resolve_word(lex, words[1]);
        }
        out << fixed(word_similarity(a, b, cfg, *inv), 4) << '\n';
        return kExitOk;
    }
};

struct ScanCommand {
    DataOptions data;
    ScoreOptions score;
    std::string word;
    bool phones = false;
    std::size_t top = 10;
    unsigned threads = 0;

    void attach(CLI::App& app) {
        data.attach(app);
        score.attach(app);
        app.add_option("word", word, "Query word (or phoneme sequence with --phones)")->required();
        app.add_flag("--phones", phones, "Query is a phoneme sequence");
        app.add_option("--top", top, "Rows to print (0 = all)");
        app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    }

    int run(std::ostream& out) const {
        const auto cfg = score.config();
        auto inv = data.load_inventory();
        const auto lex = data.load_lexicon(inv);
        const Pronunciation query = phones ? parse_pronunciation(word, *inv, true) : resolve_word(lex, word);
        const auto results = similarity_scan(query, lex, cfg, top, threads);
        write_scan_tsv(out, results);
        return kExitOk;
    }
};

struct TrainCommand {
    DataOptions data;
    ScoreOptions score;
    TrainConfig train;
    std::size_t subset = 0;
    std::string out_path;

    void attach(CLI::App& app) {
        data.attach(app);
        score.attach(app);
        app.add_option("--dim", train.dim, "Embedding dimension");
        app.add_option("--epochs", train.epochs, "Training epochs");
        app.add_option("--batch", train.batch_size, "Pairs per batch");
        app.add_option("--lr", train.learning_rate, "Initial learning rate");
        app.add_option("--final-lr", train.final_learning_rate, "Learning rate at the end of training");
        app.add_option("--self-fraction", train.self_pair_fraction, "Share of (i, i) pairs");
        app.add_option("--visits", train.word_visits_per_epoch, "Pair visits per word per epoch");
        app.add_option("--seed", train.rng_seed, "Seed for all randomness");
        app.add_option("--threads", train.threads, "Workers computing similarity targets (0 = all cores)");
        app.add_option("--subset", subset, "Train on a seeded sample of this many words (0 = all)");
        app.add_option("--out", out_path, "Embedding file to write")->required();
    }

    int run(std::ostream& out) const {
        const auto start = Clock::now();
        const auto cfg = score.config();
        auto inv = data.load_inventory();
        const auto full = data.load_lexicon(inv);
        const auto rows = sample_rows(full.size(), subset, train.rng_seed);
        const auto lex = full.subset(rows);

        TrainStats stats;
        const auto emb = phonosim::train(lex, cfg, train, &stats);
        emb.save(fs::path(out_path));

        RunManifest m;
        m.command = "train";
        m.version = PHONOSIM_VERSION;
        m.seed = train.rng_seed;
        data.record(m);
        m.add_config("similarity", cfg.describe());
        m.add_config("words", std::to_string(lex.size()));
        m.add_config("subset", std::to_string(subset));
        m.add_config("dim", std::to_string(train.dim));
        m.add_config("epochs", std::to_string(train.epochs));
        m.add_config("batch_size", std::to_string(train.batch_size));
        m.add_config("learning_rate", fixed(train.learning_rate, 6));
        m.add_config("final_learning_rate", fixed(train.final_learning_rate, 6));
        m.add_config("self_pair_fraction", fixed(train.self_pair_fraction, 6));
        m.add_config("word_visits_per_epoch", std::to_string(train.word_visits_per_epoch));
        m.add_config("threads", std::to_string(train.threads));
        m.add_config("fingerprint", emb.fingerprint());
        m.add_config("final_loss", stats.epoch_loss.empty() ? "NA" : fixed(stats.epoch_loss.back(), 6));
        m.wall_seconds = seconds_since(start);
        m.write(out_path + ".manifest");

        for (std::size_t e = 0; e < stats.epoch_loss.size(); ++e)
            out << "epoch " << e + 1 << "\tloss " << fixed(stats.epoch_loss[e], 6) << '\n';
        out << "wrote " << out_path << " (" << emb.size() << " x " << emb.dim() << ")\n";
        return kExitOk;
    }
};

struct NnCommand {
    std::vector<std::string> words;
    std::string emb_path;
    std::size_t top = 10;
    bool exclude_self = false;

    void attach(CLI::App& app) {
        app.add_option("words", words, "Query words")->required();
        app.add_option("--emb", emb_path, "Embedding file")->required();
        app.add_option("--top", top, "Neighbours per query")->check(CLI::PositiveNumber);
        app.add_flag("--exclude-self", exclude_self, "Do not list the query word itself");
    }

    int run(std::ostream& out) const {
        const auto emb = EmbeddingMatrix::load(fs::path(emb_path));
        for (const auto& w : words) {
            const auto i = emb.index_of(w);
            if (!i) throw InputError("word '" + w + "' is not in the embedding");
            const std::size_t skip[] = {*i};
            const auto hits = exclude_self ? nearest(emb.row(*i), emb, top, skip) : nearest(emb.row(*i), emb, top);
            if (words.size() > 1) out << "# " << w << '\n';
            for (const auto& h : hits) out << h.word << '\t' << fixed(h.cosine, 4) << '\n';
        }
        return kExitOk;
    }
};

struct AnalogyCommand {
    std::vector<std::string> words;
    std::string emb_path;
    std::size_t top = 5;
    bool keep_inputs = false;

    void attach(CLI::App& app) {
        app.add_option("words", words, "a b c, solving a : b :: c : ?")->required()->expected(3);
        app.add_option("--emb", emb_path, "Embedding file")->required();
        app.add_option("--top", top, "Candidates to print")->check(CLI::PositiveNumber);
        app.add_flag("--keep-inputs", keep_inputs, "Allow a, b, c among the answers");
    }

    int run(std::ostream& out) const {
        const auto emb = EmbeddingMatrix::load(fs::path(emb_path));
        for (const auto& h : analogy(words[0], words[1], words[2], emb, top, !keep_inputs))
            out << h.word << '\t' << fixed(h.cosine, 4) << '\n';
        return kExitOk;
    }
};

struct EvalCommand {
    DataOptions data;
    CLI::Option* vitz_opt = nullptr;
    CLI::Option* pun_opt = nullptr;
    std::string vitz_dir;
    std::string pun_file;
    std::vector<double> sweep;
    std::string emb_path;
    std::size_t random_pairs = 10000;
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    void attach(CLI::App& app) {
        data.attach(app);
        vitz_opt = app.add_option("--vitz", vitz_dir, "Correlate with human judgments (optional directory)")
                       ->expected(0, 1);
        pun_opt = app.add_option("--pun", pun_file, "Pun-pair cosine distribution (optional pair file)")
                      ->expected(0, 1);
        app.add_option("--sweep", sweep, "Comma-separated penalties for a correlation sweep")->delimiter(',');
        app.add_option("--emb", emb_path, "Embedding file (required for --pun)");
        app.add_option("--random", random_pairs, "Random pairs for the pun contrast baseline");
        app.add_option("--seed", seed, "Seed for the random baseline");
        app.add_option("--out-dir", out_dir, "Directory for report files");
    }

    fs::path judgment_dir() const {
        if (!vitz_dir.empty()) return vitz_dir;
        if (const char* env = std::getenv("PHONOSIM_VITZ_DIR"); env && *env) return env;
        return data_dir() / "vitz";
    }

    std::vector<JudgmentSet> judgments() const {
        const auto dir = judgment_dir();
        auto sets = load_judgment_dir(dir);
        if (sets.empty())
            throw InputError("no judgment sets (*.tsv) found in '" + dir.string() + "'; see data/vitz/README.md");
        return sets;
    }

    int run(std::ostream& out) const {
        const bool want_vitz = vitz_opt->count() > 0;
        const bool want_pun = pun_opt->count() > 0;
        if (!want_vitz && !want_pun && sweep.empty()) throw InputError("choose at least one of --vitz, --pun, --sweep");
        if (want_pun && emb_path.empty()) throw InputError("--pun needs --emb");

        const auto start = Clock::now();
        auto inv = data.load_inventory();
        const auto lex = data.load_lexicon(inv);
        std::optional<EmbeddingMatrix> emb;
        if (!emb_path.empty()) emb = EmbeddingMatrix::load(fs::path(emb_path));
        std::vector<JudgmentSet> sets;
        if (want_vitz || !sweep.empty()) sets = judgments();
        fs::create_directories(out_dir);

        RunManifest m;
        m.command = "eval";
        m.version = PHONOSIM_VERSION;
        m.seed = seed;
        data.record(m);
        if (emb) m.add_input(emb_path);
        std::ofstream summary(fs::path(out_dir) / "summary.txt");

        if (!sets.empty()) {
            m.add_config("vitz_dir", judgment_dir().string());
            if (want_vitz) run_vitz(sets, lex, emb ? &*emb : nullptr, out, summary);
            if (!sweep.empty()) {
                const auto rows = penalty_sweep(sets, lex, sweep);
                std::ofstream tsv(fs::path(out_dir) / "sweep.tsv");
                write_sweep_tsv(tsv, rows, sets);
                write_sweep_tsv(out, rows, sets);
                m.add_config("sweep", join(sweep));
            }
        }
        if (want_pun) run_pun(lex, *emb, out, summary, m);

        m.wall_seconds = seconds_since(start);
        m.write(fs::path(out_dir) / "eval.manifest");
        return kExitOk;
    }

    void run_vitz(const std::vector<JudgmentSet>& sets, const Lexicon& lex, const EmbeddingMatrix* emb,
                  std::ostream& out, std::ostream& summary) const {
        struct Variant {
            std::string name;
            SimilarityConfig cfg;
        };
        std::vector<Variant> variants;
        {
            SimilarityConfig uni;
            uni.gram_mode = GramMode::unigram;
            uni.vowel_weighted = false;
            uni.penalty = 1.0;
            variants.push_back({"unigram_p1", uni});
            SimilarityConfig bi1 = uni;
            bi1.gram_mode = GramMode::bigram;
            variants.push_back({"bigram_p1", bi1});
            SimilarityConfig bi25 = bi1;
            bi25.penalty = 2.5;
            variants.push_back({"bigram_p2.5", bi25});
            variants.push_back({"bigram_vowel_p2.5", SimilarityConfig{}});
        }
        std::ofstream tsv(fs::path(out_dir) / "vitz.tsv");
        tsv << "scorer\tstandard_word\tr\tcomparisons\n";
        out << "scorer\tstandard_word\tr\n";
        auto emit = [&](const std::string& name, const std::vector<SetCorrelation>& rs) {
            for (const auto& c : rs) {
                tsv << name << '\t' << c.standard_word << '\t' << fixed(c.r, 6) << '\t' << c.comparisons << '\n';
                out << name << '\t' << c.standard_word << '\t' << fixed(c.r, 4) << '\n';
                summary << "vitz " << name << ' ' << c.standard_word << " r=" << fixed(c.r, 4) << '\n';
            }
        };
        for (const auto& v : variants) emit(v.name, vitz_eval(sets, lexicon_scorer(lex, v.cfg)));
        if (emb) emit("embedding_cosine", vitz_eval(sets, embedding_scorer(*emb)));
    }

    void run_pun(const Lexicon& lex, const EmbeddingMatrix& emb, std::ostream& out, std::ostream& summary,
                 RunManifest& m) const {
        const fs::path pairs_path = pun_file.empty() ? data_dir() / "puns.tsv" : fs::path(pun_file);
        const auto pairs = load_pun_pairs(pairs_path);
        m.add_input(pairs_path);
        m.add_config("random_pairs", std::to_string(random_pairs));
        const auto report = pun_eval(pairs, emb, &lex);
        const auto baseline = random_baseline(emb, random_pairs, seed);

        {
            std::ofstream f(fs::path(out_dir) / "pun_pairs.tsv");
            write_pair_scores_tsv(f, report);
        }
        {
            std::ofstream f(fs::path(out_dir) / "pun_histogram.tsv");
            write_histogram_tsv(f, report.stats);
        }
        {
            std::ofstream f(fs::path(out_dir) / "random_histogram.tsv");
            write_histogram_tsv(f, baseline);
        }
        for (auto* s : {&out, &summary}) {
            write_distribution_summary(*s, "pun pairs", report.stats);
            write_distribution_summary(*s, "random pairs", baseline);
            *s << "pun mean - random mean: " << fixed(report.stats.mean - baseline.mean, 4) << '\n';
            *s << "skipped pairs: " << report.skipped << '\n';
        }
        out << "word1\tword2\tcosine\tsimilarity\tpublished\n";
        for (const auto& ref : published_pun_scores()) {
            for (const auto& p : report.pairs) {
                if (fold_case(p.first) != ref.first || fold_case(p.second) != ref.second) continue;
                out << p.first << '\t' << p.second << '\t' << fixed(p.cosine, 4) << '\t'
                    << (std::isnan(p.similarity) ? std::string("NA") : fixed(p.similarity, 4)) << '\t'
                    << fixed(ref.published, 4) << '\n';
            }
        }
    }
};

struct BenchCommand {
    DataOptions data;
    ScoreOptions score;
    std::string query;
    std::size_t repeat = 5;
    std::size_t limit = 0;
    std::string out_path;

    void attach(CLI::App& app) {
        data.attach(app);
        score.attach(app);
        app.add_option("--query", query, "Query word (default: first lexicon word)");
        app.add_option("--repeat", repeat, "Timed scans to average")->check(CLI::PositiveNumber);
        app.add_option("--limit", limit, "Use only the first N lexicon words (0 = all)");
        app.add_option("--out", out_path, "Also write the report (and a manifest) here");
    }

    int run(std::ostream& out) const {
        const auto start = Clock::now();
        const auto cfg = score.config();
        auto inv = data.load_inventory();
        auto lex = data.load_lexicon(inv);
        if (limit != 0 && limit < lex.size()) {
            std::vector<std::size_t> rows(limit);
            for (std::size_t i = 0; i < limit; ++i) rows[i] = i;
            lex = lex.subset(rows);
        }
        if (lex.empty()) throw InputError("lexicon is empty");
        const Pronunciation q = query.empty() ? lex.primary(0) : resolve_word(lex, query);
        const EncodedLexicon index(lex, cfg);

        std::vector<double> times;
        for (std::size_t r = 0; r < repeat; ++r) {
            const auto t0 = Clock::now();
            const auto results = similarity_scan(q, index, 1, 1);
            times.push_back(seconds_since(t0));
            if (results.empty()) throw Error("scan returned nothing");
        }
        double mean = 0.0;
        for (double t : times) mean += t;
        mean /= static_cast<double>(times.size());

        std::ostringstream report;
        report << "words\trepeat\tmean_seconds\tmin_seconds\tmax_seconds\n";
        report << lex.size() << '\t' << repeat << '\t' << fixed(mean, 6) << '\t'
               << fixed(*std::min_element(times.begin(), times.end()), 6) << '\t'
               << fixed(*std::max_element(times.begin(), times.end()), 6) << '\n';
        out << report.str();

        if (!out_path.empty()) {
            std::ofstream(out_path) << report.str();
            RunManifest m;
            m.command = "bench";
            m.version = PHONOSIM_VERSION;
            data.record(m);
            m.add_config("similarity", cfg.describe());
            m.add_config("repeat", std::to_string(repeat));
            m.add_config("limit", std::to_string(limit));
            m.wall_seconds = seconds_since(start);
            m.write(out_path + ".manifest");
        }
        return kExitOk;
    }
};

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phonetic word similarity and embeddings"};
    app.name(args.empty() ? "phonosim" : args[0]);
    app.require_subcommand(1);
    app.set_version_flag("--version", PHONOSIM_VERSION);

    SimCommand sim;
    ScanCommand scan;
    TrainCommand train;
    NnCommand nn;
    AnalogyCommand an;
    EvalCommand eval;
    BenchCommand bench;
    auto* sim_app = app.add_subcommand("sim", "Similarity of two words");
    auto* scan_app = app.add_subcommand("scan", "Most similar dictionary words to a query");
    auto* train_app = app.add_subcommand("train", "Learn word embeddings");
    auto* nn_app = app.add_subcommand("nn", "Nearest neighbours in an embedding");
    auto* an_app = app.add_subcommand("analogy", "Sound analogy a : b :: c : ?");
    auto* eval_app = app.add_subcommand("eval", "Human-judgment correlation and pun-pair evaluation");
    auto* bench_app = app.add_subcommand("bench", "Time full-dictionary scans");
    sim.attach(*sim_app);
    scan.attach(*scan_app);
    train.attach(*train_app);
    nn.attach(*nn_app);
    an.attach(*an_app);
    eval.attach(*eval_app);
    bench.attach(*bench_app);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("phonosim");

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim_app->parsed()) return sim.run(out);
        if (scan_app->parsed()) return scan.run(out);
        if (train_app->parsed()) return train.run(out);
        if (nn_app->parsed()) return nn.run(out);
        if (an_app->parsed()) return an.run(out);
        if (eval_app->parsed()) return eval.run(out);
        if (bench_app->parsed()) return bench.run(out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

} // namespace phonosim::cli
