#include "phonosim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace phonosim {

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InputError("pearson: series lengths differ");
    if (xs.size() < 2) throw InputError("pearson: need at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw InputError("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

JudgmentSet load_judgments(std::istream& in) {
    JudgmentSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
        if (set.standard_word.empty()) {
            std::istringstream ls(line);
            ls >> set.standard_word;
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected word<TAB>score", lineno);
        double score;
        std::istringstream ss(line.substr(tab + 1));
        if (!(ss >> score) || score < 0.0 || score > 4.0)
            throw ParseError("score must be a number on the 0-4 scale", lineno);
        set.words.push_back(line.substr(0, tab));
        set.human_scores.push_back(score / 4.0);
    }
    if (set.standard_word.empty()) throw ParseError("missing standard word header", 0);
    if (set.words.empty()) throw ParseError("no comparison words for '" + set.standard_word + "'", 0);
    return set;
}

JudgmentSet load_judgments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open judgment file '" + path.string() + "'");
    try {
        return load_judgments(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

std::vector<JudgmentSet> load_judgment_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("'" + dir.string() + "' is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<JudgmentSet> sets;
    for (const auto& f : files) sets.push_back(load_judgments(f));
    return sets;
}

PairScorer lexicon_scorer(const Lexicon& lexicon, const SimilarityConfig& cfg) {
    cfg.validate();
    return [&lexicon, cfg](std::string_view a, std::string_view b) {
        const auto pa = lexicon.lookup(a);
        if (pa.empty()) throw InputError("word '" + std::string(a) + "' is not in the lexicon");
        const auto pb = lexicon.lookup(b);
        if (pb.empty()) throw InputError("word '" + std::string(b) + "' is not in the lexicon");
        return word_similarity(pa.front(), pb.front(), cfg, lexicon.inventory());
    };
}

PairScorer embedding_scorer(const EmbeddingMatrix& emb) {
    return [&emb](std::string_view a, std::string_view b) {
        const auto ia = emb.index_of(a);
        if (!ia) throw InputError("word '" + std::string(a) + "' is not in the embedding");
        const auto ib = emb.index_of(b);
        if (!ib) throw InputError("word '" + std::string(b) + "' is not in the embedding");
        return cosine(emb.row(*ia), emb.row(*ib));
    };
}

std::vector<SetCorrelation> vitz_eval(std::span<const JudgmentSet> sets, const PairScorer& scorer) {
    std::vector<SetCorrelation> out;
    for (const auto& set : sets) {
        std::vector<double> predicted;
        predicted.reserve(set.words.size());
        for (const auto& w : set.words) predicted.push_back(scorer(set.standard_word, w));
        try {
            out.push_back({set.standard_word, pearson(predicted, set.human_scores), set.words.size()});
        } catch (const InputError& e) {
            throw InputError("standard word '" + set.standard_word + "': " + e.what());
        }
    }
    return out;
}

std::vector<SweepRow> penalty_sweep(std::span<const JudgmentSet> sets, const Lexicon& lexicon,
                                    std::span<const double> penalties) {
    if (sets.empty()) throw InputError("penalty sweep needs at least one judgment set");
    std::vector<SweepRow> rows;
    for (double p : penalties) {
        SimilarityConfig cfg;
        cfg.penalty = p;
        cfg.validate();
        SweepRow row{p, 0.0, {}};
        for (const auto& c : vitz_eval(sets, lexicon_scorer(lexicon, cfg))) row.per_set.push_back(c.r);
        row.mean_r = std::accumulate(row.per_set.begin(), row.per_set.end(), 0.0) /
                     static_cast<double>(row.per_set.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_tsv(std::ostream& out, std::span<const SweepRow> rows, std::span<const JudgmentSet> sets) {
    out << "penalty\tmean_r";
    for (const auto& s : sets) out << '\t' << s.standard_word;
    out << '\n';
    char buf[32];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%g", row.penalty);
        out << buf;
        std::snprintf(buf, sizeof buf, "\t%.6f", row.mean_r);
        out << buf;
        for (double r : row.per_set) {
            std::snprintf(buf, sizeof buf, "\t%.6f", r);
            out << buf;
        }
        out << '\n';
    }
}

DistributionStats distribution(std::span<const double> values) {
    DistributionStats s;
    s.histogram.assign(DistributionStats::kBins, 0);
    s.count = values.size();
    if (values.empty()) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(values.size());
    constexpr double width = 2.0 / DistributionStats::kBins;
    for (double v : values) {
        auto bin = static_cast<long>(std::floor((v + 1.0) / width));
        bin = std::clamp<long>(bin, 0, static_cast<long>(DistributionStats::kBins) - 1);
        ++s.histogram[static_cast<std::size_t>(bin)];
    }
    return s;
}

std::vector<WordPair> load_pun_pairs(std::istream& in) {
    std::vector<WordPair> pairs;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw ParseError("expected word1<TAB>word2", lineno);
        WordPair p{line.substr(0, tab), line.substr(tab + 1)};
        auto a = fold_case(p.first);
        auto b = fold_case(p.second);
        if (b < a) std::swap(a, b);
        if (seen.emplace(a, b).second) pairs.push_back(std::move(p));
    }
    return pairs;
}

std::vector<WordPair> load_pun_pairs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open pair file '" + path.string() + "'");
    return load_pun_pairs(in);
}

PunReport pun_eval(std::span<const WordPair> pairs, const EmbeddingMatrix& emb, const Lexicon* lexicon,
                   const SimilarityConfig& cfg) {
    PunReport report;
    std::set<std::string> missing;
    std::vector<double> cosines;
    for (const auto& pair : pairs) {
        const auto a = emb.index_of(pair.first);
        const auto b = emb.index_of(pair.second);
        if (!a || !b) {
            ++report.skipped;
            if (!a) missing.insert(pair.first);
            if (!b) missing.insert(pair.second);
            continue;
        }
        double sim = std::numeric_limits<double>::quiet_NaN();
        if (lexicon) {
            const auto pa = lexicon->lookup(pair.first);
            const auto pb = lexicon->lookup(pair.second);
            if (!pa.empty() && !pb.empty()) sim = word_similarity(pa.front(), pb.front(), cfg, lexicon->inventory());
        }
        const double c = cosine(emb.row(*a), emb.row(*b));
        cosines.push_back(c);
        report.pairs.push_back({pair.first, pair.second, c, sim});
    }
    std::stable_sort(report.pairs.begin(), report.pairs.end(),
                     [](const PairScore& x, const PairScore& y) { return x.cosine > y.cosine; });
    report.stats = distribution(cosines);
    report.missing_words.assign(missing.begin(), missing.end());
    return report;
}

DistributionStats random_baseline(const EmbeddingMatrix& emb, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InputError("random baseline needs at least one pair");
    if (emb.size() < 2) throw InputError("random baseline needs at least two embedded words");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> first(0, emb.size() - 1);
    std::uniform_int_distribution<std::size_t> second(0, emb.size() - 2);
    std::vector<double> cosines;
    cosines.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t i = first(rng);
        std::size_t j = second(rng);
        if (j >= i) ++j;
        cosines.push_back(cosine(emb.row(i), emb.row(j)));
    }
    return distribution(cosines);
}

std::span<const PublishedPairScore> published_pun_scores() {
    static constexpr PublishedPairScore rows[] = {
        {"mutter", "mother", -0.0123, 0.8993}, {"loin", "learn", -0.0885, 0.8119},
        {"truffle", "trouble", 0.1365, 0.9629}, {"soul", "sell", 0.0738, 0.7642},
        {"sole", "sell", 0.0738, 0.7605},      {"eight", "eat", 0.7196, 0.4352},
        {"allege", "ledge", 0.7149, 0.4172},   {"ache", "egg", 0.7734, 0.4580},
        {"engels", "angle", 0.8318, 0.4986},   {"bullion", "bull", 0.7814, 0.4128},
    };
    return rows;
}

void write_pair_scores_tsv(std::ostream& out, const PunReport& report) {
    out << "word1\tword2\tcosine\tsimilarity\n";
    char buf[64];
    for (const auto& p : report.pairs) {
        if (std::isnan(p.similarity))
            std::snprintf(buf, sizeof buf, "\t%.4f\tNA\n", p.cosine);
        else
            std::snprintf(buf, sizeof buf, "\t%.4f\t%.4f\n", p.cosine, p.similarity);
        out << p.first << '\t' << p.second << buf;
    }
}

void write_histogram_tsv(std::ostream& out, const DistributionStats& stats) {
    out << "bin_low\tbin_high\tcount\n";
    constexpr double width = 2.0 / DistributionStats::kBins;
    char buf[64];
    for (std::size_t b = 0; b < stats.histogram.size(); ++b) {
        std::snprintf(buf, sizeof buf, "%.2f\t%.2f\t%zu\n", -1.0 + width * static_cast<double>(b),
                      -1.0 + width * static_cast<double>(b + 1), stats.histogram[b]);
        out << buf;
    }
}

void write_distribution_summary(std::ostream& out, std::string_view label, const DistributionStats& stats) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.*s: n=%zu mean=%.4f variance=%.4f min=%.4f max=%.4f\n",
                  static_cast<int>(label.size()), label.data(), stats.count, stats.mean, stats.variance, stats.min,
                  stats.max);
    out << buf;
}

} // namespace phonosim
