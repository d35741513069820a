#include "phonosim/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace phonosim {

namespace {

bool plain_headword(std::string_view word) {
    return std::all_of(word.begin(), word.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '\'' || c == '-' || c == '.';
    });
}

// "WORD(12)" -> "WORD"; anything else unchanged.
std::string_view strip_variant(std::string_view word) {
    if (word.size() < 4 || word.back() != ')') return word;
    const auto open = word.rfind('(');
    if (open == std::string_view::npos || open == 0 || open + 2 > word.size() - 1) return word;
    const auto digits = word.substr(open + 1, word.size() - open - 2);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return word;
    return word.substr(0, open);
}

} // namespace

std::string fold_case(std::string_view word) {
    std::string out(word);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

Pronunciation parse_pronunciation(std::string_view text, const Inventory& inventory, bool strip_stress) {
    Pronunciation pron;
    std::istringstream tokens{std::string(text)};
    std::string tok;
    while (tokens >> tok) {
        if (strip_stress && tok.size() > 1 && tok.back() >= '0' && tok.back() <= '2') tok.pop_back();
        const auto id = inventory.find(tok);
        if (!id || *id == inventory.begin_id() || *id == inventory.end_id())
            throw InputError("unknown phoneme '" + tok + "'");
        pron.push_back(*id);
    }
    if (pron.empty()) throw InputError("empty pronunciation");
    return pron;
}

std::string format_pronunciation(const Pronunciation& pron, const Inventory& inventory) {
    std::string out;
    for (auto id : pron) {
        if (!out.empty()) out += ' ';
        out += inventory.phoneme(id).symbol;
    }
    return out;
}

Lexicon::Lexicon(std::shared_ptr<const Inventory> inventory) : inventory_(std::move(inventory)) {
    if (!inventory_) throw Error("lexicon requires an inventory");
}

Lexicon Lexicon::parse(std::istream& in, std::shared_ptr<const Inventory> inventory, const ParseOptions& options,
                       bool cmu_layout) {
    Lexicon lex(std::move(inventory));
    std::vector<LineError> errors;
    std::size_t data_lines = 0;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (cmu_layout && line.starts_with(";;;")) continue;
        if (!cmu_layout && line.front() == '#') continue;
        ++data_lines;

        std::string_view head, rest;
        if (cmu_layout) {
            const auto sep = line.find_first_of(" \t");
            if (sep == std::string::npos) {
                errors.push_back({lineno, "missing pronunciation"});
                continue;
            }
            head = std::string_view(line).substr(0, sep);
            rest = std::string_view(line).substr(sep);
            head = strip_variant(head);
        } else {
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                errors.push_back({lineno, "expected word<TAB>phonemes"});
                continue;
            }
            head = std::string_view(line).substr(0, tab);
            rest = std::string_view(line).substr(tab + 1);
        }
        if (head.empty()) {
            errors.push_back({lineno, "empty headword"});
            continue;
        }
        if (options.letters_only && !plain_headword(head)) continue;

        try {
            lex.add(head, parse_pronunciation(rest, lex.inventory(), cmu_layout));
        } catch (const InputError& e) {
            errors.push_back({lineno, e.what()});
        }
    }

    if (!errors.empty() &&
        static_cast<double>(errors.size()) > options.max_bad_fraction * static_cast<double>(data_lines)) {
        std::ostringstream msg;
        msg << errors.size() << " of " << data_lines
            << " lexicon lines failed validation (wrong inventory for this file?); first: line "
            << errors.front().line << ": " << errors.front().message;
        throw InputError(msg.str());
    }
    lex.errors_ = std::move(errors);
    return lex;
}

Lexicon Lexicon::parse_cmu(std::istream& in, std::shared_ptr<const Inventory> inventory,
                           const ParseOptions& options) {
    return parse(in, std::move(inventory), options, true);
}

Lexicon Lexicon::parse_plain(std::istream& in, std::shared_ptr<const Inventory> inventory,
                             const ParseOptions& options) {
    return parse(in, std::move(inventory), options, false);
}

Lexicon Lexicon::load_file(const std::filesystem::path& path, std::shared_ptr<const Inventory> inventory,
                           Format format, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open lexicon '" + path.string() + "'");
    return format == Format::cmu ? parse_cmu(in, std::move(inventory), options)
                                 : parse_plain(in, std::move(inventory), options);
}

void Lexicon::add(std::string_view word, Pronunciation pron) {
    if (pron.empty()) throw InputError("empty pronunciation for '" + std::string(word) + "'");
    for (auto id : pron)
        if (id >= inventory_->size() || id == inventory_->begin_id() || id == inventory_->end_id())
            throw InputError("invalid phoneme id in pronunciation of '" + std::string(word) + "'");
    auto key = fold_case(word);
    if (key.empty()) throw InputError("empty headword");
    auto [it, inserted] = index_.try_emplace(key, words_.size());
    if (inserted) {
        words_.push_back(std::move(key));
        entries_.emplace_back();
    }
    entries_[it->second].push_back(std::move(pron));
}

std::span<const Pronunciation> Lexicon::lookup(std::string_view word) const {
    if (auto i = index_of(word)) return entries_[*i];
    return {};
}

std::optional<std::size_t> Lexicon::index_of(std::string_view word) const {
    if (auto it = index_.find(fold_case(word)); it != index_.end()) return it->second;
    return std::nullopt;
}

Lexicon Lexicon::subset(std::span<const std::size_t> indices) const {
    Lexicon out(inventory_);
    for (auto i : indices)
        for (const auto& pron : entries_.at(i)) out.add(words_[i], pron);
    return out;
}

void Lexicon::write_plain(std::ostream& out) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        for (const auto& pron : entries_[i]) out << words_[i] << '\t' << format_pronunciation(pron, *inventory_) << '\n';
}

} // namespace phonosim
