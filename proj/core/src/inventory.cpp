#include "phonosim/inventory.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace phonosim {

namespace {

bool valid_feature_code(std::string_view code) {
    return !code.empty() && std::all_of(code.begin(), code.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

std::size_t intern_feature(std::vector<std::string>& universe,
                           std::unordered_map<std::string, std::size_t>& bits,
                           const std::string& code, std::size_t line) {
    if (auto it = bits.find(code); it != bits.end()) return it->second;
    // two slots stay reserved for beg/end
    if (universe.size() + 1 + 2 > FeatureSet::kMaxFeatures)
        throw ParseError("feature universe exceeds " + std::to_string(FeatureSet::kMaxFeatures) +
                             " features (including beg/end)",
                         line);
    bits.emplace(code, universe.size());
    universe.push_back(code);
    return universe.size() - 1;
}

} // namespace

Inventory Inventory::load(std::istream& in, std::string language) {
    Inventory inv;
    inv.language_ = std::move(language);

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream tokens(line);
        std::string symbol;
        if (!(tokens >> symbol) || symbol.front() == '#') continue;

        if (symbol == kBeginSymbol || symbol == kEndSymbol)
            throw ParseError("phoneme symbol '" + symbol + "' is reserved", lineno);
        if (inv.by_symbol_.contains(symbol))
            throw ParseError("duplicate phoneme symbol '" + symbol + "'", lineno);

        Phoneme ph{symbol, {}, false};
        std::string code;
        std::size_t listed = 0;
        while (tokens >> code) {
            if (!valid_feature_code(code))
                throw ParseError("malformed feature code '" + code + "' for phoneme '" + symbol + "'", lineno);
            if (code == "beg" || code == "end")
                throw ParseError("feature '" + code + "' is reserved for the dummy phones", lineno);
            ph.features.set(intern_feature(inv.features_, inv.feature_bits_, code, lineno));
            if (code == kVowelFeature) ph.is_vowel = true;
            ++listed;
        }
        if (listed == 0) throw ParseError("phoneme '" + symbol + "' has no features", lineno);
        if (inv.phonemes_.size() + 2 > std::numeric_limits<PhonemeId>::max())
            throw ParseError("too many phonemes", lineno);

        inv.by_symbol_.emplace(symbol, static_cast<PhonemeId>(inv.phonemes_.size()));
        inv.phonemes_.push_back(std::move(ph));
    }
    if (inv.phonemes_.empty()) throw ParseError("no phonemes defined", 0);

    for (const std::string_view dummy : {kBeginSymbol, kEndSymbol}) {
        const std::string code = dummy == kBeginSymbol ? "beg" : "end";
        const std::size_t bit = inv.features_.size();
        inv.feature_bits_.emplace(code, bit);
        inv.features_.push_back(code);
        Phoneme ph{std::string(dummy), {}, false};
        ph.features.set(bit);
        const auto id = static_cast<PhonemeId>(inv.phonemes_.size());
        (dummy == kBeginSymbol ? inv.begin_id_ : inv.end_id_) = id;
        inv.by_symbol_.emplace(ph.symbol, id);
        inv.phonemes_.push_back(std::move(ph));
    }
    return inv;
}

Inventory Inventory::load_file(const std::filesystem::path& path, std::string language) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open feature table '" + path.string() + "'");
    try {
        return load(in, std::move(language));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

std::optional<PhonemeId> Inventory::find(std::string_view symbol) const {
    if (auto it = by_symbol_.find(std::string(symbol)); it != by_symbol_.end()) return it->second;
    return std::nullopt;
}

PhonemeId Inventory::id(std::string_view symbol) const {
    if (auto found = find(symbol)) return *found;
    throw InputError("unknown phoneme '" + std::string(symbol) + "'");
}

std::optional<std::size_t> Inventory::feature_index(std::string_view code) const {
    if (auto it = feature_bits_.find(std::string(code)); it != feature_bits_.end()) return it->second;
    return std::nullopt;
}

FeatureSet Inventory::make_set(std::initializer_list<std::string_view> codes) const {
    FeatureSet set;
    for (auto code : codes) {
        auto bit = feature_index(code);
        if (!bit) throw InputError("unknown feature '" + std::string(code) + "'");
        set.set(*bit);
    }
    return set;
}

FeatureSet Inventory::make_set(std::span<const std::string> codes) const {
    FeatureSet set;
    for (const auto& code : codes) {
        auto bit = feature_index(code);
        if (!bit) throw InputError("unknown feature '" + code + "'");
        set.set(*bit);
    }
    return set;
}

std::string Inventory::canonical() const {
    std::ostringstream out;
    out << "lang=" << language_ << '\n';
    for (const auto& ph : phonemes_) {
        out << ph.symbol;
        for (std::size_t bit = 0; bit < features_.size(); ++bit)
            if (ph.features.test(bit)) out << ' ' << features_[bit];
        out << '\n';
    }
    return out.str();
}

} // namespace phonosim
