#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phonosim/feature_set.hpp"

namespace phonosim {

using PhonemeId = std::uint16_t;

struct Phoneme {
    std::string symbol;
    FeatureSet features;
    bool is_vowel = false;
};

// Phoneme -> feature table for one language. Immutable after loading.
//
// The feature universe is ordered by first appearance in the source table,
// followed by the two reserved dummy features "beg" and "end". The dummy
// phones BEG and END are always present and carry exactly those features.
class Inventory {
public:
    static constexpr std::string_view kVowelFeature = "vwl";
    static constexpr std::string_view kBeginSymbol = "BEG";
    static constexpr std::string_view kEndSymbol = "END";

    // Feature-table format: one phoneme per line, "SYMBOL feat feat ...",
    // '#' starts a comment line, blank lines are skipped.
    static Inventory load(std::istream& in, std::string language = {});
    static Inventory load_file(const std::filesystem::path& path, std::string language = {});

    const std::string& language() const noexcept { return language_; }

    std::optional<PhonemeId> find(std::string_view symbol) const;
    // Like find() but throws InputError naming the symbol.
    PhonemeId id(std::string_view symbol) const;

    const Phoneme& phoneme(PhonemeId id) const { return phonemes_.at(id); }
    const FeatureSet& features(PhonemeId id) const noexcept { return phonemes_[id].features; }
    bool is_vowel(PhonemeId id) const noexcept { return phonemes_[id].is_vowel; }

    // Number of phonemes including BEG and END.
    std::size_t size() const noexcept { return phonemes_.size(); }
    PhonemeId begin_id() const noexcept { return begin_id_; }
    PhonemeId end_id() const noexcept { return end_id_; }

    std::span<const std::string> feature_universe() const noexcept { return features_; }
    std::optional<std::size_t> feature_index(std::string_view code) const;

    // Builds a FeatureSet from feature codes; throws InputError on unknown codes.
    FeatureSet make_set(std::initializer_list<std::string_view> codes) const;
    FeatureSet make_set(std::span<const std::string> codes) const;

    // Stable textual rendering of the whole table, used for fingerprints.
    std::string canonical() const;

private:
    std::string language_;
    std::vector<Phoneme> phonemes_;
    std::unordered_map<std::string, PhonemeId> by_symbol_;
    std::vector<std::string> features_;
    std::unordered_map<std::string, std::size_t> feature_bits_;
    PhonemeId begin_id_ = 0;
    PhonemeId end_id_ = 0;
};

} // namespace phonosim
