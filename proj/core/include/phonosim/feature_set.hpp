#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>

#include "phonosim/error.hpp"

namespace phonosim {

// Fixed 128-bit feature vector, one bit per feature of an inventory.
class FeatureSet {
public:
    static constexpr std::size_t kMaxFeatures = 128;

    constexpr FeatureSet() = default;

    constexpr void set(std::size_t bit) noexcept { words_[bit >> 6] |= std::uint64_t{1} << (bit & 63); }
    constexpr bool test(std::size_t bit) const noexcept { return (words_[bit >> 6] >> (bit & 63)) & 1U; }

    constexpr int count() const noexcept { return std::popcount(words_[0]) + std::popcount(words_[1]); }
    constexpr bool empty() const noexcept { return (words_[0] | words_[1]) == 0; }

    constexpr FeatureSet operator|(const FeatureSet& o) const noexcept {
        return FeatureSet(words_[0] | o.words_[0], words_[1] | o.words_[1]);
    }
    constexpr FeatureSet operator&(const FeatureSet& o) const noexcept {
        return FeatureSet(words_[0] & o.words_[0], words_[1] & o.words_[1]);
    }
    constexpr FeatureSet& operator|=(const FeatureSet& o) noexcept {
        words_[0] |= o.words_[0];
        words_[1] |= o.words_[1];
        return *this;
    }

    constexpr bool operator==(const FeatureSet&) const noexcept = default;

    constexpr const std::array<std::uint64_t, 2>& words() const noexcept { return words_; }

private:
    constexpr FeatureSet(std::uint64_t lo, std::uint64_t hi) noexcept : words_{lo, hi} {}

    std::array<std::uint64_t, 2> words_{};
};

// |a & b| / |a | b| without the emptiness check; callers guarantee a non-empty union.
inline double jaccard_unchecked(const FeatureSet& a, const FeatureSet& b) noexcept {
    const auto& x = a.words();
    const auto& y = b.words();
    const int inter = std::popcount(x[0] & y[0]) + std::popcount(x[1] & y[1]);
    const int uni = std::popcount(x[0] | y[0]) + std::popcount(x[1] | y[1]);
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Jaccard similarity of two feature sets. Throws when both are empty (0/0).
inline double jaccard(const FeatureSet& a, const FeatureSet& b) {
    if ((a | b).empty()) throw Error("jaccard: both feature sets are empty");
    return jaccard_unchecked(a, b);
}

} // namespace phonosim
