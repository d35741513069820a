#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phonosim/inventory.hpp"

namespace phonosim {

// Stress-free phoneme sequence of one word. Never contains BEG/END.
using Pronunciation = std::vector<PhonemeId>;

struct LineError {
    std::size_t line;
    std::string message;
};

struct ParseOptions {
    // Drop headwords containing anything other than letters, apostrophe, hyphen or period.
    bool letters_only = false;
    // Abort when more than this fraction of data lines fail validation.
    double max_bad_fraction = 0.001;
};

// Parses "PH PH PH" against the inventory. With strip_stress, a trailing 0/1/2
// digit is removed from each token first. Throws InputError on unknown symbols
// or an empty sequence.
Pronunciation parse_pronunciation(std::string_view text, const Inventory& inventory, bool strip_stress = false);

std::string format_pronunciation(const Pronunciation& pron, const Inventory& inventory);

// ASCII lower-casing; other bytes pass through untouched.
std::string fold_case(std::string_view word);

// Word -> pronunciation(s) map bound to an inventory. Word order is file order
// and is what embedding rows are aligned with.
class Lexicon {
public:
    explicit Lexicon(std::shared_ptr<const Inventory> inventory);

    // CMU 0.7b layout: "WORD  PH PH ...", ";;;" comments, "WORD(n)" variants.
    static Lexicon parse_cmu(std::istream& in, std::shared_ptr<const Inventory> inventory,
                             const ParseOptions& options = {});
    // "word<TAB>ph ph ..." per line; repeated words append pronunciations.
    static Lexicon parse_plain(std::istream& in, std::shared_ptr<const Inventory> inventory,
                               const ParseOptions& options = {});

    enum class Format { cmu, plain };
    static Lexicon load_file(const std::filesystem::path& path, std::shared_ptr<const Inventory> inventory,
                             Format format, const ParseOptions& options = {});

    // Appends a pronunciation, creating the word if new. Validates the phonemes.
    void add(std::string_view word, Pronunciation pron);

    // Case-insensitive; empty span when absent.
    std::span<const Pronunciation> lookup(std::string_view word) const;
    std::optional<std::size_t> index_of(std::string_view word) const;

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    const std::string& word(std::size_t i) const { return words_.at(i); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    const Pronunciation& primary(std::size_t i) const { return entries_.at(i).front(); }
    std::span<const Pronunciation> pronunciations(std::size_t i) const { return entries_.at(i); }

    const Inventory& inventory() const noexcept { return *inventory_; }
    const std::shared_ptr<const Inventory>& inventory_ptr() const noexcept { return inventory_; }

    // Lines skipped during parsing (below the abort threshold).
    const std::vector<LineError>& errors() const noexcept { return errors_; }

    // New lexicon holding the given rows, in the given order.
    Lexicon subset(std::span<const std::size_t> indices) const;

    // Plain format, every pronunciation on its own line.
    void write_plain(std::ostream& out) const;

private:
    static Lexicon parse(std::istream& in, std::shared_ptr<const Inventory> inventory, const ParseOptions& options,
                         bool cmu_layout);

    std::shared_ptr<const Inventory> inventory_;
    std::vector<std::string> words_;
    std::vector<std::vector<Pronunciation>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<LineError> errors_;
};

} // namespace phonosim
