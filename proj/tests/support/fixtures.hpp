#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phonosim/inventory.hpp"
#include "phonosim/lexicon.hpp"

#ifndef PHONOSIM_TEST_DATA_DIR
#error "PHONOSIM_TEST_DATA_DIR must point at the bundled data directory"
#endif

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(PHONOSIM_TEST_DATA_DIR) + "/" + name; }

inline std::shared_ptr<const phonosim::Inventory> english() {
    static const auto inv =
        std::make_shared<const phonosim::Inventory>(phonosim::Inventory::load_file(data_path("en_features.txt"), "en"));
    return inv;
}

inline std::shared_ptr<const phonosim::Inventory> hindi() {
    static const auto inv =
        std::make_shared<const phonosim::Inventory>(phonosim::Inventory::load_file(data_path("hi_features.txt"), "hi"));
    return inv;
}

// Full bundled CMU dictionary, parsed once per test binary.
inline const phonosim::Lexicon& cmu() {
    static const auto lex =
        phonosim::Lexicon::load_file(data_path("cmudict-0.7b"), english(), phonosim::Lexicon::Format::cmu);
    return lex;
}

inline phonosim::Pronunciation pron(const std::string& phones) {
    return phonosim::parse_pronunciation(phones, *english(), true);
}

inline std::vector<std::string> symbols(const phonosim::Pronunciation& p, const phonosim::Inventory& inv) {
    std::vector<std::string> out;
    for (auto id : p) out.push_back(inv.phoneme(id).symbol);
    return out;
}

} // namespace fixtures
