#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace phonosim::cli {

// Flat key=value record written next to every artifact a command produces.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, std::string>> inputs; // path -> digest
    unsigned long long seed = 0;
    std::string version;
    double wall_seconds = 0.0;

    void add_config(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }
    // Records the file's FNV-1a digest.
    void add_input(const std::filesystem::path& path);

    std::string render() const;
    void write(const std::filesystem::path& path) const;
};

} // namespace phonosim::cli
