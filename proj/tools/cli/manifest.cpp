#include "cli/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "phonosim/digest.hpp"
#include "phonosim/error.hpp"

namespace phonosim::cli {

void RunManifest::add_input(const std::filesystem::path& path) { inputs.emplace_back(path.string(), file_digest(path)); }

std::string RunManifest::render() const {
    std::ostringstream out;
    out << "command=" << command << '\n';
    out << "version=" << version << '\n';
    out << "seed=" << seed << '\n';
    for (const auto& [k, v] : config) out << "config." << k << '=' << v << '\n';
    for (const auto& [path, digest] : inputs) out << "input." << path << '=' << digest << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall_seconds=%.3f\n", wall_seconds);
    out << buf;
    return out.str();
}

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write manifest '" + path.string() + "'");
    out << render();
}

} // namespace phonosim::cli
