#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace phonosim {

// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// 16 lowercase hex digits.
std::string to_hex(std::uint64_t value);

// FNV-1a digest of a file's bytes, as hex. Throws InputError if unreadable.
std::string file_digest(const std::filesystem::path& path);

} // namespace phonosim
