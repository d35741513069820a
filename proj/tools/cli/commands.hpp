#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace phonosim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Runs the phonosim command line. args[0] is the program name.
// Normal output goes to `out`, diagnostics to `err`; returns the exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace phonosim::cli
