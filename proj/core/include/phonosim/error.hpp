#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phonosim {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user-supplied input: unknown word, malformed file, invalid option value.
class InputError : public Error {
public:
    using Error::Error;
};

// Malformed data file; carries the 1-based line number of the offending line
// (0 when the problem is not tied to a single line).
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace phonosim
