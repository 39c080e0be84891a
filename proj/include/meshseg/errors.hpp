#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meshseg {

/// Malformed mesh or label text. Carries the 1-based line of the offending
/// record (0 when no single line is at fault); the message already names it.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error(line == 0 ? message : message + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A numeric routine produced a non-finite or infeasible quantity.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File-level failure: unreadable path, unsupported extension.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace meshseg
