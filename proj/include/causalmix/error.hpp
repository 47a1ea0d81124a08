#pragma once

#include <stdexcept>
#include <string>

namespace causalmix {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural violations: cycles, unknown vertices, malformed patterns.
class GraphError : public Error {
public:
    using Error::Error;
};

/// Probability-model violations: bad CPTs, spec/net mismatches, oversized state spaces.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. Carries a 1-based position when one is known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line == 0 ? what
                          : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace causalmix
