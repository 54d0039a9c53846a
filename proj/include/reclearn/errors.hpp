#pragma once

#include <stdexcept>
#include <string>

namespace reclearn {

// Malformed user input: bad machine descriptions, arity mismatches,
// name collisions, out-of-range parameters.  CLI maps this to exit 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Syntax error in one of the text formats, with 1-based position.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, int line, int column)
        : InputError(what + " (line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Raised when ordered clause evaluation finds a body literal with more
// than one extension substitution.
class DeterminacyViolation : public std::runtime_error {
public:
    DeterminacyViolation(const std::string& what, int literal_index)
        : std::runtime_error(what), literal_index_(literal_index) {}

    int literal_index() const { return literal_index_; }

private:
    int literal_index_;
};

}  // namespace reclearn
