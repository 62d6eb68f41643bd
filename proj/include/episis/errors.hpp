#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace episis {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or input-validation failure (bad arguments, bad config).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public InvalidArgument {
public:
    ParseError(std::size_t line, const std::string& what)
        : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Numerical failure: non-convergence, conservation breach, unstable step.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A hard resource limit was hit (state-space size, event budget).
class CapacityError : public Error {
public:
    using Error::Error;
};

} // namespace episis
