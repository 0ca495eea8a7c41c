#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mimisbm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (x <= 0 for
/// digamma, k > N for a fit, probabilities that do not sum to one, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class SelfLoopError : public Error {
public:
    using Error::Error;
};

/// A cluster link map that leaves some component cluster empty.
class LinkMapError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. line() is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace mimisbm
