#pragma once

#include <stdexcept>
#include <string>

namespace fracstar {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Gamma function requested at (or within tolerance of) a nonpositive integer.
class PoleError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A real power of a negative base with a non-integer exponent was requested.
class BranchError : public Error {
  public:
    using Error::Error;
};

/// A bracketed scan found no sign change.
class NoRootError : public Error {
  public:
    using Error::Error;
};

/// Vertex continuity (the length chain) fails, so the dependent solve is meaningless.
class CompatibilityError : public Error {
  public:
    using Error::Error;
};

/// A linear solve or an order estimate degenerated (zero coefficient, noise floor).
class DegenerateError : public Error {
  public:
    using Error::Error;
};

/// Problem-file syntax or schema violation.
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace fracstar
