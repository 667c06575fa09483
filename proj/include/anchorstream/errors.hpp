#pragma once

#include <stdexcept>
#include <string>

namespace anchorstream {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data could not be parsed (CSV/JSON records, malformed cell counts).
class ParseError : public Error {
public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A documented precondition of an estimator or interval was violated
/// (e.g. an empty Stream-2-only cell, or a random sample of size < 2).
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

} // namespace anchorstream
