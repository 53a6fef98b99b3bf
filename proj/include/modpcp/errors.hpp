#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modpcp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter value or infeasible parameter combination.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// SVD non-convergence, non-finite data, divergence of an iteration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A Neumann series whose operator has norm >= 1.
class NonConvergentSeriesError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace modpcp
