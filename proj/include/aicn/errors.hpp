#pragma once

#include <stdexcept>
#include <string>

namespace aicn {

// Base class for every failure this library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix expected to be positive definite failed its Cholesky pivot test.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// A computation produced NaN/Inf or was handed non-finite input.
struct NumericalError : Error {
  using Error::Error;
};

// The cubic-regularized scalar subproblem missed its residual tolerance.
struct SubproblemNotConverged : Error {
  using Error::Error;
};

// Malformed input text; carries the 1-based line number.
struct ParseError : Error {
  ParseError(int line_number, const std::string& message)
      : Error("line " + std::to_string(line_number) + ": " + message), line(line_number) {}
  int line;
};

struct ConfigError : Error {
  using Error::Error;
};

// Every grid point of a tuning sweep violated the monotonicity criterion.
struct NoMonotonePoint : Error {
  using Error::Error;
};

}  // namespace aicn
