#pragma once

#include <stdexcept>
#include <string>

namespace tvdeblur {

// Vector/operator dimension mismatch.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed file content (PGM header fields, grid files, ...).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requested on the wrong difference-operator variant.
struct UnsupportedVariant : std::logic_error {
  using std::logic_error::logic_error;
};

// Linear solve exhausted its iteration budget.
struct SolveError : std::runtime_error {
  int iteration;
  explicit SolveError(const std::string& what, int iter = -1)
      : std::runtime_error(what), iteration(iter) {}
};

// Non-finite iterates in the solver loop.
struct DivergenceError : std::runtime_error {
  int iteration;
  explicit DivergenceError(const std::string& what, int iter = -1)
      : std::runtime_error(what), iteration(iter) {}
};

// Probabilistic norm estimation could not complete.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tvdeblur
