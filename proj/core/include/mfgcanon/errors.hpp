#pragma once

#include <stdexcept>
#include <string>

namespace mfgcanon {

/// Invalid input: malformed measures, bad parameters, unknown model names.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure: blow-up, non-finite evaluations, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Two independent computations of the same quantity disagreed.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mfgcanon
