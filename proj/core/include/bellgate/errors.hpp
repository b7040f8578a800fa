#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellgate {

// Argument errors use std::invalid_argument, non-Hermitian / non-unitary
// inputs use std::domain_error, broken internal invariants std::logic_error.

/// Iterative solver exhausted its budget without meeting tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Targets were met by the solver but cannot produce the requested gate.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite-difference or evolution evaluation produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t parameter_index)
      : std::runtime_error(what), parameter_index_(parameter_index) {}
  std::size_t parameter_index() const noexcept { return parameter_index_; }

 private:
  std::size_t parameter_index_;
};

}  // namespace bellgate
