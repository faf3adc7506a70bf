#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace omep {

/// Bad or non-finite arguments (maps to CLI exit code 2).
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested operation is undefined for these inputs, e.g. discriminant
/// classification on materially complex coefficients (CLI exit code 2).
class NotApplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameter set cannot satisfy the pseudo-Hermitian constraints
/// (CLI exit code 3). Carries the minimal feasible coupling when the
/// failure is a too-small |G_a|.
class InfeasibleError : public std::domain_error {
 public:
  explicit InfeasibleError(const std::string& what,
                           double minimal_coupling = std::nan(""))
      : std::domain_error(what), minimal_coupling_(minimal_coupling) {}

  /// Smallest |G_a| that would make the constraint satisfiable, or NaN
  /// when the failure is not coupling-related.
  double minimal_coupling() const { return minimal_coupling_; }

 private:
  double minimal_coupling_;
};

/// An iteration failed to converge (CLI exit code 4).
class NumericFailureError : public std::runtime_error {
 public:
  explicit NumericFailureError(const std::string& what,
                               double worst_residual = std::nan(""))
      : std::runtime_error(what), worst_residual_(worst_residual) {}

  double worst_residual() const { return worst_residual_; }

 private:
  double worst_residual_;
};

}  // namespace omep
