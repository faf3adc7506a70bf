#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "omep/com_model.hpp"

namespace omep {

/// Linearized quadrature dynamics du/dt = M u in the order
/// (X_a, Y_a, X_b, Y_b, X_c, Y_c). trace(M) = -2 (kappa_a + gamma_b +
/// kappa_c).
using DriftMatrix = Eigen::Matrix<double, 6, 6>;

struct RouthResult {
  bool stable = false;
  /// A zero pivot or zero row appeared (epsilon-substituted); the
  /// criterion is then inconclusive and `stable` is reported false.
  bool marginal = false;
  std::vector<double> first_column;
};

struct StabilityReport {
  std::array<double, 6> char_coeffs{};  ///< c0..c5 of the monic degree-6 polynomial
  bool rh_stable = false;
  bool rh_marginal = false;
  std::vector<double> rh_first_column;
  bool eigen_stable = false;
  double max_real_part = 0.0;
  bool oracle_ok = true;  ///< false if the root oracle failed to converge
};

DriftMatrix build_drift_matrix(const ReducedParams& r);

/// Coefficients c0..c5 of det(lambda I - M) = lambda^6 + c5 lambda^5 +
/// ... + c0, via the Faddeev-LeVerrier trace recurrence.
std::array<double, 6> char_coeffs(const DriftMatrix& m);

/// Routh-Hurwitz test on the monic degree-6 polynomial. Zero pivots are
/// epsilon-substituted (1e-12) and zero rows replaced by the derivative
/// of the auxiliary polynomial; either marks the result marginal.
RouthResult routh_hurwitz(const std::array<double, 6>& coeffs);

/// Both verdicts: Routh-Hurwitz on the drift-matrix characteristic
/// polynomial and an independent maximum-real-part check through the
/// polynomial root oracle.
StabilityReport stability_report(const ReducedParams& r);

}  // namespace omep
