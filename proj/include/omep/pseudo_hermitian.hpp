#pragma once

#include "omep/com_model.hpp"

namespace omep {

/// Residuals of the three pseudo-Hermiticity conditions; the parameter
/// set is pseudo-Hermitian exactly when all three vanish.
struct PhResiduals {
  double r1 = 0.0;  ///< gamma_b + (1 + eta) kappa_c          [kappa_c]
  double r2 = 0.0;  ///< Delta_c + eta Delta_a                [kappa_c]
  double r3 = 0.0;  ///< (1 + lambda^2 eta) G_a^2 + eta (1 + eta) (Delta_a^2 + kappa_c^2)  [kappa_c^2]
};

/// Sign of the mechanical rate a pseudo-Hermitian set forces:
/// gamma_b = -(1 + eta) kappa_c.
enum class MrRegime {
  kLoss,     ///< -2 < eta < -1   (gamma_b > 0)
  kNeutral,  ///< eta = -1        (gamma_b = 0)
  kGain,     ///< -1 < eta < -1/2 (gamma_b < 0)
};

/// Tolerances for the residual checks, kappa_c-normalized.
struct PhTolerances {
  double r1 = 1e-10;
  double r2 = 1e-10;
  double r3 = 1e-10;
};

/// eta values this close to -1 route through the balanced constructor
/// (the general closed form is singular there).
inline constexpr double kBalancedEtaTol = 1e-9;

PhResiduals ph_residuals(const ReducedParams& r);

bool ph_satisfied(const PhResiduals& res, const PhTolerances& tol = {});

/// Feasibility inequality (1 + eta)(1 + lambda^2 eta) > 0 for eta != -1.
/// Throws NotApplicableError at eta = -1 (the balanced case bypasses it).
bool ph_feasible(double eta, double lambda);

/// Build the pseudo-Hermitian parameter set for eta != -1:
///   gamma_b = -(1 + eta) kappa_c,
///   Delta_a = sign * sqrt(-(1 + lambda^2 eta) G_a^2 / (eta (1 + eta)) - kappa_c^2),
///   Delta_c = -eta Delta_a,   G_c = lambda G_a.
///
/// `sign_of_delta` selects the Delta_a branch (>= 0 means +).
/// Throws InvalidInputError at eta = 0 or |eta + 1| < kBalancedEtaTol,
/// InfeasibleError when the lambda inequality fails or |G_a| is below
/// the minimal coupling (the error carries that minimum).
ReducedParams enforce_ph(double eta, double lambda, double g_a, double kappa_c,
                         int sign_of_delta = +1, double omega_b = 50.0);

/// Balanced (eta = -1) pseudo-Hermitian set: lambda = 1, gamma_b = 0,
/// Delta_c = Delta_a; Delta_a is free.
ReducedParams enforce_ph_balanced(double delta_a, double g_a, double kappa_c = 1.0,
                                  double omega_b = 50.0);

/// Classify eta into the loss/neutral/gain bracket. Throws
/// InfeasibleError outside (-2, -1/2), where no EP3 exists.
MrRegime mr_regime(double eta);

const char* to_string(MrRegime regime);

}  // namespace omep
