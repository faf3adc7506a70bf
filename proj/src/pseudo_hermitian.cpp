#include "omep/pseudo_hermitian.hpp"

#include <cmath>
#include <string>

#include "omep/errors.hpp"

namespace omep {

PhResiduals ph_residuals(const ReducedParams& r) {
  PhResiduals res;
  res.r1 = r.gamma_b + (1.0 + r.eta) * r.kappa_c;
  res.r2 = r.Delta_c + r.eta * r.Delta_a;
  res.r3 = (1.0 + r.lambda * r.lambda * r.eta) * r.G_a * r.G_a +
           r.eta * (1.0 + r.eta) * (r.Delta_a * r.Delta_a + r.kappa_c * r.kappa_c);
  return res;
}

bool ph_satisfied(const PhResiduals& res, const PhTolerances& tol) {
  return std::abs(res.r1) <= tol.r1 && std::abs(res.r2) <= tol.r2 &&
         std::abs(res.r3) <= tol.r3;
}

bool ph_feasible(double eta, double lambda) {
  if (std::abs(eta + 1.0) < kBalancedEtaTol) {
    throw NotApplicableError("ph_feasible: undefined at eta = -1, use the balanced case");
  }
  return (1.0 + eta) * (1.0 + lambda * lambda * eta) > 0.0;
}

ReducedParams enforce_ph(double eta, double lambda, double g_a, double kappa_c,
                         int sign_of_delta, double omega_b) {
  if (!std::isfinite(eta) || !std::isfinite(lambda) || !std::isfinite(g_a) ||
      !(kappa_c > 0.0)) {
    throw InvalidInputError("enforce_ph: non-finite parameter or kappa_c <= 0");
  }
  if (eta == 0.0) {
    throw InvalidInputError("enforce_ph: eta = 0 is singular");
  }
  if (std::abs(eta + 1.0) < kBalancedEtaTol) {
    throw InvalidInputError("enforce_ph: eta = -1 must use enforce_ph_balanced");
  }
  if (!ph_feasible(eta, lambda)) {
    throw InfeasibleError("enforce_ph: (1+eta)(1+lambda^2 eta) <= 0, no pseudo-Hermitian set for this lambda");
  }

  const double lam2eta = 1.0 + lambda * lambda * eta;
  const double eta_term = eta * (1.0 + eta);
  const double delta_sq = -lam2eta * g_a * g_a / eta_term - kappa_c * kappa_c;
  if (delta_sq < 0.0) {
    const double g_min = kappa_c * std::sqrt(-eta_term / lam2eta);
    throw InfeasibleError("enforce_ph: |G_a| below the minimal coupling " +
                              std::to_string(g_min) + " kappa_c",
                          g_min);
  }

  ReducedParams r;
  r.eta = eta;
  r.lambda = lambda;
  r.kappa_c = kappa_c;
  r.omega_b = omega_b;
  r.gamma_b = -(1.0 + eta) * kappa_c;
  r.Delta_a = (sign_of_delta >= 0 ? 1.0 : -1.0) * std::sqrt(delta_sq);
  r.Delta_c = -eta * r.Delta_a;
  r.G_a = g_a;
  r.G_c = lambda * g_a;
  return r;
}

ReducedParams enforce_ph_balanced(double delta_a, double g_a, double kappa_c,
                                  double omega_b) {
  if (!std::isfinite(delta_a) || !std::isfinite(g_a) || !(kappa_c > 0.0)) {
    throw InvalidInputError("enforce_ph_balanced: non-finite parameter or kappa_c <= 0");
  }
  ReducedParams r;
  r.eta = -1.0;
  r.lambda = 1.0;
  r.kappa_c = kappa_c;
  r.omega_b = omega_b;
  r.gamma_b = 0.0;
  r.Delta_a = delta_a;
  r.Delta_c = delta_a;
  r.G_a = g_a;
  r.G_c = g_a;
  return r;
}

MrRegime mr_regime(double eta) {
  if (!(eta > -2.0) || !(eta < -0.5)) {
    throw InfeasibleError("mr_regime: eta = " + std::to_string(eta) +
                          " outside (-2, -1/2); no EP3 is possible there");
  }
  if (std::abs(eta + 1.0) < kBalancedEtaTol) return MrRegime::kNeutral;
  return eta < -1.0 ? MrRegime::kLoss : MrRegime::kGain;
}

const char* to_string(MrRegime regime) {
  switch (regime) {
    case MrRegime::kLoss: return "loss";
    case MrRegime::kNeutral: return "neutral";
    case MrRegime::kGain: return "gain";
  }
  return "unknown";
}

}  // namespace omep
