#include "omep/com_model.hpp"

#include <algorithm>
#include <cmath>

#include "omep/errors.hpp"

namespace omep {
namespace {

constexpr double kDenominatorFloor = 1e-9;
constexpr double kFixedPointTol = 1e-12;
constexpr double kDamping = 0.5;
constexpr int kFixedPointCap = 1000;

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

RwaCavityCheck check_cavity(double delta_eff, double omega_b, double coupling_mag) {
  RwaCavityCheck chk;
  const double denom1 = std::abs(delta_eff - omega_b);
  const double denom2 = std::abs(delta_eff);
  if (denom1 == 0.0 || denom2 == 0.0) {
    chk.division_defined = false;
    chk.ratio1 = (denom1 == 0.0) ? std::numeric_limits<double>::infinity()
                                 : std::abs(delta_eff + omega_b) / denom1;
    chk.ratio2 = (denom2 == 0.0) ? std::numeric_limits<double>::infinity()
                                 : coupling_mag / denom2;
    return chk;
  }
  chk.ratio1 = std::abs(delta_eff + omega_b) / denom1;
  chk.ratio2 = coupling_mag / denom2;
  return chk;
}

}  // namespace

PhysicalParams PhysicalParams::from_detunings(double delta_a, double delta_c) {
  PhysicalParams p;
  p.omega_a = delta_a;
  p.omega_c = delta_c;
  p.nu_a = 0.0;
  p.nu_c = 0.0;
  return p;
}

SteadyState steady_state(const PhysicalParams& p) {
  if (!(p.kappa_c > 0.0)) {
    throw InvalidInputError("steady_state: kappa_c must be positive");
  }
  for (double v : {p.omega_a, p.omega_c, p.omega_b, p.nu_a, p.nu_c, p.g_a, p.g_c,
                   p.kappa_a, p.kappa_c, p.gamma_b, p.drive_a.real(),
                   p.drive_a.imag(), p.drive_c.real(), p.drive_c.imag()}) {
    if (!std::isfinite(v)) throw InvalidInputError("steady_state: non-finite parameter");
  }

  const double delta_a = p.detuning_a();
  const double delta_c = p.detuning_c();
  const Complex mech_denom(p.gamma_b, p.omega_b);
  if (std::abs(mech_denom) < kDenominatorFloor && (p.g_a != 0.0 || p.g_c != 0.0) &&
      (p.drive_a != Complex(0, 0) || p.drive_c != Complex(0, 0))) {
    throw InvalidInputError("steady_state: gamma_b + i omega_b too close to zero");
  }

  double shift = 0.0;  // b_s + b_s*
  SteadyState s;
  for (int iter = 0; iter < kFixedPointCap; ++iter) {
    const double dpa = delta_a + p.g_a * shift;
    const double dpc = delta_c + p.g_c * shift;
    const Complex denom_a(p.kappa_a, dpa);
    const Complex denom_c(p.kappa_c, dpc);
    if (std::abs(denom_a) < kDenominatorFloor || std::abs(denom_c) < kDenominatorFloor) {
      throw InvalidInputError("steady_state: near-singular cavity denominator");
    }
    const Complex a_s = p.drive_a / denom_a;
    const Complex c_s = p.drive_c / denom_c;
    const double power = p.g_a * std::norm(a_s) + p.g_c * std::norm(c_s);
    const Complex b_s = (power == 0.0) ? Complex(0, 0)
                                       : Complex(0, -1) * power / mech_denom;
    const double shift_next = 2.0 * b_s.real();
    const double residual = std::abs(shift_next - shift) / std::max(1.0, std::abs(shift_next));

    s.a_s = a_s;
    s.c_s = c_s;
    s.b_s = b_s;
    s.delta_a_eff = dpa;
    s.delta_c_eff = dpc;
    if (residual <= kFixedPointTol) {
      // Recompute at the converged shift so the stored fields are an
      // exact function of it.
      s.delta_a_eff = delta_a + p.g_a * shift_next;
      s.delta_c_eff = delta_c + p.g_c * shift_next;
      s.a_s = p.drive_a / Complex(p.kappa_a, s.delta_a_eff);
      s.c_s = p.drive_c / Complex(p.kappa_c, s.delta_c_eff);
      s.G_a = p.g_a * s.a_s;
      s.G_c = p.g_c * s.c_s;
      return s;
    }
    shift += kDamping * (shift_next - shift);
  }
  throw NumericFailureError("steady_state: fixed point did not converge in 1000 iterations",
                            std::abs(2.0 * s.b_s.real() - shift));
}

ReducedParams reduce(const PhysicalParams& p, const SteadyState& s,
                     PhaseConvention /*convention*/) {
  if (s.G_a == Complex(0.0, 0.0)) {
    throw InvalidInputError("reduce: G_a = 0, lambda undefined");
  }
  ReducedParams r;
  r.eta = p.kappa_a / p.kappa_c;
  r.kappa_c = p.kappa_c;
  r.gamma_b = p.gamma_b;
  r.omega_b = p.omega_b;
  r.Delta_a = s.delta_a_eff + p.omega_b;
  r.Delta_c = s.delta_c_eff + p.omega_b;
  r.G_a = std::abs(s.G_a);
  r.G_c = std::abs(s.G_c);
  r.lambda = r.G_c / r.G_a;
  return r;
}

EffectiveHamiltonian build_h_eff(const ReducedParams& r) {
  const double dpa = r.delta_a_eff();
  const double dpc = r.delta_c_eff();
  EffectiveHamiltonian h;
  h << Complex(dpa, -r.kappa_a()), Complex(r.G_a, 0.0), Complex(0.0, 0.0),
      Complex(-r.G_a, 0.0), Complex(-r.omega_b, -r.gamma_b), Complex(-r.G_c, 0.0),
      Complex(0.0, 0.0), Complex(r.G_c, 0.0), Complex(dpc, -r.kappa_c);
  return h;
}

CubicCoefficients char_cubic_x(const EffectiveHamiltonian& h, double omega_b) {
  // x = Omega + omega_b, so the monic cubic in x is the characteristic
  // polynomial of H + omega_b I. Shifting the matrix first keeps every
  // intermediate at the detuning scale instead of the omega_b scale,
  // which matters near multiple roots.
  Eigen::Matrix3cd m = h;
  m.diagonal().array() += omega_b;
  const Complex tr = m.trace();
  const Complex minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) +
                         m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                         m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const Complex det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                      m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                      m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  CubicCoefficients c;
  c.c2 = -tr;
  c.c1 = minors;
  c.c0 = -det;
  return c;
}

SpectralTriple spectrum(const EffectiveHamiltonian& h, double omega_b) {
  const auto roots = solve_cubic(char_cubic_x(h, omega_b));
  SpectralTriple x{roots[0], roots[1], roots[2]};
  std::sort(x.begin(), x.end(), lex_less);
  return x;
}

Eigen::Vector3cd eigenvector_for(const EffectiveHamiltonian& h, Complex omega) {
  Eigen::Matrix3cd m = h;
  m.diagonal().array() -= omega;
  // Unconjugated cross products of row pairs span the null space of a
  // rank-2 matrix; take the largest.
  Eigen::Vector3cd best = Eigen::Vector3cd::Zero();
  double best_norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    Eigen::Vector3cd v;
    v(0) = m(i, 1) * m(j, 2) - m(i, 2) * m(j, 1);
    v(1) = m(i, 2) * m(j, 0) - m(i, 0) * m(j, 2);
    v(2) = m(i, 0) * m(j, 1) - m(i, 1) * m(j, 0);
    const double n = v.norm();
    if (n > best_norm) {
      best_norm = n;
      best = v;
    }
  }
  if (best_norm == 0.0) {
    // Rank <= 1: any vector annihilating the single independent row.
    best = Eigen::Vector3cd::Unit(0);
    return best;
  }
  return best / best_norm;
}

RwaReport rwa_validity(const ReducedParams& r, double threshold) {
  RwaReport rep;
  rep.threshold = threshold;
  rep.cavity_a = check_cavity(r.delta_a_eff(), r.omega_b, std::abs(r.G_a));
  rep.cavity_c = check_cavity(r.delta_c_eff(), r.omega_b, std::abs(r.G_c));
  rep.ok = rep.cavity_a.division_defined && rep.cavity_c.division_defined &&
           rep.cavity_a.ratio1 < threshold && rep.cavity_a.ratio2 < threshold &&
           rep.cavity_c.ratio1 < threshold && rep.cavity_c.ratio2 < threshold;
  return rep;
}

RwaReport rwa_validity(const PhysicalParams& p, const SteadyState& s,
                       double threshold) {
  RwaReport rep;
  rep.threshold = threshold;
  rep.cavity_a = check_cavity(s.delta_a_eff, p.omega_b, std::abs(s.G_a));
  rep.cavity_c = check_cavity(s.delta_c_eff, p.omega_b, std::abs(s.G_c));
  rep.ok = rep.cavity_a.division_defined && rep.cavity_c.division_defined &&
           rep.cavity_a.ratio1 < threshold && rep.cavity_a.ratio2 < threshold &&
           rep.cavity_c.ratio1 < threshold && rep.cavity_c.ratio2 < threshold;
  return rep;
}

}  // namespace omep
