#include "omep/com_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "omep/ep_locator.hpp"
#include "omep/errors.hpp"
#include "omep/pseudo_hermitian.hpp"
#include "test_support.hpp"

using namespace omep;

namespace {

PhysicalParams driven_example() {
  PhysicalParams p = PhysicalParams::from_detunings(-10.0, -10.0);
  p.omega_b = 10.0;
  p.gamma_b = 0.01;
  p.g_a = 1e-3;
  p.g_c = 1e-3;
  p.drive_a = Complex(1e3, 0);
  p.drive_c = Complex(1e3, 0);
  p.kappa_a = -1.0;
  p.kappa_c = 1.0;
  return p;
}

}  // namespace

TEST_CASE("steady_state: decoupled limit keeps the bare detunings") {
  PhysicalParams p = PhysicalParams::from_detunings(-20.0, -15.0);
  p.g_a = 0.0;
  p.g_c = 0.0;
  p.drive_a = Complex(100.0, 0);
  p.drive_c = Complex(50.0, 25.0);
  const SteadyState s = steady_state(p);
  CHECK(s.b_s == Complex(0, 0));
  CHECK(s.delta_a_eff == -20.0);
  CHECK(s.delta_c_eff == -15.0);
  CHECK(std::abs(s.a_s - p.drive_a / Complex(p.kappa_a, -20.0)) < 1e-14);
}

TEST_CASE("steady_state: undriven system is empty") {
  PhysicalParams p = PhysicalParams::from_detunings(-20.0, -15.0);
  p.g_a = 1e-3;
  p.g_c = 1e-3;
  const SteadyState s = steady_state(p);
  CHECK(s.a_s == Complex(0, 0));
  CHECK(s.b_s == Complex(0, 0));
  CHECK(s.c_s == Complex(0, 0));
}

TEST_CASE("steady_state: driven fixed point converges with a tiny shift") {
  const PhysicalParams p = driven_example();
  const SteadyState s = steady_state(p);

  // Fixed-point residuals of the defining equations.
  const Complex a_rhs = p.drive_a / Complex(p.kappa_a, s.delta_a_eff);
  const Complex c_rhs = p.drive_c / Complex(p.kappa_c, s.delta_c_eff);
  const Complex b_rhs = Complex(0, -1) *
                        (p.g_a * std::norm(s.a_s) + p.g_c * std::norm(s.c_s)) /
                        Complex(p.gamma_b, p.omega_b);
  CHECK(std::abs(s.a_s - a_rhs) / std::abs(a_rhs) < 1e-10);
  CHECK(std::abs(s.c_s - c_rhs) / std::abs(c_rhs) < 1e-10);
  CHECK(std::abs(s.b_s - b_rhs) / std::abs(b_rhs) < 1e-10);

  const double shift = std::abs(s.delta_a_eff - p.detuning_a());
  CHECK(shift > 0.0);
  CHECK(shift < 1e-2);
}

TEST_CASE("steady_state: near-singular denominator is rejected") {
  PhysicalParams p = PhysicalParams::from_detunings(0.0, -15.0);
  p.kappa_a = 0.0;
  p.drive_a = Complex(1.0, 0);
  CHECK_THROWS_AS(steady_state(p), InvalidInputError);
}

TEST_CASE("reduce: ratios and detunings") {
  const PhysicalParams p = driven_example();
  const SteadyState s = steady_state(p);
  const ReducedParams r = reduce(p, s);
  CHECK(r.eta == -1.0);
  CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-12));  // |G_c| = |G_a| here
  CHECK(r.Delta_a == doctest::Approx(s.delta_a_eff + p.omega_b).epsilon(1e-12));
  CHECK(r.Delta_c == doctest::Approx(s.delta_c_eff + p.omega_b).epsilon(1e-12));
  CHECK(r.G_a == doctest::Approx(std::abs(s.G_a)).epsilon(1e-12));
}

TEST_CASE("reduce: zero G_a is rejected") {
  PhysicalParams p = driven_example();
  p.g_a = 0.0;
  const SteadyState s = steady_state(p);
  CHECK_THROWS_AS(reduce(p, s), InvalidInputError);
}

TEST_CASE("build_h_eff: decoupled matrix is diagonal") {
  ReducedParams r = enforce_ph_balanced(5.0, 0.0);
  const EffectiveHamiltonian h = build_h_eff(r);
  CHECK(h(0, 1) == Complex(0, 0));
  CHECK(h(1, 0) == Complex(0, 0));
  CHECK(h(1, 2) == Complex(0, 0));
  CHECK(h(0, 0) == Complex(r.delta_a_eff(), 1.0));  // kappa_a = -1
  CHECK(h(2, 2) == Complex(r.delta_c_eff(), -1.0));
}

TEST_CASE("build_h_eff: quoted entries of the balanced EP3 instance") {
  const ReducedParams r = enforce_ph_balanced(3.0 * std::sqrt(3.0), 2.0);
  const EffectiveHamiltonian h = build_h_eff(r);
  CHECK(h(1, 0) == Complex(-2.0, 0));
  CHECK(h(1, 1) == Complex(-50.0, 0));  // omega_b defaults to 50, gamma_b = 0
}

TEST_CASE("build_h_eff: characteristic cubic matches the reduced-parameter form") {
  const ReducedParams r = enforce_ph(-1.1, 1.334, 1.824, 1.0);
  const CubicCoefficients from_h = char_cubic_x(build_h_eff(r), r.omega_b);
  const CubicCoefficients from_r = reduced_cubic(r);
  CHECK(std::abs(from_h.c2 - from_r.c2) < 1e-10 * std::max(1.0, std::abs(from_r.c2)));
  CHECK(std::abs(from_h.c1 - from_r.c1) < 1e-10 * std::max(1.0, std::abs(from_r.c1)));
  CHECK(std::abs(from_h.c0 - from_r.c0) < 1e-10 * std::max(1.0, std::abs(from_r.c0)));
}

TEST_CASE("char_cubic_x: agrees with the determinant at probe points") {
  const ReducedParams r = enforce_ph(-0.8, 0.494, 2.613, 1.0);
  const EffectiveHamiltonian h = build_h_eff(r);
  const CubicCoefficients c = char_cubic_x(h, r.omega_b);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int probe = 0; probe < 5; ++probe) {
    const Complex x(dist(rng), dist(rng));
    const Complex omega = x - r.omega_b;
    Eigen::Matrix3cd m = h;
    m.diagonal().array() -= omega;
    const Complex det = m.determinant();
    // The monic cubic in x is -det(H - Omega I).
    CHECK(std::abs(eval_cubic(c, x) + det) <= 1e-9 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("spectrum: diagonal Hamiltonian returns shifted diagonal entries") {
  ReducedParams r = enforce_ph_balanced(4.0, 0.0);
  const SpectralTriple x = spectrum(build_h_eff(r), r.omega_b);
  // Diagonal entries as x = Omega + omega_b: Delta_a + i, 0, Delta_c - i.
  const std::vector<Complex> expected{{4.0, 1.0}, {0.0, 0.0}, {4.0, -1.0}};
  CHECK(test::multiset_distance(expected, std::vector<Complex>(x.begin(), x.end())) < 1e-9);
}

TEST_CASE("spectrum: balanced EP3 instance collapses to 2 sqrt(3)") {
  const ReducedParams r = enforce_ph_balanced(3.0 * std::sqrt(3.0), 2.0);
  const SpectralTriple x = spectrum(build_h_eff(r), r.omega_b);
  for (const auto& xi : x) {
    CHECK(std::abs(xi - Complex(2.0 * std::sqrt(3.0), 0)) < 1e-6);
  }
}

TEST_CASE("spectrum: pseudo-Hermitian points give real or conjugate-paired values") {
  const ReducedParams r = enforce_ph(-1.1, 1.334, 2.5, 1.0);
  const SpectralTriple x = spectrum(build_h_eff(r), r.omega_b);
  double im_sum = 0.0;
  for (const auto& xi : x) im_sum += xi.imag();
  CHECK(std::abs(im_sum) < 1e-8);
}

TEST_CASE("eigenvector residual is small") {
  const ReducedParams r = enforce_ph(-1.1, 1.334, 2.5, 1.0);
  const EffectiveHamiltonian h = build_h_eff(r);
  const SpectralTriple x = spectrum(h, r.omega_b);
  for (const auto& xi : x) {
    const Complex omega = xi - r.omega_b;
    const Eigen::Vector3cd v = eigenvector_for(h, omega);
    Eigen::Matrix3cd m = h;
    m.diagonal().array() -= omega;
    CHECK((m * v).norm() <= 1e-8 * std::max(1.0, h.norm()));
  }
}

TEST_CASE("property: spectrum is scale covariant") {
  const PhysicalParams base = driven_example();
  const SteadyState s0 = steady_state(base);
  const SpectralTriple x0 = spectrum(build_h_eff(reduce(base, s0)), base.omega_b);
  for (double scale : {0.5, 2.0, 10.0}) {
    PhysicalParams p = base;
    p.omega_a *= scale;
    p.omega_c *= scale;
    p.omega_b *= scale;
    p.nu_a *= scale;
    p.nu_c *= scale;
    p.g_a *= scale;
    p.g_c *= scale;
    p.drive_a *= scale;
    p.drive_c *= scale;
    p.kappa_a *= scale;
    p.kappa_c *= scale;
    p.gamma_b *= scale;
    const SteadyState s = steady_state(p);
    const SpectralTriple x = spectrum(build_h_eff(reduce(p, s)), p.omega_b);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(x[i] - scale * x0[i]) <= 1e-10 * std::max(1.0, std::abs(scale * x0[i])));
    }
  }
}

TEST_CASE("rwa_validity: exact blue sideband and decoupled ratios") {
  ReducedParams r;
  r.omega_b = 50.0;
  r.Delta_a = 0.0;  // delta' = -omega_b
  r.Delta_c = 0.0;
  r.G_a = 0.0;
  r.G_c = 0.0;
  const RwaReport rep = rwa_validity(r);
  CHECK(rep.cavity_a.ratio1 == 0.0);
  CHECK(rep.cavity_a.ratio2 == 0.0);
  CHECK(rep.ok);
}

TEST_CASE("rwa_validity: quoted ratios at delta' = -0.9 omega_b") {
  ReducedParams r;
  r.omega_b = 50.0;
  r.Delta_a = 5.0;  // delta' = -45
  r.Delta_c = 5.0;
  r.G_a = 2.0;
  r.G_c = 2.0;
  const RwaReport rep = rwa_validity(r);
  CHECK(rep.cavity_a.ratio1 == doctest::Approx(5.0 / 95.0).epsilon(1e-12));
  CHECK(rep.cavity_a.ratio2 == doctest::Approx(2.0 / 45.0).epsilon(1e-12));
  CHECK(rep.ok);
}

TEST_CASE("rwa_validity: delta' = omega_b flags the undefined division") {
  ReducedParams r;
  r.omega_b = 50.0;
  r.Delta_a = 100.0;  // delta' = +omega_b
  r.Delta_c = 0.0;
  const RwaReport rep = rwa_validity(r);
  CHECK_FALSE(rep.cavity_a.division_defined);
  CHECK_FALSE(rep.ok);
}
