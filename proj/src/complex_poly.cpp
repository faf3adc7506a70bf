#include "omep/complex_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omep/errors.hpp"

namespace omep {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Noise floor below which a depressed cubic is indistinguishable from a
// perfect triple root. Measured against powers of |c2| because the
// triple root itself is -c2/3.
constexpr double kTripleSnapTol = 64.0 * kEps;

bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Complex cubic_derivative(const CubicCoefficients& c, Complex x) {
  return (3.0 * x + 2.0 * c.c2) * x + c.c1;
}

// Newton steps accepted only while they reduce |p(x)|, so polishing can
// never make a root worse (important next to multiple roots, where the
// raw Newton step is unreliable).
Complex polish_root(const CubicCoefficients& c, Complex x) {
  double best = std::abs(eval_cubic(c, x));
  for (int i = 0; i < 2 && best > 0.0; ++i) {
    const Complex df = cubic_derivative(c, x);
    if (df == Complex(0.0, 0.0)) break;
    const Complex candidate = x - eval_cubic(c, x) / df;
    const double res = std::abs(eval_cubic(c, candidate));
    if (!(res < best) || !is_finite(candidate)) break;
    x = candidate;
    best = res;
  }
  return x;
}

double polish_real_root(const CubicCoefficients& c, double x) {
  const double c2 = c.c2.real(), c1 = c.c1.real(), c0 = c.c0.real();
  auto p = [&](double t) { return ((t + c2) * t + c1) * t + c0; };
  auto dp = [&](double t) { return (3.0 * t + 2.0 * c2) * t + c1; };
  double best = std::abs(p(x));
  for (int i = 0; i < 2 && best > 0.0; ++i) {
    const double d = dp(x);
    if (d == 0.0) break;
    const double candidate = x - p(x) / d;
    const double res = std::abs(p(candidate));
    if (!(res < best) || !std::isfinite(candidate)) break;
    x = candidate;
    best = res;
  }
  return x;
}

// Real-coefficient branch: keeps real roots exactly real and complex
// pairs exactly conjugate.
std::array<Complex, 3> solve_cubic_real(double c2, double c1, double c0) {
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = (2.0 * c2 * c2 / 27.0 - c1 / 3.0) * c2 + c0;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  const CubicCoefficients cc{Complex(c2, 0), Complex(c1, 0), Complex(c0, 0)};

  if (disc >= 0.0) {
    // One real root plus a conjugate pair (pair degenerates to a real
    // double root when disc == 0).
    const double s = std::sqrt(disc);
    const double u3 = (q >= 0.0) ? -half_q - s : -half_q + s;
    const double u = std::cbrt(u3);
    const double v = (u != 0.0) ? -third_p / u : 0.0;
    double real_root = polish_real_root(cc, u + v - shift);
    const double pair_re = -0.5 * (u + v) - shift;
    const double pair_im = 0.5 * std::sqrt(3.0) * std::abs(u - v);
    if (pair_im == 0.0) {
      const double dbl = polish_real_root(cc, pair_re);
      return {Complex(real_root, 0), Complex(dbl, 0), Complex(dbl, 0)};
    }
    Complex z = polish_root(cc, Complex(pair_re, pair_im));
    if (z.imag() < 0.0) z = std::conj(z);
    return {Complex(real_root, 0), std::conj(z), z};
  }

  // Casus irreducibilis: three real roots via the trigonometric form.
  const double r = std::sqrt(-third_p);
  const double arg = std::clamp(-half_q / (r * r * r), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  constexpr double kTwoThirdsPi = 2.0943951023931953;
  std::array<Complex, 3> roots;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * r * std::cos(phi - kTwoThirdsPi * k);
    roots[k] = Complex(polish_real_root(cc, t - shift), 0.0);
  }
  return roots;
}

std::array<Complex, 3> solve_cubic_complex(const CubicCoefficients& c) {
  const Complex shift = c.c2 / 3.0;
  const Complex p = c.c1 - c.c2 * c.c2 / 3.0;
  const Complex q = (2.0 * c.c2 * c.c2 / 27.0 - c.c1 / 3.0) * c.c2 + c.c0;
  const Complex half_q = 0.5 * q;
  const Complex disc = half_q * half_q + (p / 3.0) * (p / 3.0) * (p / 3.0);
  const Complex s = std::sqrt(disc);

  // Pick the cube-root argument of larger magnitude so u and the
  // following division are well conditioned.
  const Complex w_minus = -half_q - s;
  const Complex w_plus = -half_q + s;
  const Complex u3 = (std::abs(w_minus) >= std::abs(w_plus)) ? w_minus : w_plus;
  const Complex u = std::pow(u3, 1.0 / 3.0);
  const Complex v = (u != Complex(0, 0)) ? -(p / 3.0) / u : Complex(0, 0);

  // The candidate of largest magnitude is Cardano's most accurate one;
  // take it as the pivot and deflate.
  constexpr Complex kOmega{-0.5, 0.8660254037844386};
  const Complex omega_bar = std::conj(kOmega);
  Complex pivot = u + v;
  Complex t1 = kOmega * u + omega_bar * v;
  Complex t2 = omega_bar * u + kOmega * v;
  if (std::abs(t1) > std::abs(pivot)) std::swap(pivot, t1);
  if (std::abs(t2) > std::abs(pivot)) std::swap(pivot, t2);

  const Complex x1 = polish_root(c, pivot - shift);

  // Synthetic division by (x - x1) leaves x^2 + bx + d.
  const Complex b = c.c2 + x1;
  const Complex d = c.c1 + x1 * b;
  const Complex qdisc = std::sqrt(b * b - 4.0 * d);
  const Complex back = (std::real(std::conj(b) * qdisc) >= 0.0) ? b + qdisc
                                                                : b - qdisc;
  Complex x2, x3;
  if (back == Complex(0, 0)) {
    x2 = -0.5 * b;
    x3 = -0.5 * b;
  } else {
    x2 = -0.5 * back;
    x3 = d / x2;
  }
  return {x1, polish_root(c, x2), polish_root(c, x3)};
}

}  // namespace

Complex eval_cubic(const CubicCoefficients& c, Complex x) {
  return ((x + c.c2) * x + c.c1) * x + c.c0;
}

Complex eval_poly(std::span<const Complex> coeffs, Complex x) {
  Complex acc{0.0, 0.0};
  for (const Complex& a : coeffs) acc = acc * x + a;
  return acc;
}

std::array<Complex, 3> solve_cubic(const CubicCoefficients& c) {
  if (!is_finite(c.c2) || !is_finite(c.c1) || !is_finite(c.c0)) {
    throw InvalidInputError("solve_cubic: non-finite coefficient");
  }

  const Complex p = c.c1 - c.c2 * c.c2 / 3.0;
  const Complex q = (2.0 * c.c2 * c.c2 / 27.0 - c.c1 / 3.0) * c.c2 + c.c0;
  const double m2 = std::max(1.0, std::max(std::norm(c.c2), std::abs(c.c1)));
  const double m3 = std::max({1.0, std::pow(std::abs(c.c2), 3.0),
                              std::abs(c.c2) * std::abs(c.c1),
                              std::abs(c.c0)});
  std::array<Complex, 3> roots;
  if (std::abs(p) <= kTripleSnapTol * m2 && std::abs(q) <= kTripleSnapTol * m3) {
    const Complex triple = -c.c2 / 3.0;
    roots = {triple, triple, triple};
  } else if (c.c2.imag() == 0.0 && c.c1.imag() == 0.0 && c.c0.imag() == 0.0) {
    roots = solve_cubic_real(c.c2.real(), c.c1.real(), c.c0.real());
  } else {
    roots = solve_cubic_complex(c);
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

std::vector<Complex> poly_roots_oracle(std::span<const Complex> coeffs) {
  if (coeffs.size() < 2 || coeffs.size() > 9) {
    throw InvalidInputError("poly_roots_oracle: degree must be in [1, 8]");
  }
  for (const Complex& a : coeffs) {
    if (!is_finite(a)) {
      throw InvalidInputError("poly_roots_oracle: non-finite coefficient");
    }
  }
  if (coeffs[0] == Complex(0.0, 0.0)) {
    throw InvalidInputError("poly_roots_oracle: zero leading coefficient");
  }

  const std::size_t degree = coeffs.size() - 1;
  std::vector<Complex> monic(coeffs.size());
  monic[0] = Complex(1.0, 0.0);
  double coeff_bound = 0.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    monic[k] = coeffs[k] / coeffs[0];
    coeff_bound = std::max(coeff_bound, std::abs(monic[k]));
  }
  const double radius = 1.0 + coeff_bound;  // Cauchy bound on every root

  // Fixed initial-guess rule: non-real powers spread inside the root
  // bound, so the iteration is deterministic run to run.
  const Complex seed{0.4, 0.9};
  std::vector<Complex> z(degree);
  Complex power = seed;
  for (std::size_t k = 0; k < degree; ++k) {
    z[k] = radius * power;
    power *= seed;
  }

  auto scaled_residual = [&](Complex zk) {
    double magnitude_sum = 0.0;
    double zpow = 1.0;
    const double az = std::abs(zk);
    for (std::size_t k = 0; k <= degree; ++k) {
      magnitude_sum += std::abs(monic[degree - k]) * zpow;
      zpow *= az;
    }
    return std::abs(eval_poly(monic, zk)) / std::max(1.0, magnitude_sum);
  };

  constexpr int kMaxIterations = 1000;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < degree; ++k) {
      Complex denom{1.0, 0.0};
      for (std::size_t j = 0; j < degree; ++j) {
        if (j != k) denom *= z[k] - z[j];
      }
      if (denom == Complex(0.0, 0.0)) {
        z[k] += Complex(1e-8, 1e-8) * (1.0 + std::abs(z[k]));
        max_step = std::numeric_limits<double>::max();
        continue;
      }
      const Complex step = eval_poly(monic, z[k]) / denom;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (max_step <= 4.0 * kEps) break;
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < degree; ++k) {
    worst = std::max(worst, scaled_residual(z[k]));
  }
  if (!(worst <= 1e-9)) {
    throw NumericFailureError("poly_roots_oracle: no convergence, worst scaled residual " +
                                  std::to_string(worst),
                              worst);
  }
  std::sort(z.begin(), z.end(), lex_less);
  return z;
}

DiscriminantReport cubic_discriminant(const CubicCoefficients& c, double im_tol) {
  if (!is_finite(c.c2) || !is_finite(c.c1) || !is_finite(c.c0)) {
    throw InvalidInputError("cubic_discriminant: non-finite coefficient");
  }
  if (std::abs(c.c2.imag()) > im_tol || std::abs(c.c1.imag()) > im_tol ||
      std::abs(c.c0.imag()) > im_tol) {
    throw NotApplicableError(
        "cubic_discriminant: materially complex coefficients; the D/A/B/C "
        "classification applies to the real-coefficient case only");
  }
  const double c2 = c.c2.real(), c1 = c.c1.real(), c0 = c.c0.real();
  DiscriminantReport rep;
  rep.A = c2 * c2 - 3.0 * c1;
  rep.B = c1 * c2 - 9.0 * c0;
  rep.C = c1 * c1 - 3.0 * c0 * c2;
  rep.D = rep.B * rep.B - 4.0 * rep.A * rep.C;
  return rep;
}

}  // namespace omep
