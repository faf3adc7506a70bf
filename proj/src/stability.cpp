#include "omep/stability.hpp"

#include <cmath>

#include "omep/complex_poly.hpp"
#include "omep/errors.hpp"

namespace omep {
namespace {

constexpr double kPivotEpsilon = 1e-12;

}  // namespace

DriftMatrix build_drift_matrix(const ReducedParams& r) {
  const double ka = r.kappa_a();
  const double kc = r.kappa_c;
  const double gb = r.gamma_b;
  const double dpa = r.delta_a_eff();
  const double dpc = r.delta_c_eff();
  const double ga = r.G_a;
  const double gc = r.G_c;
  const double wb = r.omega_b;

  DriftMatrix m;
  m << -ka, dpa, 0.0, -ga, 0.0, 0.0,
      -dpa, -ka, -ga, 0.0, 0.0, 0.0,
      0.0, -ga, -gb, wb, 0.0, -gc,
      -ga, 0.0, -wb, -gb, -gc, 0.0,
      0.0, 0.0, 0.0, -gc, -kc, dpc,
      0.0, 0.0, -gc, 0.0, -dpc, -kc;
  return m;
}

std::array<double, 6> char_coeffs(const DriftMatrix& m) {
  std::array<double, 6> c{};
  DriftMatrix mk = m;
  double ak = 0.0;
  for (int k = 1; k <= 6; ++k) {
    if (k > 1) mk = m * (mk + ak * DriftMatrix::Identity());
    ak = -mk.trace() / k;
    c[6 - k] = ak;  // coefficient of lambda^(6-k)
  }
  return c;
}

RouthResult routh_hurwitz(const std::array<double, 6>& coeffs) {
  // rows[0] = [1, c4, c2, c0], rows[1] = [c5, c3, c1, 0], then the
  // usual cross-product recurrence down to the lambda^0 row.
  std::array<std::array<double, 4>, 7> rows{};
  rows[0] = {1.0, coeffs[4], coeffs[2], coeffs[0]};
  rows[1] = {coeffs[5], coeffs[3], coeffs[1], 0.0};

  RouthResult result;
  for (int j = 2; j < 7; ++j) {
    auto& prev = rows[j - 1];
    const auto& prev2 = rows[j - 2];
    const bool all_zero =
        prev[0] == 0.0 && prev[1] == 0.0 && prev[2] == 0.0 && prev[3] == 0.0;
    if (all_zero) {
      // Auxiliary polynomial from the row above; replace with its
      // derivative. Row j-2 represents degree (8-j).
      result.marginal = true;
      const int degree = 8 - j;
      for (int i = 0; i < 4; ++i) {
        const int power = degree - 2 * i;
        prev[i] = power > 0 ? prev2[i] * power : 0.0;
      }
    }
    if (prev[0] == 0.0) {
      result.marginal = true;
      prev[0] = kPivotEpsilon;
    }
    for (int i = 0; i < 3; ++i) {
      rows[j][i] = (prev[0] * prev2[i + 1] - prev2[0] * prev[i + 1]) / prev[0];
    }
    rows[j][3] = 0.0;
  }

  result.first_column.reserve(7);
  bool all_positive = true;
  for (const auto& row : rows) {
    result.first_column.push_back(row[0]);
    if (!(row[0] > 0.0)) all_positive = false;
    if (std::abs(row[0]) <= kPivotEpsilon) result.marginal = true;
  }
  result.stable = all_positive && !result.marginal;
  return result;
}

StabilityReport stability_report(const ReducedParams& r) {
  StabilityReport rep;
  const DriftMatrix m = build_drift_matrix(r);
  rep.char_coeffs = char_coeffs(m);

  const RouthResult rh = routh_hurwitz(rep.char_coeffs);
  rep.rh_stable = rh.stable;
  rep.rh_marginal = rh.marginal;
  rep.rh_first_column = rh.first_column;

  const std::array<Complex, 7> poly = {
      Complex(1.0, 0.0),           Complex(rep.char_coeffs[5], 0.0),
      Complex(rep.char_coeffs[4], 0.0), Complex(rep.char_coeffs[3], 0.0),
      Complex(rep.char_coeffs[2], 0.0), Complex(rep.char_coeffs[1], 0.0),
      Complex(rep.char_coeffs[0], 0.0)};
  try {
    const auto eigenvalues = poly_roots_oracle(poly);
    double max_re = -std::numeric_limits<double>::infinity();
    for (const Complex& ev : eigenvalues) max_re = std::max(max_re, ev.real());
    rep.max_real_part = max_re;
    rep.eigen_stable = max_re < 0.0;
    rep.oracle_ok = true;
  } catch (const NumericFailureError&) {
    rep.oracle_ok = false;
    rep.eigen_stable = false;
    rep.max_real_part = std::nan("");
  }
  return rep;
}

}  // namespace omep
