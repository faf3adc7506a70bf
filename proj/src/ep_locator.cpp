#include "omep/ep_locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "omep/errors.hpp"

namespace omep {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct DSample {
  bool valid = false;
  double d = 0.0;
};

// D along the sweep; infeasible axis values become invalid samples so a
// partially feasible range still works.
DSample d_sample(const ParamGenerator& gen, double t, const ClassifyTolerances& tol) {
  DSample s;
  try {
    const EpClass cls = classify_point(gen(t), tol);
    s.valid = true;
    s.d = cls.disc.D;
  } catch (const InfeasibleError&) {
  } catch (const NotApplicableError&) {
  }
  return s;
}

double bisect_d_zero(const ParamGenerator& gen, double lo, double hi, double d_lo,
                     const ClassifyTolerances& tol) {
  for (int i = 0; i < 200 && hi - lo > 4.0 * kEps * std::max({1.0, std::abs(lo), std::abs(hi)}); ++i) {
    const double mid = 0.5 * (lo + hi);
    const DSample s = d_sample(gen, mid, tol);
    if (!s.valid) break;  // should not happen between valid brackets
    if (s.d == 0.0) return mid;
    if ((s.d < 0.0) == (d_lo < 0.0)) {
      lo = mid;
      d_lo = s.d;
    } else {
      hi = mid;
    }
  }
  const DSample sl = d_sample(gen, lo, tol);
  const DSample sh = d_sample(gen, hi, tol);
  if (sl.valid && sh.valid) return std::abs(sl.d) <= std::abs(sh.d) ? lo : hi;
  return 0.5 * (lo + hi);
}

// Golden-section minimization of |D| for zeros without a sign change.
double minimize_abs_d(const ParamGenerator& gen, double lo, double hi,
                      const ClassifyTolerances& tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = std::abs(d_sample(gen, x1, tol).d);
  double f2 = std::abs(d_sample(gen, x2, tol).d);
  for (int i = 0; i < 200 && b - a > 4.0 * kEps * std::max({1.0, std::abs(a), std::abs(b)}); ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = std::abs(d_sample(gen, x1, tol).d);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = std::abs(d_sample(gen, x2, tol).d);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

std::optional<EpHit> make_hit(const ParamGenerator& gen, double t,
                              const ClassifyTolerances& tol) {
  ReducedParams r;
  try {
    r = gen(t);
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
  const EpClass cls = classify_point(r, tol);
  const double kc = r.kappa_c;
  if (std::abs(cls.disc.D) > tol.eps_d * std::pow(kc, 6.0)) return std::nullopt;

  EpHit hit;
  hit.axis = t;
  hit.kind = cls.kind == EpKind::kEp3 ? EpKind::kEp3 : EpKind::kEp2;
  hit.disc = cls.disc;
  const auto roots = solve_cubic(cls.cubic);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double gap = std::abs(roots[i] - roots[j]);
      if (gap < best) {
        best = gap;
        hit.pair_i = i;
        hit.pair_j = j;
        hit.x = 0.5 * (roots[i] + roots[j]);
        hit.root_spread = gap;
      }
    }
  }
  return hit;
}

}  // namespace

const char* to_string(EpKind kind) {
  switch (kind) {
    case EpKind::kThreeReal: return "three_real";
    case EpKind::kOneRealPair: return "one_real_pair";
    case EpKind::kEp2: return "ep2";
    case EpKind::kEp3: return "ep3";
  }
  return "unknown";
}

Ep3Criticals ep3_criticals(double eta, double kappa_c) {
  if (!std::isfinite(eta) || !(kappa_c > 0.0)) {
    throw InvalidInputError("ep3_criticals: non-finite eta or kappa_c <= 0");
  }
  mr_regime(eta);  // throws outside (-2, -1/2)

  Ep3Criticals crit;
  if (std::abs(eta + 1.0) < kBalancedEtaTol) {
    crit.lambda_ep3 = 1.0;
    crit.g_a_ep3 = 2.0 * kappa_c;
    crit.delta_a_ep3_plus = 3.0 * std::sqrt(3.0) * kappa_c;
    crit.delta_a_ep3_minus = -crit.delta_a_ep3_plus;
    crit.x_ep3 = 2.0 * std::sqrt(3.0) * kappa_c;
    crit.g_a_min = 0.0;  // Delta_a is unconstrained in the balanced case
    return crit;
  }

  const double lambda = std::pow((2.0 * eta + 1.0) / (eta * (eta + 2.0)), 1.5);
  const double lam_sq = lambda * lambda;
  const double lam2eta = 1.0 + lam_sq * eta;
  const double eta_term = eta * (1.0 + eta);
  const double bracket =
      -3.0 * (1.0 + lam_sq) / (1.0 + eta + eta * eta) - lam2eta / eta_term;
  if (!(bracket > 0.0)) {
    throw NumericFailureError("ep3_criticals: degenerate coupling bracket at eta = " +
                              std::to_string(eta));
  }
  crit.lambda_ep3 = lambda;
  crit.g_a_ep3 = 2.0 * kappa_c / std::sqrt(bracket);
  const double delta_sq =
      -lam2eta * crit.g_a_ep3 * crit.g_a_ep3 / eta_term - kappa_c * kappa_c;
  crit.delta_a_ep3_plus = std::sqrt(std::max(0.0, delta_sq));
  crit.delta_a_ep3_minus = -crit.delta_a_ep3_plus;
  crit.x_ep3 = (1.0 - eta) * crit.delta_a_ep3_plus / 3.0;
  crit.g_a_min = kappa_c * std::sqrt(-eta_term / lam2eta);
  return crit;
}

CubicCoefficients reduced_cubic(const ReducedParams& r) {
  const double eta = r.eta;
  const double kc2 = r.kappa_c * r.kappa_c;
  const double ga2 = r.G_a * r.G_a;
  const double gc2 = r.G_c * r.G_c;
  CubicCoefficients c;
  c.c2 = Complex((eta - 1.0) * r.Delta_a, 0.0);
  c.c1 = Complex(ga2 + gc2 - eta * r.Delta_a * r.Delta_a + (1.0 + eta + eta * eta) * kc2, 0.0);
  c.c0 = Complex((eta * ga2 - gc2) * r.Delta_a -
                     (1.0 + eta) * (1.0 + eta) * (1.0 - eta) * kc2 * r.Delta_a,
                 0.0);
  return c;
}

EpClass classify_point(const ReducedParams& r, const ClassifyTolerances& tol) {
  const PhResiduals res = ph_residuals(r);
  const double kc = r.kappa_c;
  if (std::abs(res.r1) > tol.ph.r1 * kc || std::abs(res.r2) > tol.ph.r2 * kc) {
    throw NotApplicableError(
        "classify_point: parameters break the rate/detuning pseudo-Hermitian "
        "conditions; the real-coefficient classification does not apply");
  }
  EpClass cls;
  cls.cubic = reduced_cubic(r);
  cls.disc = cubic_discriminant(cls.cubic);
  const double eps_d = tol.eps_d * std::pow(kc, 6.0);
  const double eps_a = tol.eps_a * kc * kc;
  const double eps_b = tol.eps_b * kc * kc * kc;
  if (std::abs(cls.disc.D) <= eps_d) {
    cls.kind = (std::abs(cls.disc.A) <= eps_a && std::abs(cls.disc.B) <= eps_b)
                   ? EpKind::kEp3
                   : EpKind::kEp2;
  } else {
    cls.kind = cls.disc.D < 0.0 ? EpKind::kThreeReal : EpKind::kOneRealPair;
  }
  return cls;
}

std::vector<EpHit> find_ep2(const ParamGenerator& gen, double from, double to,
                            const ClassifyTolerances& tol, int grid_n) {
  if (!(to >= from) || grid_n < 2) {
    throw InvalidInputError("find_ep2: need to >= from and grid_n >= 2");
  }
  const double step = (to - from) / (grid_n - 1);
  std::vector<double> ts(grid_n);
  std::vector<DSample> ds(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    ts[i] = from + i * step;
    ds[i] = d_sample(gen, ts[i], tol);
  }

  std::vector<EpHit> hits;
  auto push_hit = [&](double t) {
    if (auto hit = make_hit(gen, t, tol)) hits.push_back(*hit);
  };

  for (int i = 0; i + 1 < grid_n; ++i) {
    if (!ds[i].valid || !ds[i + 1].valid) continue;
    if (ds[i].d == 0.0) {
      push_hit(ts[i]);
    } else if ((ds[i].d < 0.0) != (ds[i + 1].d < 0.0)) {
      push_hit(bisect_d_zero(gen, ts[i], ts[i + 1], ds[i].d, tol));
    }
  }
  if (grid_n >= 1 && ds[grid_n - 1].valid && ds[grid_n - 1].d == 0.0) {
    push_hit(ts[grid_n - 1]);
  }

  // Tangential zeros: |D| dips without a sign change.
  for (int i = 1; i + 1 < grid_n; ++i) {
    if (!ds[i - 1].valid || !ds[i].valid || !ds[i + 1].valid) continue;
    const bool same_sign = (ds[i - 1].d < 0.0) == (ds[i].d < 0.0) &&
                           (ds[i].d < 0.0) == (ds[i + 1].d < 0.0);
    if (!same_sign || ds[i].d == 0.0) continue;
    if (std::abs(ds[i].d) <= std::abs(ds[i - 1].d) &&
        std::abs(ds[i].d) <= std::abs(ds[i + 1].d)) {
      push_hit(minimize_abs_d(gen, ts[i - 1], ts[i + 1], tol));
    }
  }

  std::sort(hits.begin(), hits.end(),
            [](const EpHit& a, const EpHit& b) { return a.axis < b.axis; });
  std::vector<EpHit> merged;
  for (const EpHit& h : hits) {
    if (!merged.empty() && std::abs(h.axis - merged.back().axis) <= kRootClusterRadius) {
      if (std::abs(h.disc.D) < std::abs(merged.back().disc.D)) merged.back() = h;
    } else {
      merged.push_back(h);
    }
  }
  return merged;
}

}  // namespace omep
