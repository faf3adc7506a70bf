#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "omep/complex_poly.hpp"

namespace omep::test {

/// Smallest (over matchings) maximum per-element distance between two
/// equal-size multisets, each distance scaled by max(1, |a|). Exhaustive
/// permutation search; fine up to n = 8.
inline double multiset_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double scale = std::max(1.0, std::abs(a[i]));
      worst = std::max(worst, std::abs(a[i] - b[perm[i]]) / scale);
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Monic coefficients (highest power first) of the polynomial with the
/// given roots, by repeated multiplication with (x - r).
inline std::vector<Complex> poly_from_roots(std::span<const Complex> roots) {
  std::vector<Complex> coeffs{Complex(1.0, 0.0)};
  for (const Complex& r : roots) {
    coeffs.push_back(Complex(0.0, 0.0));
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
      coeffs[k] -= r * coeffs[k - 1];
    }
  }
  return coeffs;
}

inline double min_pairwise(std::span<const Complex> xs) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      best = std::min(best, std::abs(xs[i] - xs[j]));
    }
  }
  return best;
}

inline double max_spread(std::span<const Complex> xs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      worst = std::max(worst, std::abs(xs[i] - xs[j]));
    }
  }
  return worst;
}

}  // namespace omep::test
