#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace omep {

/// All spectra, amplitudes and coefficients are expressed in units of the
/// loss rate of cavity c (kappa_c), so every quantity here is a plain
/// dimensionless complex number.
using Complex = std::complex<double>;

/// Coefficients of the monic cubic x^3 + c2 x^2 + c1 x + c0.
/// Real-valued in the pseudo-Hermitian case, complex otherwise.
struct CubicCoefficients {
  Complex c2{0.0, 0.0};
  Complex c1{0.0, 0.0};
  Complex c0{0.0, 0.0};
};

/// Cardano-style discriminant quantities of a real-coefficient cubic:
///   A = c2^2 - 3 c1
///   B = c1 c2 - 9 c0
///   C = c1^2 - 3 c0 c2
///   D = B^2 - 4 A C
/// D < 0 gives three real roots; D > 0 one real root plus a conjugate
/// pair; D = 0 with A = B = 0 a triple root (EP3), with A, B != 0 a
/// double root (EP2).
struct DiscriminantReport {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

/// Cluster radius used by callers that need to detect coalesced roots.
inline constexpr double kRootClusterRadius = 1e-6;

/// Closed-form roots of x^3 + c2 x^2 + c1 x + c0 = 0.
///
/// Works for complex coefficients (needed once the pseudo-Hermitian
/// condition is broken). The branch of the cube root is chosen to
/// maximize the magnitude of the Cardano intermediate and the remaining
/// roots come from quadratic deflation, so the result stays accurate
/// near multiple roots. For exactly real coefficients the real/trig
/// branch is used, which returns real roots with zero imaginary part
/// and complex pairs that are exact conjugates.
///
/// Throws InvalidInputError on non-finite coefficients.
std::array<Complex, 3> solve_cubic(const CubicCoefficients& c);

/// Independent root oracle: simultaneous (Durand-Kerner) iteration on a
/// general polynomial, degree 1..8.
///
/// `coeffs` is highest power first: coeffs[0] x^n + ... + coeffs[n].
/// Deterministic: initial guesses follow the fixed (0.4 + 0.9i)^k rule
/// scaled by the Cauchy root bound. Scaled residuals are driven below
/// 1e-9; NumericFailureError (carrying the worst residual) is thrown if
/// the iteration cap is reached first. Roots of multiplicity m come back
/// as a cluster of radius roughly eps^(1/m) (about 1e-2 for m = 6).
///
/// Throws InvalidInputError on zero leading coefficient, non-finite
/// input, or degree outside [1, 8].
std::vector<Complex> poly_roots_oracle(std::span<const Complex> coeffs);

/// Discriminant quantities of Eqs. A/B/C/D above for a real-coefficient
/// cubic. Coefficients whose imaginary part exceeds `im_tol` (in
/// kappa_c-normalized units) make the classification meaningless and
/// raise NotApplicableError.
DiscriminantReport cubic_discriminant(const CubicCoefficients& c,
                                      double im_tol = 1e-12);

/// Horner evaluation of the monic cubic at x.
Complex eval_cubic(const CubicCoefficients& c, Complex x);

/// Horner evaluation of a general polynomial, coeffs highest power first.
Complex eval_poly(std::span<const Complex> coeffs, Complex x);

}  // namespace omep
