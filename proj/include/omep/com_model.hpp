#pragma once

#include <Eigen/Core>
#include <array>

#include "omep/complex_poly.hpp"

namespace omep {

/// Lab-frame description of the driven three-mode system: two cavities
/// (a gains when kappa_a < 0, c always lossy) sharing one mechanical
/// mode b. Every rate and frequency is expressed in units of kappa_c.
struct PhysicalParams {
  double omega_a = 0.0;  ///< cavity a frequency
  double omega_c = 0.0;  ///< cavity c frequency
  double omega_b = 50.0; ///< mechanical frequency
  double nu_a = 0.0;     ///< drive frequency on cavity a
  double nu_c = 0.0;     ///< drive frequency on cavity c
  double g_a = 0.0;      ///< single-photon coupling, cavity a
  double g_c = 0.0;      ///< single-photon coupling, cavity c
  Complex drive_a{0.0, 0.0};  ///< Rabi amplitude on cavity a
  Complex drive_c{0.0, 0.0};  ///< Rabi amplitude on cavity c
  double kappa_a = -1.0; ///< signed cavity-a rate (negative = gain)
  double kappa_c = 1.0;  ///< cavity-c loss rate (> 0, normalization unit)
  double gamma_b = 0.0;  ///< signed mechanical rate

  double detuning_a() const { return omega_a - nu_a; }
  double detuning_c() const { return omega_c - nu_c; }

  /// Convenience builder for the common case where only the drive
  /// detunings matter: stores them as cavity frequencies with nu = 0.
  static PhysicalParams from_detunings(double delta_a, double delta_c);
};

/// Self-consistent classical working point and the couplings it enhances.
struct SteadyState {
  Complex a_s{0.0, 0.0};
  Complex b_s{0.0, 0.0};
  Complex c_s{0.0, 0.0};
  double delta_a_eff = 0.0;  ///< shifted detuning delta_a'
  double delta_c_eff = 0.0;  ///< shifted detuning delta_c'
  Complex G_a{0.0, 0.0};     ///< g_a * a_s
  Complex G_c{0.0, 0.0};     ///< g_c * c_s
};

/// The (eta, lambda, Delta, G) parametrization the analysis runs on.
/// Delta = delta' + omega_b; couplings are real after the laser-phase
/// rotation.
struct ReducedParams {
  double eta = -1.0;     ///< kappa_a / kappa_c
  double lambda = 1.0;   ///< G_c / G_a
  double Delta_a = 0.0;
  double Delta_c = 0.0;
  double G_a = 0.0;
  double G_c = 0.0;
  double kappa_c = 1.0;
  double gamma_b = 0.0;
  double omega_b = 50.0;

  double kappa_a() const { return eta * kappa_c; }
  double delta_a_eff() const { return Delta_a - omega_b; }
  double delta_c_eff() const { return Delta_c - omega_b; }
};

/// 3x3 non-Hermitian Hamiltonian of the linearized blue-sideband model,
/// basis (delta a, delta b, delta c).
using EffectiveHamiltonian = Eigen::Matrix3cd;

/// Three eigenvalues expressed as x = Omega + omega_b, sorted by
/// (Re, Im).
using SpectralTriple = std::array<Complex, 3>;

enum class PhaseConvention {
  /// Rotate the laser phases so both enhanced couplings are real and
  /// non-negative.
  kRotateToPositive,
};

/// Fixed point of the classical amplitude equations
///   a_s = drive_a / (kappa_a + i delta_a'),
///   c_s = drive_c / (kappa_c + i delta_c'),
///   b_s = -i (g_a |a_s|^2 + g_c |c_s|^2) / (gamma_b + i omega_b),
///   delta' = delta + g (b_s + b_s*),
/// solved by damped Picard iteration (damping 0.5, relative tolerance
/// 1e-12, cap 1000 sweeps).
///
/// Throws InvalidInputError when a denominator comes within 1e-9 of
/// zero and NumericFailureError on non-convergence.
SteadyState steady_state(const PhysicalParams& p);

/// Collapse a physical working point to the reduced parametrization.
/// Throws InvalidInputError when G_a = 0 (lambda undefined).
ReducedParams reduce(const PhysicalParams& p, const SteadyState& s,
                     PhaseConvention convention = PhaseConvention::kRotateToPositive);

/// Assemble the matrix
///   [ delta_a' - i kappa_a    G_a               0              ]
///   [ -G_a*                  -omega_b - i gamma_b   -G_c*      ]
///   [ 0                       G_c               delta_c' - i kappa_c ]
EffectiveHamiltonian build_h_eff(const ReducedParams& r);

/// Characteristic polynomial of H in the shifted variable x = Omega +
/// omega_b (monic cubic).
CubicCoefficients char_cubic_x(const EffectiveHamiltonian& h, double omega_b);

/// The three eigenvalues x = Omega + omega_b via the characteristic
/// cubic and solve_cubic.
SpectralTriple spectrum(const EffectiveHamiltonian& h, double omega_b);

/// Eigenvector for a given eigenvalue Omega (not x!), via the pair of
/// rows of (H - Omega I) with the largest cross product. Unit norm.
Eigen::Vector3cd eigenvector_for(const EffectiveHamiltonian& h, Complex omega);

/// Rotating-wave-approximation health check for one cavity.
struct RwaCavityCheck {
  double ratio1 = 0.0;  ///< |delta' + omega_b| / |delta' - omega_b|
  double ratio2 = 0.0;  ///< |G| / |delta'|
  bool division_defined = true;
};

struct RwaReport {
  RwaCavityCheck cavity_a;
  RwaCavityCheck cavity_c;
  double threshold = 0.1;
  bool ok = false;
};

RwaReport rwa_validity(const ReducedParams& r, double threshold = 0.1);
RwaReport rwa_validity(const PhysicalParams& p, const SteadyState& s,
                       double threshold = 0.1);

}  // namespace omep
