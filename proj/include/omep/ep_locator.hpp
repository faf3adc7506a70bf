#pragma once

#include <functional>
#include <vector>

#include "omep/com_model.hpp"
#include "omep/complex_poly.hpp"
#include "omep/pseudo_hermitian.hpp"

namespace omep {

/// Closed-form critical parameters at the third-order exceptional point
/// for a given gain/loss ratio eta.
struct Ep3Criticals {
  double lambda_ep3 = 1.0;        ///< required coupling ratio G_c/G_a
  double g_a_ep3 = 0.0;           ///< critical coupling      [kappa_c]
  double delta_a_ep3_plus = 0.0;  ///< detuning, + branch     [kappa_c]
  double delta_a_ep3_minus = 0.0; ///< detuning, - branch     [kappa_c]
  double x_ep3 = 0.0;             ///< coalesced eigenvalue on the + branch
  double g_a_min = 0.0;           ///< smallest |G_a| with a real Delta_a
};

enum class EpKind {
  kThreeReal,    ///< D < 0: three distinct real eigenvalues
  kOneRealPair,  ///< D > 0: one real eigenvalue plus a conjugate pair
  kEp2,          ///< D = 0, A or B nonzero: two eigenvalues coalesce
  kEp3,          ///< D = A = B = 0: all three coalesce
};

const char* to_string(EpKind kind);

/// Classification together with its witnessing discriminant data.
struct EpClass {
  EpKind kind = EpKind::kThreeReal;
  DiscriminantReport disc;
  CubicCoefficients cubic;  ///< the real-coefficient cubic in x
};

/// kappa_c-normalized thresholds; each scales with the appropriate
/// power of kappa_c when the parameters are dimensionful. D is degree
/// six in the rates, hence the larger floor.
struct ClassifyTolerances {
  double eps_d = 1e-8;
  double eps_a = 1e-6;
  double eps_b = 1e-6;
  PhTolerances ph;
};

/// Maps an axis value to a consistent pseudo-Hermitian parameter set.
/// May throw InfeasibleError for axis values with no such set.
using ParamGenerator = std::function<ReducedParams(double)>;

/// One located coalescence along a 1-D sweep.
struct EpHit {
  double axis = 0.0;        ///< refined axis value
  Complex x{0.0, 0.0};      ///< coalesced eigenvalue (pair midpoint)
  EpKind kind = EpKind::kEp2;
  int pair_i = 0;           ///< indices of the coalescing pair in the
  int pair_j = 1;           ///< (Re, Im)-sorted root triple
  DiscriminantReport disc;
  double root_spread = 0.0; ///< |x_i - x_j| of that pair at the hit
};

/// EP3 critical parameters. eta = -1 (within kBalancedEtaTol) takes the
/// balanced closed form lambda = 1, G = 2 kappa_c, Delta = +-3 sqrt(3)
/// kappa_c, x = 2 sqrt(3) kappa_c; g_a_min is 0 there because the
/// balanced constraint leaves Delta_a free. Throws InfeasibleError for
/// eta outside (-2, -1/2).
Ep3Criticals ep3_criticals(double eta, double kappa_c = 1.0);

/// Real-coefficient characteristic cubic in x = Omega + omega_b for a
/// parameter set satisfying the first two pseudo-Hermitian conditions:
///   c2 = (eta - 1) Delta_a
///   c1 = (G_a^2 + G_c^2) - eta Delta_a^2 + (1 + eta + eta^2) kappa_c^2
///   c0 = (eta G_a^2 - G_c^2) Delta_a - (1+eta)^2 (1-eta) kappa_c^2 Delta_a
CubicCoefficients reduced_cubic(const ReducedParams& r);

/// Discriminant classification of one parameter point. Requires the r1
/// and r2 residuals to be inside tolerance (NotApplicableError
/// otherwise): with them satisfied the cubic above is exact up to the
/// r3 defect, which only shifts Im(c0).
EpClass classify_point(const ReducedParams& r, const ClassifyTolerances& tol = {});

/// Locate every D = 0 point of the sweep gen(t), t in [from, to]:
/// sign changes of D are bracketed on the grid and bisected to machine
/// resolution; tangential zeros (D touching zero without a sign change,
/// the EP3 signature) are caught by minimizing |D| around interior
/// local minima. Hits closer than kRootClusterRadius merge. Results are
/// sorted by ascending axis value.
std::vector<EpHit> find_ep2(const ParamGenerator& gen, double from, double to,
                            const ClassifyTolerances& tol = {},
                            int grid_n = 2048);

}  // namespace omep
