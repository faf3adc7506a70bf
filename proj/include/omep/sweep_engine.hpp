#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "omep/ep_locator.hpp"

namespace omep {

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  double value(int i) const {
    return count > 1 ? min + (max - min) * i / (count - 1) : min;
  }
  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
};

/// One raster sample of the discriminant data. Infeasible samples (no
/// pseudo-Hermitian Delta_a exists there) keep the raster rectangular.
struct PhaseCell {
  double D = 0.0;
  double A = 0.0;
  double B = 0.0;
  int sign_d = 0;  ///< -1 / 0 / +1 with the eps_d dead band
  EpKind cls = EpKind::kThreeReal;
  bool feasible = true;
};

struct ContourPoint {
  double p1 = 0.0;
  double p2 = 0.0;
};

struct ContourPolyline {
  std::vector<ContourPoint> points;
};

/// Zero level set of one scalar field, as chained marching-squares
/// polylines.
struct ContourSet {
  std::string level_name;
  std::vector<ContourPolyline> polylines;
};

struct PhaseDiagram {
  AxisSpec axis1;  ///< p1, fastest-varying
  AxisSpec axis2;  ///< p2
  std::vector<PhaseCell> cells;  ///< row-major, index = iy * axis1.count + ix
  std::array<ContourSet, 3> contours;  ///< D = 0, A = 0, B = 0
  /// Approximate points where all three contours meet (EP3 candidates),
  /// from clustering grid squares crossed by all three level sets.
  std::vector<ContourPoint> triple_points;
  bool any_feasible = true;

  const PhaseCell& at(int ix, int iy) const { return cells[std::size_t(iy) * axis1.count + ix]; }
};

enum class PhaseMode {
  kBalanced,    ///< eta = -1, lambda = 1; axes (G_a, Delta_a)
  kUnbalanced,  ///< fixed eta; axes (G_a, G_c), Delta_a from the third
                ///< pseudo-Hermitian condition where feasible
};

struct PhaseRequest {
  PhaseMode mode = PhaseMode::kBalanced;
  double eta = -1.0;  ///< used in unbalanced mode
  AxisSpec axis1;     ///< G_a
  AxisSpec axis2;     ///< Delta_a (balanced) or G_c (unbalanced)
  int delta_sign = +1;  ///< Delta_a branch in unbalanced mode
  double kappa_c = 1.0;
  double omega_b = 50.0;
  ClassifyTolerances tol;
};

PhaseDiagram phase_diagram(const PhaseRequest& req);

enum class PointStatus { kOk, kInfeasible, kNumericFailure };

struct SweepPoint {
  double axis = 0.0;
  PointStatus status = PointStatus::kOk;
  SpectralTriple x{};        ///< branch-ordered after continuation
  bool classified = false;   ///< D/A/B below are meaningful
  DiscriminantReport disc;
  EpKind cls = EpKind::kThreeReal;
};

/// A refined coalescence: the D = 0 location polished off-grid, its
/// spectrum continuation-matched to the neighboring sweep points.
struct Coalescence {
  double axis = 0.0;
  Complex x{0.0, 0.0};  ///< coalesced eigenvalue
  EpKind kind = EpKind::kEp2;
  double gap = 0.0;     ///< residual pair gap at the refined point
  int pair_i = 0;
  int pair_j = 1;
  SpectralTriple spectrum{};
  DiscriminantReport disc;
};

struct BranchSet {
  std::vector<SweepPoint> points;
  std::vector<Coalescence> coalescences;
};

/// Eigenvalue branches of gen(t) for t on an n-point grid over
/// [from, to]. Branch identity is continued by exhaustive permutation
/// matching (minimal summed displacement; the first point is sorted by
/// (Re, Im), ties keep the earlier permutation). Coalescences are the
/// refined D = 0 hits whose residual pair gap is below gap_threshold,
/// classified EP2/EP3 by the discriminant thresholds.
BranchSet eigen_sweep(const ParamGenerator& gen, double from, double to, int n,
                      double gap_threshold = 1e-3,
                      const ClassifyTolerances& tol = {});

/// Same sweep with the pseudo-Hermitian rate balance broken:
/// gamma_b = -(1 + eta) kappa_c + offset. The characteristic cubic then
/// has complex coefficients, so no discriminant classification is
/// attached; use min_gap to witness surviving near-EPs. offset = 0
/// reproduces eigen_sweep's branch values bit for bit.
BranchSet broken_ph_sweep(const ParamGenerator& gen, double from, double to,
                          int n, double offset);

struct MinGap {
  double axis = 0.0;
  double gap = 0.0;
};

/// Global minimum over the sweep of the smallest pairwise branch
/// separation. Throws InvalidInputError if no point is valid.
MinGap min_gap(const BranchSet& b);

}  // namespace omep
