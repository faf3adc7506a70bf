#include "omep/sweep_engine.hpp"

#include <cmath>

#include "doctest.h"
#include "omep/errors.hpp"
#include "test_support.hpp"

using namespace omep;

namespace {

ParamGenerator balanced_g_sweep(double delta_a) {
  return [delta_a](double g) { return enforce_ph_balanced(delta_a, g); };
}

const double kDeltaEp3 = 3.0 * std::sqrt(3.0);

}  // namespace

TEST_CASE("eigen_sweep: two EP3 coalescences at G = +-2 for Delta = 3 sqrt(3)") {
  const BranchSet b = eigen_sweep(balanced_g_sweep(kDeltaEp3), -4.0, 4.0, 401);
  REQUIRE(b.coalescences.size() == 2);
  CHECK(b.coalescences[0].axis == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(b.coalescences[1].axis == doctest::Approx(2.0).epsilon(1e-6));
  for (const Coalescence& c : b.coalescences) {
    CHECK(c.kind == EpKind::kEp3);
    CHECK(std::abs(c.x - Complex(2.0 * std::sqrt(3.0), 0)) < 1e-4);
    CHECK(c.gap < 1e-3);
  }
}

TEST_CASE("eigen_sweep: EP2 quartet structure at Delta = 10") {
  const BranchSet b = eigen_sweep(balanced_g_sweep(10.0), 0.0, 6.0, 512);
  REQUIRE(b.coalescences.size() == 2);
  CHECK(b.coalescences[0].axis == doctest::Approx(2.99).epsilon(0.01 / 2.99));
  CHECK(b.coalescences[1].axis == doctest::Approx(3.60).epsilon(0.01 / 3.60));
  CHECK(b.coalescences[0].kind == EpKind::kEp2);
  CHECK(b.coalescences[1].kind == EpKind::kEp2);
}

TEST_CASE("eigen_sweep: unbalanced EP2 pair of the detuned-lambda case") {
  // eta = -1.1, lambda = 1.2 lambda_EP3: the EP3 splits into EP2s at
  // G = +-2.44 with coalesced x = 9.05.
  const Ep3Criticals crit = ep3_criticals(-1.1);
  const double lam = 1.2 * crit.lambda_ep3;
  ParamGenerator gen = [lam](double g) { return enforce_ph(-1.1, lam, g, 1.0); };
  const BranchSet b = eigen_sweep(gen, -4.0, 4.0, 801);

  int infeasible = 0;
  for (const SweepPoint& pt : b.points) infeasible += pt.status == PointStatus::kInfeasible;
  CHECK(infeasible > 0);  // |G| below the minimal coupling is annotated, not fatal

  REQUIRE(b.coalescences.size() == 2);
  for (const Coalescence& c : b.coalescences) {
    CHECK(std::abs(std::abs(c.axis) - 2.44) < 0.02);
    CHECK(std::abs(c.x.real() - 9.05) < 0.05);
    CHECK(c.kind == EpKind::kEp2);
  }
  CHECK(b.coalescences[0].axis == doctest::Approx(-b.coalescences[1].axis).epsilon(1e-9));
}

TEST_CASE("eigen_sweep: zero-length range gives two identical spectra, no flags") {
  const BranchSet b = eigen_sweep(balanced_g_sweep(10.0), 1.3, 1.3, 2);
  REQUIRE(b.points.size() == 2);
  CHECK(b.coalescences.empty());
  for (int i = 0; i < 3; ++i) {
    CHECK(b.points[0].x[i] == b.points[1].x[i]);
  }
}

TEST_CASE("eigen_sweep: branch values preserve the spectrum multiset") {
  const BranchSet b = eigen_sweep(balanced_g_sweep(10.0), 0.0, 6.0, 64);
  for (const SweepPoint& pt : b.points) {
    REQUIRE(pt.status == PointStatus::kOk);
    const ReducedParams r = enforce_ph_balanced(10.0, pt.axis);
    const SpectralTriple fresh = spectrum(build_h_eff(r), r.omega_b);
    // Same multiset, branch order permuted only.
    SpectralTriple sorted_branch = pt.x;
    SpectralTriple sorted_fresh = fresh;
    auto lex = [](Complex a, Complex b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(sorted_branch.begin(), sorted_branch.end(), lex);
    std::sort(sorted_fresh.begin(), sorted_fresh.end(), lex);
    for (int i = 0; i < 3; ++i) CHECK(sorted_branch[i] == sorted_fresh[i]);
  }
}

TEST_CASE("eigen_sweep: conjugate pairing keeps imaginary parts summing to zero") {
  const BranchSet b = eigen_sweep(balanced_g_sweep(kDeltaEp3), -4.0, 4.0, 257);
  for (const SweepPoint& pt : b.points) {
    const double im_sum = pt.x[0].imag() + pt.x[1].imag() + pt.x[2].imag();
    CHECK(std::abs(im_sum) <= 1e-8);
  }
}

TEST_CASE("eigen_sweep: branch steps stay below the local derivative bound") {
  const int n = 1024;
  const BranchSet b = eigen_sweep(balanced_g_sweep(10.0), 0.5, 2.5, n);
  const double h = (2.5 - 0.5) / (n - 1);
  for (std::size_t i = 1; i + 1 < b.points.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const double step = std::abs(b.points[i + 1].x[k] - b.points[i].x[k]);
      const double deriv = std::abs(b.points[i + 1].x[k] - b.points[i - 1].x[k]) / (2.0 * h);
      CHECK(step <= 10.0 * (deriv * h + 1e-9));
    }
  }
}

TEST_CASE("eigen_sweep: doubling the grid moves coalescences by at most one step") {
  const BranchSet coarse = eigen_sweep(balanced_g_sweep(10.0), 0.0, 6.0, 512);
  const BranchSet fine = eigen_sweep(balanced_g_sweep(10.0), 0.0, 6.0, 1024);
  REQUIRE(coarse.coalescences.size() == fine.coalescences.size());
  const double step = 6.0 / 511.0;
  for (std::size_t i = 0; i < coarse.coalescences.size(); ++i) {
    CHECK(std::abs(coarse.coalescences[i].axis - fine.coalescences[i].axis) <= step);
  }
}

TEST_CASE("eigen_sweep: coalescences lie on the phase diagram's D = 0 contour") {
  const BranchSet b = eigen_sweep(balanced_g_sweep(10.0), 0.0, 6.0, 512);
  PhaseRequest req;
  req.mode = PhaseMode::kBalanced;
  req.axis1 = {"G_a", 0.0, 6.0, 128};
  req.axis2 = {"Delta_a", 8.0, 12.0, 128};
  const PhaseDiagram dia = phase_diagram(req);
  const double cell_diag = std::hypot(req.axis1.step(), req.axis2.step());
  for (const Coalescence& c : b.coalescences) {
    double dist = std::numeric_limits<double>::infinity();
    for (const ContourPolyline& line : dia.contours[0].polylines) {
      for (const ContourPoint& pt : line.points) {
        dist = std::min(dist, std::hypot(pt.p1 - c.axis, pt.p2 - 10.0));
      }
    }
    CHECK(dist <= cell_diag);
  }
}

TEST_CASE("broken_ph_sweep: zero offset reproduces the pseudo-Hermitian sweep") {
  const BranchSet ph = eigen_sweep(balanced_g_sweep(kDeltaEp3), 1.5, 2.5, 101);
  const BranchSet broken = broken_ph_sweep(balanced_g_sweep(kDeltaEp3), 1.5, 2.5, 101, 0.0);
  REQUIRE(ph.points.size() == broken.points.size());
  for (std::size_t i = 0; i < ph.points.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(ph.points[i].x[k] - broken.points[i].x[k]) <= 1e-12);
    }
  }
  CHECK(broken.coalescences.empty());
}

TEST_CASE("broken_ph_sweep: EP3 survives approximately at offset 0.1") {
  // Frozen from the root oracle: min gap 1.0494 kappa_c at G = 1.9998
  // for gamma_b = 0.1, Delta = 3 sqrt(3) (an EP3 splits by roughly
  // offset^(1/3), so the dip stays order one).
  const BranchSet b = broken_ph_sweep(balanced_g_sweep(kDeltaEp3), 1.5, 2.5, 2001, 0.1);
  const MinGap mg = min_gap(b);
  CHECK(std::abs(mg.axis - 2.0) <= 0.05);
  CHECK(mg.gap < 1.06);
  for (const SweepPoint& pt : b.points) CHECK_FALSE(pt.classified);
}

TEST_CASE("broken_ph_sweep: two near-coalescence dips at Delta = 10") {
  // Frozen from the root oracle: dips of 0.374 near G = 2.989 and 1.483
  // near G = 3.608 (the unperturbed EP2 pair sits at 2.99 and 3.60).
  const BranchSet lo = broken_ph_sweep(balanced_g_sweep(10.0), 2.5, 3.3, 1001, 0.1);
  const MinGap mlo = min_gap(lo);
  CHECK(std::abs(mlo.axis - 2.99) <= 0.05);
  CHECK(mlo.gap < 0.40);

  const BranchSet hi = broken_ph_sweep(balanced_g_sweep(10.0), 3.3, 4.1, 1001, 0.1);
  const MinGap mhi = min_gap(hi);
  CHECK(std::abs(mhi.axis - 3.60) <= 0.05);
  CHECK(mhi.gap < 1.52);
}

TEST_CASE("min_gap: exact EP3 grid point reports a vanishing gap") {
  // n = 3 over [1.5, 2.5] lands exactly on G = 2.
  const BranchSet b = eigen_sweep(balanced_g_sweep(kDeltaEp3), 1.5, 2.5, 3);
  const MinGap mg = min_gap(b);
  CHECK(mg.axis == 2.0);
  CHECK(mg.gap <= 1e-8);
}

TEST_CASE("min_gap: constant well-separated branches") {
  BranchSet b;
  b.points.resize(5);
  for (int i = 0; i < 5; ++i) {
    b.points[i].axis = i;
    b.points[i].status = PointStatus::kOk;
    b.points[i].x = {Complex(0, 0), Complex(1.5, 0), Complex(4.0, 0)};
  }
  const MinGap mg = min_gap(b);
  CHECK(mg.gap == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("min_gap: rejects an all-invalid branch set") {
  BranchSet b;
  b.points.resize(2);
  b.points[0].status = PointStatus::kInfeasible;
  b.points[1].status = PointStatus::kInfeasible;
  CHECK_THROWS_AS(min_gap(b), InvalidInputError);
}

TEST_CASE("phase_diagram: balanced raster locates the four EP3 crossings") {
  PhaseRequest req;
  req.mode = PhaseMode::kBalanced;
  req.axis1 = {"G_a", -6.0, 6.0, 128};
  req.axis2 = {"Delta_a", -20.0, 20.0, 128};
  const PhaseDiagram dia = phase_diagram(req);
  REQUIRE(dia.triple_points.size() == 4);
  for (const ContourPoint& tp : dia.triple_points) {
    CHECK(std::abs(std::abs(tp.p1) - 2.0) < 1e-6);
    CHECK(std::abs(std::abs(tp.p2) - kDeltaEp3) < 1e-6);
  }
}

TEST_CASE("phase_diagram: unbalanced raster marks infeasible cells and finds EP3s") {
  PhaseRequest req;
  req.mode = PhaseMode::kUnbalanced;
  req.eta = -1.1;
  req.axis1 = {"G_a", -3.0, 3.0, 96};
  req.axis2 = {"G_c", -4.0, 4.0, 96};
  const PhaseDiagram dia = phase_diagram(req);

  int infeasible = 0;
  for (const PhaseCell& cell : dia.cells) infeasible += !cell.feasible;
  CHECK(infeasible > 0);
  CHECK(dia.any_feasible);

  const Ep3Criticals crit = ep3_criticals(-1.1);
  REQUIRE(dia.triple_points.size() == 4);
  for (const ContourPoint& tp : dia.triple_points) {
    CHECK(std::abs(std::abs(tp.p1) - crit.g_a_ep3) < 1e-6);
    CHECK(std::abs(std::abs(tp.p2) - crit.lambda_ep3 * crit.g_a_ep3) < 1e-6);
  }
}

TEST_CASE("phase_diagram: contour points interpolate the level to zero") {
  PhaseRequest req;
  req.mode = PhaseMode::kBalanced;
  req.axis1 = {"G_a", 0.0, 6.0, 64};
  req.axis2 = {"Delta_a", 0.0, 20.0, 64};
  const PhaseDiagram dia = phase_diagram(req);

  auto field_at = [&](int ix, int iy, int which) {
    const PhaseCell& c = dia.at(ix, iy);
    return which == 0 ? c.D : (which == 1 ? c.A : c.B);
  };
  auto grid_index = [](double v, const AxisSpec& ax) {
    return static_cast<int>(std::round((v - ax.min) / ax.step()));
  };

  int checked = 0;
  for (int which = 0; which < 3; ++which) {
    for (const ContourPolyline& line : dia.contours[which].polylines) {
      for (const ContourPoint& pt : line.points) {
        const int ix = grid_index(pt.p1, dia.axis1);
        const int iy = grid_index(pt.p2, dia.axis2);
        double va = 0.0, vb = 0.0, frac = 0.0;
        if (std::abs(pt.p1 - dia.axis1.value(ix)) < 1e-9) {
          // vertical edge between iy0 and iy0+1
          const int iy0 = static_cast<int>((pt.p2 - dia.axis2.min) / dia.axis2.step());
          va = field_at(ix, iy0, which);
          vb = field_at(ix, iy0 + 1, which);
          frac = (pt.p2 - dia.axis2.value(iy0)) / dia.axis2.step();
        } else {
          REQUIRE(std::abs(pt.p2 - dia.axis2.value(iy)) < 1e-9);
          const int ix0 = static_cast<int>((pt.p1 - dia.axis1.min) / dia.axis1.step());
          va = field_at(ix0, iy, which);
          vb = field_at(ix0 + 1, iy, which);
          frac = (pt.p1 - dia.axis1.value(ix0)) / dia.axis1.step();
        }
        const double level = va + (vb - va) * frac;
        CHECK(std::abs(level) <= 1e-6 * (std::abs(va) + std::abs(vb)));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("phase_diagram: constant-sign grid has no contours") {
  PhaseRequest req;
  req.mode = PhaseMode::kBalanced;
  req.axis1 = {"G_a", 0.1, 0.2, 2};
  req.axis2 = {"Delta_a", 0.1, 0.2, 2};
  const PhaseDiagram dia = phase_diagram(req);
  for (const ContourSet& level : dia.contours) CHECK(level.polylines.empty());
  CHECK(dia.triple_points.empty());
}

TEST_CASE("phase_diagram: fully infeasible grid is a warning, not an error") {
  PhaseRequest req;
  req.mode = PhaseMode::kUnbalanced;
  req.eta = -1.1;
  req.axis1 = {"G_a", 0.0, 0.05, 4};
  req.axis2 = {"G_c", 0.0, 0.05, 4};
  const PhaseDiagram dia = phase_diagram(req);
  CHECK_FALSE(dia.any_feasible);
  for (const ContourSet& level : dia.contours) CHECK(level.polylines.empty());
}

TEST_CASE("phase_diagram: input validation") {
  PhaseRequest req;
  req.axis1 = {"G_a", 0.0, 1.0, 1};
  req.axis2 = {"Delta_a", 0.0, 1.0, 8};
  CHECK_THROWS_AS(phase_diagram(req), InvalidInputError);
  req.axis1.count = 8;
  req.mode = PhaseMode::kUnbalanced;
  req.eta = -1.0;
  CHECK_THROWS_AS(phase_diagram(req), InvalidInputError);
}
