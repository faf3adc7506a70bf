#pragma once

#include <ostream>
#include <string>

#include "omep/sweep_engine.hpp"

namespace omep {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars), so emitted files are byte-stable across runs and
/// platforms.
std::string fmt_double(double v);

/// Per-column unit scale applied when the caller wants dimensionful
/// output: frequencies scale with kappa_c, A/B/D with its 2nd/3rd/6th
/// power.
struct UnitScale {
  double kappa_c = 1.0;
  double freq() const { return kappa_c; }
  double d() const { return std::pow(kappa_c, 6.0); }
  double a() const { return kappa_c * kappa_c; }
  double b() const { return kappa_c * kappa_c * kappa_c; }
};

/// Columns: axis,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3,D,A,B,class.
/// Refined coalescence rows are merged into the stream in axis order
/// (their class column reads ep2/ep3). Unclassified rows carry nan in
/// D/A/B.
void write_sweep_csv(std::ostream& os, const BranchSet& b, const UnitScale& scale = {});

/// Columns: p1,p2,D,A,B,sign_D,class (p1 fastest).
void write_phase_csv(std::ostream& os, const PhaseDiagram& d, const UnitScale& scale = {});

/// Columns: level_name,segment_id,p1,p2; one row per polyline vertex,
/// segment ids sequential over the whole file.
void write_contour_csv(std::ostream& os, const PhaseDiagram& d, const UnitScale& scale = {});

}  // namespace omep
