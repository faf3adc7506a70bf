#include "omep/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace omep {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const char* point_class(const SweepPoint& pt) {
  switch (pt.status) {
    case PointStatus::kInfeasible: return "infeasible";
    case PointStatus::kNumericFailure: return "numeric_failure";
    case PointStatus::kOk: break;
  }
  return pt.classified ? to_string(pt.cls) : "na";
}

void write_sweep_row(std::ostream& os, double axis, const SpectralTriple& x,
                     bool have_x, double d, double a, double b,
                     const char* cls, const UnitScale& scale) {
  os << fmt_double(axis * scale.freq());
  for (int i = 0; i < 3; ++i) {
    os << ',' << fmt_double(have_x ? x[i].real() * scale.freq() : kNan) << ','
       << fmt_double(have_x ? x[i].imag() * scale.freq() : kNan);
  }
  os << ',' << fmt_double(d * scale.d()) << ',' << fmt_double(a * scale.a())
     << ',' << fmt_double(b * scale.b()) << ',' << cls << '\n';
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const BranchSet& b, const UnitScale& scale) {
  os << "axis,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3,D,A,B,class\n";
  std::size_t coal = 0;
  auto flush_coalescences_before = [&](double axis) {
    while (coal < b.coalescences.size() && b.coalescences[coal].axis < axis) {
      const Coalescence& c = b.coalescences[coal++];
      write_sweep_row(os, c.axis, c.spectrum, true, c.disc.D, c.disc.A, c.disc.B,
                      to_string(c.kind), scale);
    }
  };
  for (const SweepPoint& pt : b.points) {
    flush_coalescences_before(pt.axis);
    const bool have_x = pt.status == PointStatus::kOk;
    const bool have_d = have_x && pt.classified;
    write_sweep_row(os, pt.axis, pt.x, have_x, have_d ? pt.disc.D : kNan,
                    have_d ? pt.disc.A : kNan, have_d ? pt.disc.B : kNan,
                    point_class(pt), scale);
  }
  flush_coalescences_before(std::numeric_limits<double>::infinity());
}

void write_phase_csv(std::ostream& os, const PhaseDiagram& d, const UnitScale& scale) {
  os << "p1,p2,D,A,B,sign_D,class\n";
  for (int iy = 0; iy < d.axis2.count; ++iy) {
    for (int ix = 0; ix < d.axis1.count; ++ix) {
      const PhaseCell& cell = d.at(ix, iy);
      os << fmt_double(d.axis1.value(ix) * scale.freq()) << ','
         << fmt_double(d.axis2.value(iy) * scale.freq()) << ','
         << fmt_double(cell.D * scale.d()) << ',' << fmt_double(cell.A * scale.a())
         << ',' << fmt_double(cell.B * scale.b()) << ',' << cell.sign_d << ','
         << (cell.feasible ? to_string(cell.cls) : "infeasible") << '\n';
    }
  }
}

void write_contour_csv(std::ostream& os, const PhaseDiagram& d, const UnitScale& scale) {
  os << "level_name,segment_id,p1,p2\n";
  int segment_id = 0;
  for (const ContourSet& level : d.contours) {
    for (const ContourPolyline& line : level.polylines) {
      for (const ContourPoint& pt : line.points) {
        os << level.level_name << ',' << segment_id << ','
           << fmt_double(pt.p1 * scale.freq()) << ','
           << fmt_double(pt.p2 * scale.freq()) << '\n';
      }
      ++segment_id;
    }
  }
}

}  // namespace omep
