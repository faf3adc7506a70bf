#include "omep/sweep_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "omep/errors.hpp"

namespace omep {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Phase rasters

PhaseCell evaluate_cell(const ReducedParams& r, const ClassifyTolerances& tol) {
  const EpClass cls = classify_point(r, tol);
  PhaseCell cell;
  cell.D = cls.disc.D;
  cell.A = cls.disc.A;
  cell.B = cls.disc.B;
  cell.cls = cls.kind;
  const double eps_d = tol.eps_d * std::pow(r.kappa_c, 6.0);
  cell.sign_d = std::abs(cls.disc.D) <= eps_d ? 0 : (cls.disc.D < 0.0 ? -1 : 1);
  return cell;
}

// Parameter set for one raster coordinate, or nullopt where the third
// pseudo-Hermitian condition has no real Delta_a.
std::optional<ReducedParams> cell_params(const PhaseRequest& req, double p1,
                                         double p2) {
  const double kc = req.kappa_c;
  if (req.mode == PhaseMode::kBalanced) {
    return enforce_ph_balanced(p2, p1, kc, req.omega_b);
  }
  const double eta = req.eta;
  const double ga = p1;
  const double gc = p2;
  const double delta_sq =
      -(ga * ga + eta * gc * gc) / (eta * (1.0 + eta)) - kc * kc;
  if (delta_sq < 0.0) return std::nullopt;
  ReducedParams r;
  r.eta = eta;
  r.lambda = ga != 0.0 ? gc / ga : 0.0;
  r.kappa_c = kc;
  r.omega_b = req.omega_b;
  r.gamma_b = -(1.0 + eta) * kc;
  r.Delta_a = (req.delta_sign >= 0 ? 1.0 : -1.0) * std::sqrt(delta_sq);
  r.Delta_c = -eta * r.Delta_a;
  r.G_a = ga;
  r.G_c = gc;
  return r;
}

struct Segment {
  ContourPoint a;
  ContourPoint b;
};

// Zero-level marching squares over one scalar field sampled on the
// phase grid. `field` indexes cells row-major like PhaseDiagram.
std::vector<Segment> marching_squares(const AxisSpec& ax1, const AxisSpec& ax2,
                                      const std::vector<double>& field) {
  const int nx = ax1.count;
  const int ny = ax2.count;
  std::vector<Segment> segments;

  auto value = [&](int ix, int iy) { return field[std::size_t(iy) * nx + ix]; };

  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const double v00 = value(ix, iy), v10 = value(ix + 1, iy);
      const double v11 = value(ix + 1, iy + 1), v01 = value(ix, iy + 1);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) {
        continue;
      }
      const double x0 = ax1.value(ix), x1 = ax1.value(ix + 1);
      const double y0 = ax2.value(iy), y1 = ax2.value(iy + 1);

      auto lerp = [](double a, double b, double va, double vb) {
        return a + (b - a) * (va / (va - vb));
      };
      // Edge order: 0 bottom, 1 right, 2 top, 3 left.
      ContourPoint pts[4];
      bool crossed[4] = {false, false, false, false};
      auto sign = [](double v) { return v >= 0.0; };
      if (sign(v00) != sign(v10)) {
        crossed[0] = true;
        pts[0] = {lerp(x0, x1, v00, v10), y0};
      }
      if (sign(v10) != sign(v11)) {
        crossed[1] = true;
        pts[1] = {x1, lerp(y0, y1, v10, v11)};
      }
      if (sign(v01) != sign(v11)) {
        crossed[2] = true;
        pts[2] = {lerp(x0, x1, v01, v11), y1};
      }
      if (sign(v00) != sign(v01)) {
        crossed[3] = true;
        pts[3] = {x0, lerp(y0, y1, v00, v01)};
      }

      int edges[4];
      int n_crossed = 0;
      for (int e = 0; e < 4; ++e) {
        if (crossed[e]) edges[n_crossed++] = e;
      }
      if (n_crossed == 2) {
        segments.push_back({pts[edges[0]], pts[edges[1]]});
      } else if (n_crossed == 4) {
        // Saddle: connect by the sign of the cell center.
        const double center = 0.25 * (v00 + v10 + v11 + v01);
        if (sign(center) == sign(v00)) {
          segments.push_back({pts[0], pts[1]});
          segments.push_back({pts[2], pts[3]});
        } else {
          segments.push_back({pts[0], pts[3]});
          segments.push_back({pts[1], pts[2]});
        }
      }
    }
  }
  return segments;
}

// Chain shared-endpoint segments into polylines. Endpoints on shared
// square edges are computed from the same two samples, so exact float
// equality is the correct join test.
std::vector<ContourPolyline> chain_segments(const std::vector<Segment>& segments) {
  using Key = std::pair<double, double>;
  std::map<Key, std::vector<int>> by_endpoint;
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    by_endpoint[{segments[i].a.p1, segments[i].a.p2}].push_back(i);
    by_endpoint[{segments[i].b.p1, segments[i].b.p2}].push_back(i);
  }

  std::vector<bool> used(segments.size(), false);
  std::vector<ContourPolyline> polylines;

  auto next_of = [&](const ContourPoint& pt, int avoid) -> int {
    const auto it = by_endpoint.find({pt.p1, pt.p2});
    if (it == by_endpoint.end() || it->second.size() != 2) return -1;
    for (int cand : it->second) {
      if (cand != avoid && !used[cand]) return cand;
    }
    return -1;
  };
  auto other_end = [&](int seg, const ContourPoint& from) {
    const Segment& s = segments[seg];
    return (s.a.p1 == from.p1 && s.a.p2 == from.p2) ? s.b : s.a;
  };

  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<ContourPoint> chain{segments[i].a, segments[i].b};
    for (int seg = next_of(chain.back(), i); seg >= 0;
         seg = next_of(chain.back(), seg)) {
      used[seg] = true;
      chain.push_back(other_end(seg, chain.back()));
    }
    std::vector<ContourPoint> head;
    for (int seg = next_of(chain.front(), i); seg >= 0;
         seg = next_of(chain.front(), seg)) {
      used[seg] = true;
      head.push_back(other_end(seg, head.empty() ? chain.front() : head.back()));
    }
    std::reverse(head.begin(), head.end());
    head.insert(head.end(), chain.begin(), chain.end());
    polylines.push_back(ContourPolyline{std::move(head)});
  }
  return polylines;
}

// Intersection of two 2-D segments; nullopt when parallel or outside
// either segment.
std::optional<ContourPoint> segment_intersection(const ContourPoint& p1,
                                                 const ContourPoint& p2,
                                                 const ContourPoint& q1,
                                                 const ContourPoint& q2) {
  const double rx = p2.p1 - p1.p1, ry = p2.p2 - p1.p2;
  const double sx = q2.p1 - q1.p1, sy = q2.p2 - q1.p2;
  const double denom = rx * sy - ry * sx;
  if (denom == 0.0) return std::nullopt;
  const double qx = q1.p1 - p1.p1, qy = q1.p2 - p1.p2;
  const double t = (qx * sy - qy * sx) / denom;
  const double u = (qx * ry - qy * rx) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return ContourPoint{p1.p1 + t * rx, p1.p2 + t * ry};
}

// Newton refinement of (A, B) = (0, 0) from a contour-intersection
// seed. A = B = 0 forces D = B^2 - 4AC = 0, so these are exactly the
// triple-contour points.
std::optional<ContourPoint> refine_triple_point(const PhaseRequest& req,
                                                ContourPoint p) {
  auto eval = [&](double p1, double p2) -> std::optional<std::pair<double, double>> {
    const auto r = cell_params(req, p1, p2);
    if (!r) return std::nullopt;
    const DiscriminantReport disc = cubic_discriminant(reduced_cubic(*r));
    return std::make_pair(disc.A, disc.B);
  };
  for (int iter = 0; iter < 50; ++iter) {
    const auto f = eval(p.p1, p.p2);
    if (!f) return std::nullopt;
    const double h1 = 1e-7 * (1.0 + std::abs(p.p1));
    const double h2 = 1e-7 * (1.0 + std::abs(p.p2));
    const auto fx1 = eval(p.p1 + h1, p.p2), fx0 = eval(p.p1 - h1, p.p2);
    const auto fy1 = eval(p.p1, p.p2 + h2), fy0 = eval(p.p1, p.p2 - h2);
    if (!fx1 || !fx0 || !fy1 || !fy0) return std::nullopt;
    const double a11 = (fx1->first - fx0->first) / (2.0 * h1);
    const double a12 = (fy1->first - fy0->first) / (2.0 * h2);
    const double a21 = (fx1->second - fx0->second) / (2.0 * h1);
    const double a22 = (fy1->second - fy0->second) / (2.0 * h2);
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double d1 = (f->first * a22 - f->second * a12) / det;
    const double d2 = (f->second * a11 - f->first * a21) / det;
    p.p1 -= d1;
    p.p2 -= d2;
    if (std::abs(d1) <= 1e-13 * (1.0 + std::abs(p.p1)) &&
        std::abs(d2) <= 1e-13 * (1.0 + std::abs(p.p2))) {
      break;
    }
  }
  const auto f = eval(p.p1, p.p2);
  const double kc = req.kappa_c;
  if (!f || std::abs(f->first) > req.tol.eps_a * kc * kc ||
      std::abs(f->second) > req.tol.eps_b * kc * kc * kc) {
    return std::nullopt;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Sweeps

const std::array<std::array<int, 3>, 6> kPermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

SpectralTriple match_to_previous(const SpectralTriple& prev, const SpectralTriple& next) {
  double best = std::numeric_limits<double>::infinity();
  SpectralTriple matched = next;
  for (const auto& perm : kPermutations) {
    const double cost = std::abs(next[perm[0]] - prev[0]) +
                        std::abs(next[perm[1]] - prev[1]) +
                        std::abs(next[perm[2]] - prev[2]);
    if (cost < best) {
      best = cost;
      matched = {next[perm[0]], next[perm[1]], next[perm[2]]};
    }
  }
  return matched;
}

double min_pairwise_gap(const SpectralTriple& x) {
  return std::min({std::abs(x[0] - x[1]), std::abs(x[0] - x[2]), std::abs(x[1] - x[2])});
}

BranchSet run_sweep(const ParamGenerator& gen, double from, double to, int n,
                    double gap_threshold, const ClassifyTolerances& tol,
                    bool classify) {
  if (n < 2 || !(to >= from)) {
    throw InvalidInputError("eigen_sweep: need n >= 2 and to >= from");
  }
  BranchSet out;
  out.points.resize(n);
  const double step = (to - from) / (n - 1);

  const SpectralTriple* prev = nullptr;
  for (int i = 0; i < n; ++i) {
    SweepPoint& pt = out.points[i];
    pt.axis = from + i * step;
    try {
      const ReducedParams r = gen(pt.axis);
      pt.x = spectrum(build_h_eff(r), r.omega_b);
      pt.status = PointStatus::kOk;
      if (classify) {
        try {
          const EpClass cls = classify_point(r, tol);
          pt.classified = true;
          pt.disc = cls.disc;
          pt.cls = cls.kind;
        } catch (const NotApplicableError&) {
          pt.classified = false;
        }
      }
    } catch (const InfeasibleError&) {
      pt.status = PointStatus::kInfeasible;
      continue;
    } catch (const NumericFailureError&) {
      pt.status = PointStatus::kNumericFailure;
      continue;
    }
    if (prev != nullptr) pt.x = match_to_previous(*prev, pt.x);
    prev = &pt.x;
  }

  if (classify) {
    for (const EpHit& hit : find_ep2(gen, from, to, tol, n)) {
      Coalescence c;
      c.axis = hit.axis;
      c.kind = hit.kind;
      c.disc = hit.disc;
      try {
        const ReducedParams r = gen(hit.axis);
        c.spectrum = spectrum(build_h_eff(r), r.omega_b);
      } catch (const InfeasibleError&) {
        continue;
      }
      // Order the refined triple like the nearest resolved sweep point.
      const SweepPoint* anchor = nullptr;
      for (const SweepPoint& pt : out.points) {
        if (pt.status != PointStatus::kOk) continue;
        if (anchor == nullptr ||
            std::abs(pt.axis - hit.axis) < std::abs(anchor->axis - hit.axis)) {
          anchor = &pt;
        }
      }
      if (anchor != nullptr) c.spectrum = match_to_previous(anchor->x, c.spectrum);

      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          const double gap = std::abs(c.spectrum[i] - c.spectrum[j]);
          if (gap < best) {
            best = gap;
            c.pair_i = i;
            c.pair_j = j;
            c.x = 0.5 * (c.spectrum[i] + c.spectrum[j]);
          }
        }
      }
      c.gap = best;
      if (c.gap < gap_threshold) out.coalescences.push_back(c);
    }
  }
  return out;
}

}  // namespace

PhaseDiagram phase_diagram(const PhaseRequest& req) {
  if (req.axis1.count < 2 || req.axis2.count < 2) {
    throw InvalidInputError("phase_diagram: grid counts must be >= 2 per axis");
  }
  if (req.mode == PhaseMode::kUnbalanced &&
      std::abs(req.eta + 1.0) < kBalancedEtaTol) {
    throw InvalidInputError("phase_diagram: unbalanced mode needs eta != -1");
  }
  if (!(req.kappa_c > 0.0)) {
    throw InvalidInputError("phase_diagram: kappa_c must be positive");
  }

  PhaseDiagram dia;
  dia.axis1 = req.axis1;
  dia.axis2 = req.axis2;
  const int nx = req.axis1.count;
  const int ny = req.axis2.count;
  dia.cells.resize(std::size_t(nx) * ny);

  dia.any_feasible = false;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      PhaseCell& cell = dia.cells[std::size_t(iy) * nx + ix];
      const auto r = cell_params(req, req.axis1.value(ix), req.axis2.value(iy));
      if (!r) {
        cell.feasible = false;
        cell.D = cell.A = cell.B = kNan;
        cell.sign_d = 0;
        continue;
      }
      cell = evaluate_cell(*r, req.tol);
      dia.any_feasible = true;
    }
  }

  const char* names[3] = {"D", "A", "B"};
  std::array<std::vector<double>, 3> fields;
  for (auto& f : fields) f.resize(dia.cells.size());
  for (std::size_t i = 0; i < dia.cells.size(); ++i) {
    fields[0][i] = dia.cells[i].feasible ? dia.cells[i].D : kNan;
    fields[1][i] = dia.cells[i].feasible ? dia.cells[i].A : kNan;
    fields[2][i] = dia.cells[i].feasible ? dia.cells[i].B : kNan;
  }
  for (int f = 0; f < 3; ++f) {
    dia.contours[f].level_name = names[f];
    dia.contours[f].polylines =
        chain_segments(marching_squares(req.axis1, req.axis2, fields[f]));
  }

  // Triple-contour points: wherever the A = 0 and B = 0 polylines
  // intersect, D = B^2 - 4AC vanishes as well. Newton-polish each
  // crossing and merge duplicates within one grid square.
  std::vector<ContourPoint> seeds;
  for (const ContourPolyline& la : dia.contours[1].polylines) {
    for (std::size_t i = 0; i + 1 < la.points.size(); ++i) {
      for (const ContourPolyline& lb : dia.contours[2].polylines) {
        for (std::size_t j = 0; j + 1 < lb.points.size(); ++j) {
          const auto hit = segment_intersection(la.points[i], la.points[i + 1],
                                                lb.points[j], lb.points[j + 1]);
          if (hit) seeds.push_back(*hit);
        }
      }
    }
  }
  const double merge_radius =
      std::hypot(req.axis1.step(), req.axis2.step());
  for (const ContourPoint& seed : seeds) {
    const auto refined = refine_triple_point(req, seed);
    if (!refined) continue;
    if (refined->p1 < std::min(req.axis1.min, req.axis1.max) ||
        refined->p1 > std::max(req.axis1.min, req.axis1.max) ||
        refined->p2 < std::min(req.axis2.min, req.axis2.max) ||
        refined->p2 > std::max(req.axis2.min, req.axis2.max)) {
      continue;
    }
    bool duplicate = false;
    for (const ContourPoint& existing : dia.triple_points) {
      if (std::hypot(existing.p1 - refined->p1, existing.p2 - refined->p2) <=
          merge_radius) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) dia.triple_points.push_back(*refined);
  }
  std::sort(dia.triple_points.begin(), dia.triple_points.end(),
            [](const ContourPoint& a, const ContourPoint& b) {
              return a.p1 != b.p1 ? a.p1 < b.p1 : a.p2 < b.p2;
            });
  return dia;
}

BranchSet eigen_sweep(const ParamGenerator& gen, double from, double to, int n,
                      double gap_threshold, const ClassifyTolerances& tol) {
  return run_sweep(gen, from, to, n, gap_threshold, tol, /*classify=*/true);
}

BranchSet broken_ph_sweep(const ParamGenerator& gen, double from, double to,
                          int n, double offset) {
  ParamGenerator broken = [&gen, offset](double t) {
    ReducedParams r = gen(t);
    r.gamma_b = -(1.0 + r.eta) * r.kappa_c + offset;
    return r;
  };
  return run_sweep(broken, from, to, n, /*gap_threshold=*/1e-3,
                   ClassifyTolerances{}, /*classify=*/false);
}

MinGap min_gap(const BranchSet& b) {
  MinGap result{0.0, std::numeric_limits<double>::infinity()};
  bool any = false;
  for (const SweepPoint& pt : b.points) {
    if (pt.status != PointStatus::kOk) continue;
    any = true;
    const double gap = min_pairwise_gap(pt.x);
    if (gap < result.gap) {
      result.gap = gap;
      result.axis = pt.axis;
    }
  }
  if (!any) throw InvalidInputError("min_gap: branch set has no valid points");
  return result;
}

}  // namespace omep
