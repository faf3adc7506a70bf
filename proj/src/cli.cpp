#include "omep/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "omep/com_model.hpp"
#include "omep/ep_locator.hpp"
#include "omep/errors.hpp"
#include "omep/io.hpp"
#include "omep/pseudo_hermitian.hpp"
#include "omep/stability.hpp"
#include "omep/sweep_engine.hpp"

namespace omep::cli {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One configurable value: a CLI option plus its JSON config key. Values
// given on the command line win over the config file; the emitted
// config carries every resolved value so a run can be reproduced from
// it alone.
struct Binding {
  std::string key;
  CLI::Option* opt = nullptr;
  std::function<void(const json&)> from_json;
  std::function<void(json&)> to_json;
};

class Bindings {
 public:
  explicit Bindings(std::string command) : command_(std::move(command)) {}

  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key,
                   T& value, const std::string& desc) {
    CLI::Option* opt = app->add_option(flag, value, desc);
    items_.push_back(Binding{
        key, opt,
        [&value](const json& j) { value = j.get<T>(); },
        [&value, key](json& j) { j[key] = value; }});
    return opt;
  }

  void apply_config(const json& cfg) const {
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      if (key == "command") {
        if (value != command_) {
          throw UsageError("config command '" + value.get<std::string>() +
                           "' does not match subcommand '" + command_ + "'");
        }
        continue;
      }
      const Binding* binding = nullptr;
      for (const Binding& b : items_) {
        if (b.key == key) binding = &b;
      }
      if (binding == nullptr) throw UsageError("unknown config key '" + key + "'");
      if (binding->opt->count() == 0) binding->from_json(value);
    }
  }

  json emit_config() const {
    json cfg;
    cfg["command"] = command_;
    for (const Binding& b : items_) b.to_json(cfg);
    return cfg;
  }

 private:
  std::string command_;
  std::vector<Binding> items_;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw UsageError("config parse error: " + std::string(e.what()));
  }
  return cfg;
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  out << content;
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// Common per-command plumbing: config in, resolved config out, output
// location and unit scale.
struct CommonOpts {
  std::string config_path;
  std::string emit_config_path;
  std::string out = "-";
  std::string format = "csv";
  double kappa_c = 1.0;

  void add_to(CLI::App* sc, Bindings& b, bool with_format) {
    sc->add_option("--config", config_path, "JSON config file (flags override it)");
    sc->add_option("--emit-config", emit_config_path,
                   "write the resolved configuration to this file");
    b.add(sc, "--out", "out", out, "output file ('-' = stdout)");
    if (with_format) b.add(sc, "--format", "format", format, "csv or json");
    b.add(sc, "--kappa-c", "kappa_c", kappa_c, "unit scale applied to outputs");
  }

  void finish(const Bindings& b) const {
    if (!config_path.empty()) b.apply_config(load_config(config_path));
  }

  void validate() const {
    if (format != "csv" && format != "json") {
      throw UsageError("format must be 'csv' or 'json'");
    }
    if (!(kappa_c > 0.0)) throw UsageError("--kappa-c must be positive");
  }

  void maybe_emit(const Bindings& b) const {
    if (emit_config_path.empty()) return;
    write_text(emit_config_path, b.emit_config().dump(2) + "\n");
  }

  UnitScale scale() const { return UnitScale{kappa_c}; }
};

// ---------------------------------------------------------------------------
// ep3

struct Ep3Cmd {
  CommonOpts common;
  Bindings bindings{"ep3"};
  double eta = -1.0;

  void setup(CLI::App* sc) {
    bindings.add(sc, "--eta", "eta", eta, "gain/loss ratio kappa_a/kappa_c")
        ->required();
    common.add_to(sc, bindings, /*with_format=*/false);
  }

  int execute() {
    common.finish(bindings);
    common.validate();
    Ep3Criticals crit;
    try {
      crit = ep3_criticals(eta, 1.0);
    } catch (const InfeasibleError& e) {
      // An out-of-range eta is a bad argument for this command.
      std::cerr << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
    const double s = common.kappa_c;
    json out;
    out["eta"] = eta;
    out["kappa_c"] = s;
    out["lambda_ep3"] = crit.lambda_ep3;
    out["g_a_ep3"] = crit.g_a_ep3 * s;
    out["delta_a_ep3_plus"] = crit.delta_a_ep3_plus * s;
    out["delta_a_ep3_minus"] = crit.delta_a_ep3_minus * s;
    out["x_ep3"] = crit.x_ep3 * s;
    out["g_a_min"] = crit.g_a_min * s;
    common.maybe_emit(bindings);
    write_text(common.out, out.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// sweep / broken

struct SweepCmd {
  CommonOpts common;
  Bindings bindings;
  bool broken;

  std::string mode = "balanced";
  double eta = -1.1;
  double lambda = 1.0;
  double delta_a = 0.0;  // fixed detuning for balanced G sweeps
  double g_a = 0.0;      // fixed coupling for delta_a or g_c sweeps
  std::string axis = "g_a";
  double from = 0.0;
  double to = 1.0;
  int n = 1024;
  int delta_sign = 1;
  double omega_b = 50.0;
  double gap_threshold = 1e-3;
  double offset = 0.1;  // broken only
  ClassifyTolerances tol;

  // Convenience range flags (not config keys).
  double ga_from = 0.0, ga_to = 0.0, da_from = 0.0, da_to = 0.0;
  CLI::Option *o_ga_from = nullptr, *o_ga_to = nullptr;
  CLI::Option *o_da_from = nullptr, *o_da_to = nullptr;
  CLI::Option *o_axis = nullptr, *o_from = nullptr, *o_to = nullptr;

  explicit SweepCmd(bool broken_mode)
      : bindings(broken_mode ? "broken" : "sweep"), broken(broken_mode) {}

  void setup(CLI::App* sc) {
    bindings.add(sc, "--mode", "mode", mode, "balanced or unbalanced");
    bindings.add(sc, "--eta", "eta", eta, "kappa_a/kappa_c (unbalanced mode)");
    bindings.add(sc, "--lambda", "lambda", lambda, "G_c/G_a (unbalanced mode)");
    bindings.add(sc, "--delta-a", "delta_a", delta_a, "fixed Delta_a (balanced G sweep)");
    bindings.add(sc, "--ga", "g_a", g_a, "fixed G_a (delta_a or g_c sweep)");
    o_axis = bindings.add(sc, "--axis", "axis", axis, "sweep axis: g_a, delta_a or g_c");
    o_from = bindings.add(sc, "--from", "from", from, "axis start");
    o_to = bindings.add(sc, "--to", "to", to, "axis end");
    bindings.add(sc, "--n", "n", n, "number of grid points");
    bindings.add(sc, "--delta-sign", "delta_sign", delta_sign,
                 "Delta_a branch sign (unbalanced mode)");
    bindings.add(sc, "--omega-b", "omega_b", omega_b, "mechanical frequency");
    bindings.add(sc, "--gap-threshold", "gap_threshold", gap_threshold,
                 "coalescence gap threshold");
    bindings.add(sc, "--eps-d", "eps_d", tol.eps_d, "discriminant threshold");
    bindings.add(sc, "--eps-a", "eps_a", tol.eps_a, "A threshold");
    bindings.add(sc, "--eps-b", "eps_b", tol.eps_b, "B threshold");
    if (broken) {
      bindings.add(sc, "--offset", "offset", offset,
                   "rate-balance offset: gamma_b = -(1+eta) kappa_c + offset");
    }
    o_ga_from = sc->add_option("--ga-from", ga_from, "shorthand for --axis g_a --from");
    o_ga_to = sc->add_option("--ga-to", ga_to, "shorthand for --axis g_a --to");
    o_da_from = sc->add_option("--da-from", da_from, "shorthand for --axis delta_a --from");
    o_da_to = sc->add_option("--da-to", da_to, "shorthand for --axis delta_a --to");
    common.add_to(sc, bindings, /*with_format=*/true);
  }

  void resolve_axis_shorthand() {
    const bool ga_pair = o_ga_from->count() > 0 || o_ga_to->count() > 0;
    const bool da_pair = o_da_from->count() > 0 || o_da_to->count() > 0;
    if (ga_pair && da_pair) throw UsageError("give only one of --ga-from/--da-from pairs");
    if (ga_pair && (o_ga_from->count() == 0 || o_ga_to->count() == 0)) {
      throw UsageError("--ga-from and --ga-to must be given together");
    }
    if (da_pair && (o_da_from->count() == 0 || o_da_to->count() == 0)) {
      throw UsageError("--da-from and --da-to must be given together");
    }
    if ((ga_pair || da_pair) &&
        (o_axis->count() > 0 || o_from->count() > 0 || o_to->count() > 0)) {
      throw UsageError("range shorthands conflict with --axis/--from/--to");
    }
    if (ga_pair) {
      axis = "g_a";
      from = ga_from;
      to = ga_to;
    } else if (da_pair) {
      axis = "delta_a";
      from = da_from;
      to = da_to;
    }
  }

  ParamGenerator make_generator() const {
    const double wb = omega_b;
    if (mode == "balanced") {
      if (axis == "g_a") {
        const double d = delta_a;
        return [d, wb](double g) { return enforce_ph_balanced(d, g, 1.0, wb); };
      }
      if (axis == "delta_a") {
        const double g = g_a;
        return [g, wb](double d) { return enforce_ph_balanced(d, g, 1.0, wb); };
      }
      throw UsageError("balanced mode sweeps g_a or delta_a only");
    }
    if (mode != "unbalanced") throw UsageError("mode must be 'balanced' or 'unbalanced'");
    if (std::abs(eta + 1.0) < kBalancedEtaTol) {
      throw UsageError("unbalanced mode needs eta != -1 (use --mode balanced)");
    }
    const double e = eta;
    const int sign = delta_sign;
    if (axis == "g_a") {
      const double lam = lambda;
      return [e, lam, sign, wb](double g) { return enforce_ph(e, lam, g, 1.0, sign, wb); };
    }
    if (axis == "g_c") {
      const double g = g_a;
      if (g == 0.0) throw UsageError("--ga must be nonzero for a g_c sweep");
      return [e, g, sign, wb](double gc) {
        return enforce_ph(e, gc / g, g, 1.0, sign, wb);
      };
    }
    throw UsageError("unbalanced mode sweeps g_a or g_c");
  }

  json sweep_json(const BranchSet& b) const {
    const UnitScale s = common.scale();
    json points = json::array();
    for (const SweepPoint& pt : b.points) {
      json row;
      row["axis"] = pt.axis * s.freq();
      if (pt.status == PointStatus::kOk) {
        json xs = json::array();
        for (const Complex& x : pt.x) xs.push_back(complex_json(x * s.freq()));
        row["x"] = xs;
      } else {
        row["x"] = nullptr;
      }
      if (pt.status == PointStatus::kOk && pt.classified) {
        row["D"] = pt.disc.D * s.d();
        row["A"] = pt.disc.A * s.a();
        row["B"] = pt.disc.B * s.b();
        row["class"] = to_string(pt.cls);
      } else {
        row["D"] = nullptr;
        row["A"] = nullptr;
        row["B"] = nullptr;
        row["class"] = pt.status == PointStatus::kOk
                           ? "na"
                           : (pt.status == PointStatus::kInfeasible ? "infeasible"
                                                                    : "numeric_failure");
      }
      points.push_back(std::move(row));
    }
    json coal = json::array();
    for (const Coalescence& c : b.coalescences) {
      coal.push_back(json{{"axis", c.axis * s.freq()},
                          {"x", complex_json(c.x * s.freq())},
                          {"kind", to_string(c.kind)},
                          {"gap", c.gap * s.freq()},
                          {"pair", json::array({c.pair_i + 1, c.pair_j + 1})}});
    }
    return json{{"points", std::move(points)}, {"coalescences", std::move(coal)}};
  }

  int execute() {
    resolve_axis_shorthand();
    common.finish(bindings);
    common.validate();
    const ParamGenerator gen = make_generator();
    BranchSet b;
    if (broken) {
      b = broken_ph_sweep(gen, from, to, n, offset);
    } else {
      b = eigen_sweep(gen, from, to, n, gap_threshold, tol);
    }

    bool any_ok = false;
    for (const SweepPoint& pt : b.points) any_ok |= pt.status == PointStatus::kOk;
    if (!any_ok) {
      std::cerr << "error: every sweep point is infeasible\n";
      return kExitInfeasible;
    }

    common.maybe_emit(bindings);
    std::ostringstream os;
    if (common.format == "csv") {
      write_sweep_csv(os, b, common.scale());
    } else {
      os << sweep_json(b).dump(2) << "\n";
    }
    write_text(common.out, os.str());
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// phase

struct PhaseCmd {
  CommonOpts common;
  Bindings bindings{"phase"};

  std::string mode = "balanced";
  double eta = -1.1;
  double p1_min = 0.0, p1_max = 6.0;
  double p2_min = 0.0, p2_max = 20.0;
  int nx = 256, ny = 256;
  int delta_sign = 1;
  double omega_b = 50.0;
  std::string contour_out = "-";
  ClassifyTolerances tol;

  double gc_min = 0.0, gc_max = 0.0, da_min = 0.0, da_max = 0.0;
  CLI::Option *o_p2min = nullptr, *o_p2max = nullptr;
  CLI::Option *o_gc_min = nullptr, *o_gc_max = nullptr;
  CLI::Option *o_da_min = nullptr, *o_da_max = nullptr;

  void setup(CLI::App* sc) {
    bindings.add(sc, "--mode", "mode", mode,
                 "balanced (G_a, Delta_a) or unbalanced (G_a, G_c)");
    bindings.add(sc, "--eta", "eta", eta, "kappa_a/kappa_c (unbalanced mode)");
    bindings.add(sc, "--ga-min", "p1_min", p1_min, "G_a axis start");
    bindings.add(sc, "--ga-max", "p1_max", p1_max, "G_a axis end");
    o_p2min = bindings.add(sc, "--p2-min", "p2_min", p2_min, "second axis start");
    o_p2max = bindings.add(sc, "--p2-max", "p2_max", p2_max, "second axis end");
    bindings.add(sc, "--nx", "nx", nx, "grid points along G_a");
    bindings.add(sc, "--ny", "ny", ny, "grid points along the second axis");
    bindings.add(sc, "--delta-sign", "delta_sign", delta_sign,
                 "Delta_a branch sign (unbalanced mode)");
    bindings.add(sc, "--omega-b", "omega_b", omega_b, "mechanical frequency");
    bindings.add(sc, "--eps-d", "eps_d", tol.eps_d, "discriminant threshold");
    bindings.add(sc, "--eps-a", "eps_a", tol.eps_a, "A threshold");
    bindings.add(sc, "--eps-b", "eps_b", tol.eps_b, "B threshold");
    bindings.add(sc, "--contour-out", "contour_out", contour_out,
                 "contour CSV file ('-' = stdout)");
    o_da_min = sc->add_option("--da-min", da_min, "shorthand for --p2-min (balanced)");
    o_da_max = sc->add_option("--da-max", da_max, "shorthand for --p2-max (balanced)");
    o_gc_min = sc->add_option("--gc-min", gc_min, "shorthand for --p2-min (unbalanced)");
    o_gc_max = sc->add_option("--gc-max", gc_max, "shorthand for --p2-max (unbalanced)");
    common.add_to(sc, bindings, /*with_format=*/true);
  }

  void resolve_shorthand() {
    const bool da = o_da_min->count() > 0 || o_da_max->count() > 0;
    const bool gc = o_gc_min->count() > 0 || o_gc_max->count() > 0;
    if (da && gc) throw UsageError("give only one of --da-min/--gc-min pairs");
    if ((da || gc) && (o_p2min->count() > 0 || o_p2max->count() > 0)) {
      throw UsageError("axis shorthands conflict with --p2-min/--p2-max");
    }
    if (da) {
      if (o_da_min->count() == 0 || o_da_max->count() == 0) {
        throw UsageError("--da-min and --da-max must be given together");
      }
      p2_min = da_min;
      p2_max = da_max;
    }
    if (gc) {
      if (o_gc_min->count() == 0 || o_gc_max->count() == 0) {
        throw UsageError("--gc-min and --gc-max must be given together");
      }
      p2_min = gc_min;
      p2_max = gc_max;
    }
  }

  json phase_json(const PhaseDiagram& dia) const {
    const UnitScale s = common.scale();
    json cells = json::array();
    for (int iy = 0; iy < dia.axis2.count; ++iy) {
      for (int ix = 0; ix < dia.axis1.count; ++ix) {
        const PhaseCell& cell = dia.at(ix, iy);
        cells.push_back(json{{"p1", dia.axis1.value(ix) * s.freq()},
                             {"p2", dia.axis2.value(iy) * s.freq()},
                             {"D", cell.feasible ? json(cell.D * s.d()) : json(nullptr)},
                             {"A", cell.feasible ? json(cell.A * s.a()) : json(nullptr)},
                             {"B", cell.feasible ? json(cell.B * s.b()) : json(nullptr)},
                             {"sign_D", cell.sign_d},
                             {"class", cell.feasible ? to_string(cell.cls) : "infeasible"}});
      }
    }
    json contours = json::array();
    int segment_id = 0;
    for (const ContourSet& level : dia.contours) {
      for (const ContourPolyline& line : level.polylines) {
        json pts = json::array();
        for (const ContourPoint& pt : line.points) {
          pts.push_back(json{{"p1", pt.p1 * s.freq()}, {"p2", pt.p2 * s.freq()}});
        }
        contours.push_back(json{{"level", level.level_name},
                                {"segment_id", segment_id++},
                                {"points", std::move(pts)}});
      }
    }
    json triples = json::array();
    for (const ContourPoint& tp : dia.triple_points) {
      triples.push_back(json{{"p1", tp.p1 * s.freq()}, {"p2", tp.p2 * s.freq()}});
    }
    return json{{"cells", std::move(cells)},
                {"contours", std::move(contours)},
                {"triple_points", std::move(triples)}};
  }

  int execute() {
    resolve_shorthand();
    common.finish(bindings);
    common.validate();
    PhaseRequest req;
    if (mode == "balanced") {
      req.mode = PhaseMode::kBalanced;
    } else if (mode == "unbalanced") {
      req.mode = PhaseMode::kUnbalanced;
    } else {
      throw UsageError("mode must be 'balanced' or 'unbalanced'");
    }
    req.eta = eta;
    req.axis1 = {"G_a", p1_min, p1_max, nx};
    req.axis2 = {mode == "balanced" ? "Delta_a" : "G_c", p2_min, p2_max, ny};
    req.delta_sign = delta_sign;
    req.omega_b = omega_b;
    req.tol = tol;
    const PhaseDiagram dia = phase_diagram(req);
    if (!dia.any_feasible) {
      std::cerr << "warning: the whole grid is infeasible; emitting sentinel cells\n";
    }

    common.maybe_emit(bindings);
    const UnitScale s = common.scale();
    if (common.format == "csv") {
      std::ostringstream raster, contours;
      write_phase_csv(raster, dia, s);
      write_contour_csv(contours, dia, s);
      write_text(common.out, raster.str());
      write_text(contour_out, contours.str());
    } else {
      write_text(common.out, phase_json(dia).dump(2) + "\n");
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// stability

struct StabilityCmd {
  CommonOpts common;
  Bindings bindings{"stability"};

  double eta = -1.0;
  double lambda = 1.0;
  double g_a = 2.0;
  double delta_a = 0.0;
  double offset = 0.0;
  double gamma_b = 0.0;
  double omega_b = 50.0;
  CLI::Option* o_gamma = nullptr;

  void setup(CLI::App* sc) {
    bindings.add(sc, "--eta", "eta", eta, "kappa_a/kappa_c");
    bindings.add(sc, "--lambda", "lambda", lambda, "G_c/G_a");
    bindings.add(sc, "--ga", "g_a", g_a, "coupling G_a");
    bindings.add(sc, "--delta-a", "delta_a", delta_a, "detuning Delta_a");
    bindings.add(sc, "--offset", "offset", offset,
                 "gamma_b = -(1+eta) kappa_c + offset");
    o_gamma = bindings.add(sc, "--gamma-b", "gamma_b", gamma_b,
                           "explicit gamma_b (overrides --offset)");
    bindings.add(sc, "--omega-b", "omega_b", omega_b, "mechanical frequency");
    common.add_to(sc, bindings, /*with_format=*/false);
  }

  int execute() {
    common.finish(bindings);
    common.validate();
    ReducedParams r;
    r.eta = eta;
    r.lambda = lambda;
    r.kappa_c = 1.0;
    r.omega_b = omega_b;
    r.Delta_a = delta_a;
    r.Delta_c = -eta * delta_a;
    r.G_a = g_a;
    r.G_c = lambda * g_a;
    r.gamma_b = o_gamma->count() > 0 ? gamma_b : -(1.0 + eta) + offset;

    const StabilityReport rep = stability_report(r);
    const double s = common.kappa_c;
    json out;
    for (int k = 0; k < 6; ++k) {
      out["c" + std::to_string(k)] = rep.char_coeffs[k] * std::pow(s, 6 - k);
    }
    out["rh_stable"] = rep.rh_stable;
    out["eigen_stable"] = rep.oracle_ok ? json(rep.eigen_stable) : json(nullptr);
    out["max_real_part"] = rep.oracle_ok ? json(rep.max_real_part * s) : json(nullptr);
    common.maybe_emit(bindings);
    write_text(common.out, out.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// steady

struct SteadyCmd {
  CommonOpts common;
  Bindings bindings{"steady"};

  PhysicalParams p;
  double drive_a_re = 0.0, drive_a_im = 0.0, drive_c_re = 0.0, drive_c_im = 0.0;
  double rwa_threshold = 0.1;

  void setup(CLI::App* sc) {
    bindings.add(sc, "--omega-a", "omega_a", p.omega_a, "cavity a frequency");
    bindings.add(sc, "--omega-c", "omega_c", p.omega_c, "cavity c frequency");
    bindings.add(sc, "--omega-b", "omega_b", p.omega_b, "mechanical frequency");
    bindings.add(sc, "--nu-a", "nu_a", p.nu_a, "drive frequency on cavity a");
    bindings.add(sc, "--nu-c", "nu_c", p.nu_c, "drive frequency on cavity c");
    bindings.add(sc, "--g-a", "g_a", p.g_a, "single-photon coupling, cavity a");
    bindings.add(sc, "--g-c", "g_c", p.g_c, "single-photon coupling, cavity c");
    bindings.add(sc, "--drive-a-re", "drive_a_re", drive_a_re, "Re drive amplitude a");
    bindings.add(sc, "--drive-a-im", "drive_a_im", drive_a_im, "Im drive amplitude a");
    bindings.add(sc, "--drive-c-re", "drive_c_re", drive_c_re, "Re drive amplitude c");
    bindings.add(sc, "--drive-c-im", "drive_c_im", drive_c_im, "Im drive amplitude c");
    bindings.add(sc, "--kappa-a", "kappa_a", p.kappa_a, "signed cavity-a rate");
    bindings.add(sc, "--gamma-b", "gamma_b", p.gamma_b, "signed mechanical rate");
    bindings.add(sc, "--rwa-threshold", "rwa_threshold", rwa_threshold,
                 "rotating-wave validity threshold");
    common.add_to(sc, bindings, /*with_format=*/false);
  }

  int execute() {
    common.finish(bindings);
    common.validate();
    p.kappa_c = 1.0;
    p.drive_a = Complex(drive_a_re, drive_a_im);
    p.drive_c = Complex(drive_c_re, drive_c_im);

    const SteadyState st = steady_state(p);
    const double s = common.kappa_c;
    json out;
    out["a_s"] = complex_json(st.a_s);
    out["b_s"] = complex_json(st.b_s);
    out["c_s"] = complex_json(st.c_s);
    out["delta_a_eff"] = st.delta_a_eff * s;
    out["delta_c_eff"] = st.delta_c_eff * s;
    out["G_a"] = complex_json(st.G_a * s);
    out["G_c"] = complex_json(st.G_c * s);
    if (st.G_a != Complex(0.0, 0.0)) {
      const ReducedParams r = reduce(p, st);
      out["reduced"] = json{{"eta", r.eta},
                            {"lambda", r.lambda},
                            {"delta_a", r.Delta_a * s},
                            {"delta_c", r.Delta_c * s},
                            {"g_a", r.G_a * s},
                            {"g_c", r.G_c * s},
                            {"gamma_b", r.gamma_b * s},
                            {"omega_b", r.omega_b * s}};
      const RwaReport rwa = rwa_validity(r, rwa_threshold);
      auto cavity = [](const RwaCavityCheck& c) {
        return json{{"ratio1", c.ratio1},
                    {"ratio2", c.ratio2},
                    {"division_defined", c.division_defined}};
      };
      out["rwa"] = json{{"cavity_a", cavity(rwa.cavity_a)},
                        {"cavity_c", cavity(rwa.cavity_c)},
                        {"threshold", rwa.threshold},
                        {"ok", rwa.ok}};
    } else {
      out["reduced"] = nullptr;
      out["rwa"] = nullptr;
    }
    common.maybe_emit(bindings);
    write_text(common.out, out.dump(2) + "\n");
    return kExitOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Exceptional-point analysis of a gain-loss three-mode optomechanical model"};
  app.require_subcommand(1);

  Ep3Cmd ep3_cmd;
  SweepCmd sweep_cmd{false};
  SweepCmd broken_cmd{true};
  PhaseCmd phase_cmd;
  StabilityCmd stability_cmd;
  SteadyCmd steady_cmd;

  CLI::App* sc_ep3 = app.add_subcommand("ep3", "closed-form EP3 critical parameters");
  ep3_cmd.setup(sc_ep3);
  CLI::App* sc_sweep = app.add_subcommand("sweep", "eigenvalue branches along one axis");
  sweep_cmd.setup(sc_sweep);
  CLI::App* sc_broken =
      app.add_subcommand("broken", "sweep with the rate balance broken by an offset");
  broken_cmd.setup(sc_broken);
  CLI::App* sc_phase = app.add_subcommand("phase", "2-D discriminant phase diagram");
  phase_cmd.setup(sc_phase);
  CLI::App* sc_stability =
      app.add_subcommand("stability", "drift-matrix Routh-Hurwitz stability report");
  stability_cmd.setup(sc_stability);
  CLI::App* sc_steady = app.add_subcommand("steady", "classical steady state and couplings");
  steady_cmd.setup(sc_steady);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (sc_ep3->parsed()) return ep3_cmd.execute();
    if (sc_sweep->parsed()) return sweep_cmd.execute();
    if (sc_broken->parsed()) return broken_cmd.execute();
    if (sc_phase->parsed()) return phase_cmd.execute();
    if (sc_stability->parsed()) return stability_cmd.execute();
    if (sc_steady->parsed()) return steady_cmd.execute();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NotApplicableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NumericFailureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace omep::cli
