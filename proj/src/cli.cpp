#include "surfstate/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>

#include "surfstate/bands.hpp"
#include "surfstate/bpm.hpp"
#include "surfstate/errors.hpp"
#include "surfstate/figures.hpp"
#include "surfstate/report.hpp"

namespace surfstate {

namespace {

constexpr double kPi = std::numbers::pi;

struct Tolerances {
  double pair = 1e-9;            // lattice-pair W mismatch
  double edge = 1e-8;            // band-edge ambiguity
  double contamination = 1e-6;   // BPM edge amplitude / peak
  double tail = 1e-12;           // BPM domain fit
  double overlap = 0.999;        // stationarity threshold

  void apply(const std::vector<std::string>& items) {
    for (const auto& item : items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--tol", "expected KEY=VALUE, got " + item);
      const std::string key = item.substr(0, eq);
      double value = 0.0;
      try {
        value = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--tol", "not a number: " + item);
      }
      if (key == "pair") pair = value;
      else if (key == "edge") edge = value;
      else if (key == "contamination") contamination = value;
      else if (key == "tail") tail = value;
      else if (key == "overlap") overlap = value;
      else throw CLI::ValidationError("--tol", "unknown key '" + key +
                                                   "' (pair, edge, contamination, tail, overlap)");
    }
  }

  Json to_json() const {
    return {{"pair", number(pair)},
            {"edge", number(edge)},
            {"contamination", number(contamination)},
            {"tail", number(tail)},
            {"overlap", number(overlap)}};
  }
};

// Lattice parameters from flags or a parameter file. Flags win.
struct LatticeFlags {
  std::optional<double> eta, delta, lambda_nm, n_s, Lambda_um, n1, n2, theta_rad;
  std::optional<int> order;

  void add(CLI::App* app) {
    app->add_option("--eta", eta, "lattice strength eta");
    app->add_option("--delta", delta, "lattice asymmetry Delta");
    app->add_option("--order", order, "family order N >= 0");
    app->add_option("--lambda-nm", lambda_nm, "wavelength [nm] (physical input)");
    app->add_option("--n-s", n_s, "substrate index (physical input)");
    app->add_option("--Lambda-um", Lambda_um, "half period [um] (physical input)");
    app->add_option("--n1", n1, "index amplitude n1 (physical input)");
    app->add_option("--n2", n2, "index amplitude n2 (physical input)");
    app->add_option("--theta-rad", theta_rad, "relative phase theta [rad] (physical input)");
  }

  void merge(Json& in) const {
    const auto put = [&](const char* key, const auto& v) {
      if (v) in[key] = *v;
    };
    put("eta", eta);
    put("delta", delta);
    put("order", order);
    put("lambda_nm", lambda_nm);
    put("n_s", n_s);
    put("Lambda_um", Lambda_um);
    put("n1", n1);
    put("n2", n2);
    put("theta_rad", theta_rad);
  }
};

bool has_physical(const Json& in) {
  for (const char* k : {"lambda_nm", "n_s", "Lambda_um", "n1", "n2", "theta_rad"})
    if (!in.contains(k)) return false;
  return true;
}

/// Scaled parameters; delta may be left open (lattice pair solves for it).
LatticeParams lattice_from(Json& in, bool delta_optional = false,
                           std::optional<double> delta_default = std::nullopt) {
  if (in.contains("eta")) {
    if (!in.contains("delta")) {
      if (!delta_optional || !delta_default) throw std::invalid_argument("missing --delta");
      in["delta"] = *delta_default;
    }
    return LatticeParams(in["eta"].get<double>(), in["delta"].get<double>(), in.value("order", 0));
  }
  if (has_physical(in)) {
    PhysicalParams phys{in["lambda_nm"].get<double>() * 1e-9, in["n_s"].get<double>(),
                        in["Lambda_um"].get<double>() * 1e-6, in["n1"].get<double>(),
                        in["n2"].get<double>(),           in["theta_rad"].get<double>()};
    const auto p = from_physical(phys);
    in["eta"] = p.eta();
    in["delta"] = p.delta();
    in["order"] = p.order();
    return p;
  }
  throw std::invalid_argument(
      "lattice parameters missing: give --eta/--delta/--order or the physical set "
      "--lambda-nm/--n-s/--Lambda-um/--n1/--n2/--theta-rad");
}

Json load_params(const std::optional<std::string>& path) {
  if (!path) return Json::object();
  std::ifstream f(*path);
  if (!f) throw std::invalid_argument("cannot read parameter file " + *path);
  Json j = Json::parse(f);
  if (!j.is_object()) throw std::invalid_argument("parameter file must hold a JSON object");
  return j;
}

std::string default_out_dir() {
  const char* env = std::getenv("SURFSTATE_OUT_DIR");
  return env && *env ? env : "surfstate_out";
}

const char* verdict_name(const NoSolution& e) {
  if (dynamic_cast<const NotInExactFamily*>(&e)) return "NotInExactFamily";
  if (dynamic_cast<const NoRealRoot*>(&e)) return "NoRealRoot";
  if (dynamic_cast<const ConditionUnsatisfied*>(&e)) return "ConditionUnsatisfied";
  if (dynamic_cast<const NoState*>(&e)) return "NoState";
  if (dynamic_cast<const NoSolutionInRange*>(&e)) return "NoSolutionInRange";
  if (dynamic_cast<const NoRootInBracket*>(&e)) return "NoRootInBracket";
  return "NoSolution";
}

struct Session {
  std::string command;
  std::string out_dir;
  std::string format = "csv";
  std::optional<std::string> params_file;
  std::vector<std::string> tol_items;
  Tolerances tol;
  Json inputs = Json::object();

  std::string table_name(const std::string& stem) const { return stem + "." + format; }
};

// ---- surface geometry options shared by `surface` and `propagate` ----

struct SurfaceFlags {
  std::optional<std::string> geometry, mode, R, convention;
  std::optional<int> branch;
  std::optional<double> x0, x1, V0, V1, x_ref;

  void add(CLI::App* app) {
    app->add_option("--geometry", geometry, "semi | pair | sandwich | guide");
    app->add_option("--branch", branch, "branch m1 (1-based), default 1");
    app->add_option("--x0", x0, "first interface");
    app->add_option("--x1", x1, "second interface (sandwich, guide)");
    app->add_option("--V0", V0, "given V0 (sandwich mode given_v0; guide root seed)");
    app->add_option("--V1", V1, "unused on input; reported on output");
    app->add_option("--R", R, "amplitude ratio for sandwich mode given_r, or 'inf'");
    app->add_option("--mode", mode, "sandwich mode: pure_first | pure_second | given_r | given_v0")
        ->check(CLI::IsMember({"pure_first", "pure_second", "given_r", "given_v0"}));
    app->add_option("--convention", convention, "second solution: integral | anchored")
        ->check(CLI::IsMember({"integral", "anchored"}));
    app->add_option("--x-ref", x_ref, "anchor of the anchored convention");
  }

  void merge(Json& in) const {
    const auto put = [&](const char* key, const auto& v) {
      if (v) in[key] = *v;
    };
    put("geometry", geometry);
    put("branch", branch);
    put("x0", x0);
    put("x1", x1);
    put("V0", V0);
    put("V1", V1);
    put("R", R);
    put("mode", mode);
    put("convention", convention);
    put("x_ref", x_ref);
  }
};

std::optional<double> opt_number(const Json& in, const char* key) {
  if (!in.contains(key) || in[key].is_null()) return std::nullopt;
  return in[key].get<double>();
}

double required(const Json& in, const char* key) {
  const auto v = opt_number(in, key);
  if (!v) throw std::invalid_argument(std::string("missing --") + key);
  return *v;
}

SurfaceSolution solve_surface(Json& in, const Tolerances& tol) {
  if (!in.contains("geometry")) throw std::invalid_argument("missing --geometry");
  const Geometry g = parse_geometry(in["geometry"].get<std::string>());
  const int branch = in.value("branch", 1);
  const double x0 = required(in, "x0");
  switch (g) {
    case Geometry::SemiInfinite:
      return solve_semi_infinite(lattice_from(in), branch, x0);
    case Geometry::LatticePair: {
      if (!in.contains("delta") && in.contains("eta"))
        in["delta"] = find_delta_for_pair(in["eta"].get<double>(), in.value("order", 0), branch, x0);
      return solve_lattice_pair(lattice_from(in), branch, x0, tol.pair);
    }
    case Geometry::FiniteSandwich: {
      const double x1 = required(in, "x1");
      std::string mode = in.value("mode", std::string{});
      if (mode.empty()) {
        if (in.contains("R")) mode = "given_r";
        else if (in.contains("V0")) mode = "given_v0";
        else mode = "pure_first";
        in["mode"] = mode;
      }
      SandwichMode m = SandwichMode::pure_first();
      if (mode == "pure_second") {
        m = SandwichMode::pure_second();
      } else if (mode == "given_v0") {
        m = SandwichMode::given_v0(required(in, "V0"));
      } else if (mode == "given_r") {
        if (!in.contains("R")) throw std::invalid_argument("missing --R");
        const auto& r = in["R"];
        const std::string rs = r.is_string() ? r.get<std::string>() : "";
        if (rs == "inf" || rs == "infinity") {
          m = SandwichMode::pure_second();
        } else {
          m = SandwichMode::given_r(r.is_string() ? std::stod(rs) : r.get<double>());
        }
      }
      SecondSolutionChoice choice;
      if (in.contains("convention"))
        choice.convention = in["convention"] == "integral" ? Convention::IntegralFromMinusInfinity
                                                           : Convention::WronskianAnchored;
      choice.x_ref = opt_number(in, "x_ref");
      return solve_finite_sandwich(lattice_from(in), branch, x0, x1, m, choice);
    }
    case Geometry::GapGuide:
      return solve_gap_guide(lattice_from(in), branch, x0, required(in, "x1"), opt_number(in, "V0"));
  }
  throw std::logic_error("unhandled geometry");
}

// ---- commands ----

Json cmd_bands(Session& s, OutputSet& out, int count, int truncation, int k_points) {
  const auto p = lattice_from(s.inputs);
  s.inputs["count"] = count;
  s.inputs["truncation"] = truncation;
  s.inputs["k_points"] = k_points;
  const auto table = band_table(p, count, {truncation, k_points});
  out.write_table(s.table_name("bands"), band_table_csv(table));

  Json summary;
  summary["params"] = to_json(p);
  Json edges = Json::array(), gaps = Json::array();
  for (int j = 0; j < count; ++j) {
    edges.push_back({{"band", j + 1}, {"min", number(table.band_min(j))}, {"max", number(table.band_max(j))}});
    if (j + 1 < count && table.band_min(j + 1) > table.band_max(j))
      gaps.push_back({{"gap", j + 1}, {"lower", number(table.band_max(j))}, {"upper", number(table.band_min(j + 1))}});
  }
  summary["band_edges"] = edges;
  summary["gaps"] = gaps;
  Json verdicts = Json::array();
  if (p.eta() != 0.0) {
    try {
      for (const auto& r : propagation_constants(p)) verdicts.push_back(to_json(classify(table, r.beta, s.tol.edge)));
    } catch (const NoRealRoot&) {
    }
  }
  summary["in_gap_verdicts"] = verdicts;
  out.write_json("bands_summary.json", summary);
  return summary;
}

Json cmd_ingap(Session& s, OutputSet& out, double x_min, double x_max, int points) {
  const auto p = lattice_from(s.inputs);
  s.inputs["x_min"] = number(x_min);
  s.inputs["x_max"] = number(x_max);
  s.inputs["points"] = points;
  const auto roots = propagation_constants(p);
  Json result;
  result["params"] = to_json(p);
  if (s.inputs.contains("lambda_nm") && s.inputs.contains("n_s") && s.inputs.contains("Lambda_um"))
    result["physical"] = to_json(to_physical(p, s.inputs["lambda_nm"].get<double>() * 1e-9,
                                             s.inputs["n_s"].get<double>(),
                                             s.inputs["Lambda_um"].get<double>() * 1e-6));
  result["propagation_constants"] = to_json(roots);
  Json states = Json::array();
  for (std::size_t m = 0; m < roots.size(); ++m) {
    const auto st = InGapState::build(p, static_cast<int>(m + 1));
    Json j = to_json(st);
    j["verdict"] = to_json(classify(p, st.beta(), {}, s.tol.edge));
    states.push_back(j);
    Table t{{"x", "psi", "dpsi"}, {}};
    for (double x : linspace(x_min, x_max, points)) {
      const auto v = st.eval(x);
      t.add({x, v.psi, v.dpsi});
    }
    out.write_table(s.table_name("profile_m" + std::to_string(m + 1)), t);
  }
  result["states"] = states;
  out.write_json("ingap.json", result);
  return result;
}

Json cmd_surface(Session& s, OutputSet& out, double padding, int points) {
  const auto sol = solve_surface(s.inputs, s.tol);
  s.inputs["padding"] = number(padding);
  s.inputs["points"] = points;
  const auto rep = assemble_and_verify(sol.state, {padding, points});
  Json result = to_json(sol);
  result["continuity"] = to_json(rep);
  result["verdict"] = to_json(classify(sol.params, sol.beta, {}, s.tol.edge));
  out.write_json("solution.json", result);
  out.write_table(s.table_name("profile"), profile_table(rep));
  return result;
}

struct PropagateFlags {
  double dz = 0.005, z_max = 50.0, absorber_fraction = 0.1;
  int points = 4096, output_stride = 20, snapshot_stride = 0;
  bool no_absorber = false, remove_interface = false;
  std::optional<double> x_min, x_max;
};

Json cmd_propagate(Session& s, OutputSet& out, const PropagateFlags& f) {
  const auto sol = solve_surface(s.inputs, s.tol);
  Grid1D grid;
  if (f.x_min || f.x_max) {
    if (!f.x_min || !f.x_max) throw std::invalid_argument("give both --x-min and --x-max");
    grid = {*f.x_min, *f.x_max, f.points};
    grid.validate();
  } else {
    GridFitOptions go;
    go.n_points = f.points;
    go.tail_tol = s.tol.tail;
    go.absorber_fraction = f.no_absorber ? 0.0 : f.absorber_fraction;
    grid = fit_grid(sol.state, go);
  }
  PropagationConfig c;
  c.dz = f.dz;
  c.z_max = f.z_max;
  c.output_stride = f.output_stride;
  c.snapshot_stride = f.snapshot_stride;
  c.absorber = !f.no_absorber;
  c.absorber_fraction = f.absorber_fraction;
  c.contamination_tol = s.tol.contamination;

  std::optional<std::vector<double>> V;
  if (f.remove_interface) {
    // Negative control: the periodic potential everywhere.
    const auto& regions = sol.state.regions();
    const auto it = std::find_if(regions.rbegin(), regions.rend(), [](const Region& r) { return r.periodic; });
    V = sample_potential(grid, it->potential);
  }
  s.inputs["propagation"] = {{"dz", number(f.dz)},
                             {"z_max", number(f.z_max)},
                             {"n_points", f.points},
                             {"output_stride", f.output_stride},
                             {"snapshot_stride", f.snapshot_stride},
                             {"absorber", c.absorber},
                             {"absorber_fraction", number(f.absorber_fraction)},
                             {"remove_interface", f.remove_interface}};
  const auto rep = stationarity_report(sol.state, grid, c, V);
  Json result;
  result["solution"] = to_json(sol);
  result["stationarity"] = to_json(rep);
  result["stationary"] = rep.min_overlap >= s.tol.overlap;
  out.write_json("stationarity.json", result);
  out.write_table(s.table_name("evolution"), evolution_table(rep.record));
  if (f.snapshot_stride > 0) out.write_table(s.table_name("snapshots"), snapshot_table(rep.record));
  return result;
}

Json cmd_figures(Session& s, OutputSet& out, const std::vector<std::string>& ids_in, std::ostream& os) {
  std::vector<std::string> ids = ids_in;
  if (ids.size() == 1 && ids[0] == "all") ids = figure_ids();
  s.inputs["figures"] = ids;
  Json results;
  for (const auto& id : ids) {
    const auto fig = reproduce_figure(id);
    Json j;
    j["id"] = fig.id;
    j["title"] = fig.title;
    j["inputs"] = fig.inputs;
    j["results"] = fig.results;
    Json checks = Json::array();
    for (const auto& c : fig.checks) {
      checks.push_back(to_json(c));
      os << "fig " << id << "  " << (c.passed ? "PASS" : (c.flag_only ? "FLAG" : "FAIL")) << "  "
         << c.name << " = " << format_number(c.value) << " (target " << format_number(c.target)
         << ", tol " << format_number(c.tol) << (c.relative ? " rel" : "") << ")\n";
    }
    j["checks"] = checks;
    j["passed"] = fig.all_passed();
    out.write_json("fig" + id + ".json", j);
    for (const auto& [stem, table] : fig.tables) out.write_table(s.table_name("fig" + id + "_" + stem), table);
    results[id] = {{"passed", fig.all_passed()}, {"checks", checks}};
  }
  return results;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& os, std::ostream& es) {
  CLI::App app{"Exact in-gap states and surface states of bichromatic superlattices", "surfstate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Session s;
  s.out_dir = default_out_dir();
  const auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--out", s.out_dir, "output directory (default $SURFSTATE_OUT_DIR or ./surfstate_out)");
    sub->add_option("--format", s.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", s.tol_items, "tolerance override KEY=VALUE (pair, edge, contamination, tail, overlap)");
    sub->add_option("--params", s.params_file, "JSON parameter file; flags override its fields");
  };

  LatticeFlags lattice;
  SurfaceFlags surface;

  auto* bands = app.add_subcommand("bands", "Hill-matrix bands and gap verdicts");
  int count = 4, truncation = 32, k_points = 201;
  add_globals(bands);
  lattice.add(bands);
  bands->add_option("--count", count, "number of bands");
  bands->add_option("--truncation", truncation, "plane waves -M..M");
  bands->add_option("--k-points", k_points, "k grid points over [-1/2, 1/2]");

  auto* ingap = app.add_subcommand("ingap", "propagation constants and in-gap states");
  double x_min = -4.0 * kPi, x_max = 4.0 * kPi;
  int points = 801;
  add_globals(ingap);
  lattice.add(ingap);
  ingap->add_option("--x-min", x_min, "profile start");
  ingap->add_option("--x-max", x_max, "profile end");
  ingap->add_option("--points", points, "profile samples");

  auto* surf = app.add_subcommand("surface", "solve and assemble a surface state");
  double padding = 6.0 * kPi;
  int profile_points = 2001;
  add_globals(surf);
  lattice.add(surf);
  surface.add(surf);
  surf->add_option("--padding", padding, "profile extends this far beyond the interfaces");
  surf->add_option("--points", profile_points, "profile samples");

  auto* prop = app.add_subcommand("propagate", "split-step propagation of a surface state");
  PropagateFlags pf;
  add_globals(prop);
  lattice.add(prop);
  surface.add(prop);
  prop->add_option("--dz", pf.dz, "step in z");
  prop->add_option("--z-max", pf.z_max, "propagation distance");
  prop->add_option("--points", pf.points, "grid points (power of two)");
  prop->add_option("--output-stride", pf.output_stride, "record every this many steps");
  prop->add_option("--snapshot-stride", pf.snapshot_stride, "field snapshots every this many steps");
  prop->add_option("--x-min", pf.x_min, "domain start (default: fitted to the state)");
  prop->add_option("--x-max", pf.x_max, "domain end");
  prop->add_flag("--no-absorber", pf.no_absorber, "disable the edge absorber");
  prop->add_option("--absorber-fraction", pf.absorber_fraction, "absorber width per edge");
  prop->add_flag("--remove-interface", pf.remove_interface, "propagate in the periodic potential only");

  auto* fig = app.add_subcommand("reproduce-figure", "figure data with caption checks");
  std::vector<std::string> ids;
  add_globals(fig);
  fig->add_option("ids", ids, "1a 1b 1c 1d 2a 2b 3a 3b 3c 4a 4b 4c, or all")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    s.tol.apply(s.tol_items);
    for (const auto& id : ids)
      if (id != "all" && std::find(figure_ids().begin(), figure_ids().end(), id) == figure_ids().end())
        throw CLI::ValidationError("ids", "unknown figure id '" + id + "'");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, os, es);
    return code == 0 ? kExitOk : kExitError;
  }

  CLI::App* sub = app.get_subcommands().front();
  s.command = sub->get_name();
  Json results;
  int code = kExitOk;
  try {
    s.inputs = load_params(s.params_file);
    lattice.merge(s.inputs);
    if (sub == surf || sub == prop) surface.merge(s.inputs);
    OutputSet out(s.out_dir);
    try {
      if (sub == bands) results = cmd_bands(s, out, count, truncation, k_points);
      else if (sub == ingap) results = cmd_ingap(s, out, x_min, x_max, points);
      else if (sub == surf) results = cmd_surface(s, out, padding, profile_points);
      else if (sub == prop) results = cmd_propagate(s, out, pf);
      else results = cmd_figures(s, out, ids, os);
    } catch (const NoSolution& e) {
      results = {{"verdict", verdict_name(e)}, {"message", e.what()}};
      code = kExitNoSolution;
    }
    Json inputs = s.inputs;
    inputs["argv"] = std::vector<std::string>(args.begin() + 1, args.end());
    inputs["format"] = s.format;
    out.write_manifest(s.command, inputs, s.tol.to_json(), results);
    if (s.command != "reproduce-figure") os << dump(results);
    if (code == kExitNoSolution) es << "no solution: " << results["message"].get<std::string>() << "\n";
    return code;
  } catch (const std::exception& e) {
    es << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace surfstate
