#include "surfstate/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace surfstate {

Json module_versions() {
  Json v;
  v["lattice_core"] = "1.0.0";
  v["ingap_solver"] = "1.0.0";
  v["band_structure"] = "1.0.0";
  v["interface_matcher"] = "1.0.0";
  v["bpm_propagator"] = "1.0.0";
  v["cli_reporting"] = "1.0.0";
  return v;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
  return buf;
}

Json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  const double r = std::strtod(format_number(x).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

Json to_json(const LatticeParams& p) {
  Json j;
  j["eta"] = number(p.eta());
  j["delta"] = number(p.delta());
  j["order"] = p.order();
  j["n1p"] = number(p.n1p());
  j["n2p"] = number(p.n2p());
  j["theta"] = number(p.theta());
  return j;
}

Json to_json(const PhysicalParams& p) {
  Json j;
  j["wavelength_m"] = number(p.wavelength);
  j["n_s"] = number(p.substrate_index);
  j["Lambda_m"] = number(p.half_period);
  j["n1"] = number(p.amp1);
  j["n2"] = number(p.amp2);
  j["theta_rad"] = number(p.phase);
  return j;
}

Json to_json(const std::vector<PropagationConstant>& roots) {
  Json a = Json::array();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Json r;
    r["branch"] = i + 1;
    r["beta"] = number(roots[i].beta);
    r["multiplicity"] = roots[i].multiplicity;
    a.push_back(r);
  }
  return a;
}

Json to_json(const InGapState& s) {
  Json j;
  j["eta"] = number(s.params().eta());
  j["delta"] = number(s.params().delta());
  j["order"] = s.params().order();
  j["branch"] = s.branch();
  j["beta"] = number(s.beta());
  j["multiplicity"] = s.multiplicity();
  std::vector<double> a(s.a().begin(), s.a().begin() + s.params().order() + 1);
  std::vector<double> b(s.b().begin(), s.b().begin() + s.params().order() + 1);
  j["a"] = numbers(a);
  j["b"] = numbers(b);
  j["wave_number"] = {number(s.wave_number().real()), number(s.wave_number().imag())};
  j["truncation_residual"] = number(s.truncation_residual());
  return j;
}

Json to_json(const GapVerdict& v) {
  Json j;
  j["beta"] = number(v.beta);
  j["verdict"] = to_string(v.kind);
  j["index"] = v.index;
  j["margin_below"] = number(v.margin_below);
  j["margin_above"] = number(v.margin_above);
  j["edge_distance"] = number(v.edge_distance());
  return j;
}

Json to_json(const Ratio& r) {
  if (r.is_infinite()) return "inf";
  return number(r.value);
}

Json to_json(const SurfaceSolution& s) {
  Json j;
  j["geometry"] = to_string(s.spec.geometry);
  j["params"] = to_json(s.params);
  j["branch"] = s.branch;
  j["beta"] = number(s.beta);
  j["x0"] = number(s.spec.x0);
  j["x1"] = s.spec.x1 ? number(*s.spec.x1) : Json(nullptr);
  j["V0"] = s.spec.V0 ? number(*s.spec.V0) : Json(nullptr);
  j["V1"] = s.spec.V1 ? number(*s.spec.V1) : Json(nullptr);
  j["R"] = s.spec.R ? to_json(*s.spec.R) : Json(nullptr);
  const auto& c = s.state.coefficients();
  Json coeffs;
  const auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) coeffs[name] = number(*v);
  };
  put("C1", c.C1);
  put("C2", c.C2);
  put("C2_tilde", c.C2_tilde);
  put("C2_minus", c.C2_minus);
  put("C2_plus", c.C2_plus);
  put("C3", c.C3);
  j["coefficients"] = coeffs;
  j["normalization"] = "unit_peak";
  j["convention"] = s.convention ? Json(to_string(*s.convention)) : Json(nullptr);
  j["x_ref"] = s.x_ref ? number(*s.x_ref) : Json(nullptr);
  j["warnings"] = s.warnings;
  return j;
}

Json to_json(const ProfileReport& r) {
  Json j;
  Json ifaces = Json::array();
  for (const auto& m : r.interfaces) {
    Json o;
    o["x"] = number(m.x);
    o["value_mismatch"] = number(m.value);
    o["derivative_mismatch"] = number(m.derivative);
    ifaces.push_back(o);
  }
  j["interfaces"] = ifaces;
  j["max_value_mismatch"] = number(r.max_value_mismatch());
  j["max_derivative_mismatch"] = number(r.max_derivative_mismatch());
  Json decay = Json::array();
  for (const auto& d : r.decay) {
    Json o;
    o["region"] = d.region;
    o["fitted_rate"] = number(d.fitted);
    o["expected_rate"] = number(d.expected);
    decay.push_back(o);
  }
  j["decay"] = decay;
  return j;
}

Json to_json(const StationarityReport& r) {
  Json j;
  j["beta"] = number(r.beta);
  j["beta_fit"] = number(r.beta_fit);
  j["min_overlap"] = number(r.min_overlap);
  j["final_overlap"] = number(r.final_overlap);
  j["norm_drift"] = number(r.norm_drift);
  j["peak_drift"] = number(r.peak_drift);
  j["centroid_drift"] = number(r.centroid_drift);
  j["dx"] = number(r.dx);
  j["max_edge_ratio"] = number(r.record.max_edge_ratio);
  const auto& g = r.record.grid;
  j["grid"] = {{"x_min", number(g.x_min)}, {"x_max", number(g.x_max)}, {"n_points", g.n_points}};
  const auto& c = r.record.config;
  j["config"] = {{"dz", number(c.dz)},
                 {"z_max", number(c.z_max)},
                 {"output_stride", c.output_stride},
                 {"absorber", c.absorber},
                 {"absorber_fraction", number(c.absorber_fraction)}};
  return j;
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match columns");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_number(row[c]);
    out += '\n';
  }
  return out;
}

Json Table::to_json() const {
  Json j;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Json col = Json::array();
    for (const auto& row : rows) col.push_back(number(row[c]));
    j[columns[c]] = col;
  }
  return j;
}

Table profile_table(const ProfileReport& r) {
  Table t{{"x", "psi", "dpsi", "abs_psi", "V"}, {}};
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    t.add({s.x, s.psi, s.dpsi, std::abs(s.psi), r.potential[i]});
  }
  return t;
}

Table band_table_csv(const BandTable& bt) {
  Table t;
  t.columns.push_back("k");
  for (int j = 0; j < bt.band_count(); ++j) t.columns.push_back("band" + std::to_string(j + 1));
  for (std::size_t ik = 0; ik < bt.k_grid.size(); ++ik) {
    std::vector<double> row{bt.k_grid[ik]};
    for (int j = 0; j < bt.band_count(); ++j) row.push_back(bt.bands[j][ik]);
    t.add(std::move(row));
  }
  return t;
}

Table evolution_table(const EvolutionRecord& r) {
  Table t{{"z", "norm", "overlap", "phase", "peak_x", "centroid"}, {}};
  for (const auto& o : r.steps) t.add({o.z, o.norm, o.overlap, o.phase, o.peak_x, o.centroid});
  return t;
}

Table snapshot_table(const EvolutionRecord& r) {
  Table t{{"z", "x", "re_phi", "im_phi", "intensity"}, {}};
  for (const auto& s : r.snapshots)
    for (int i = 0; i < r.grid.n_points; ++i)
      t.add({s.z, r.grid.x(i), s.field[i].real(), s.field[i].imag(), std::norm(s.field[i])});
  return t;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path OutputSet::write_text(const std::string& name, const std::string& content,
                                            const std::string& kind) {
  const auto path = dir_ / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
  files_.push_back({{"name", name}, {"kind", kind}});
  return path;
}

std::filesystem::path OutputSet::write_json(const std::string& name, const Json& j) {
  return write_text(name, dump(j), "json");
}

std::filesystem::path OutputSet::write_table(const std::string& name, const Table& t) {
  if (name.ends_with(".json")) return write_text(name, dump(t.to_json()), "json");
  return write_text(name, t.to_csv(), "csv");
}

std::filesystem::path OutputSet::write_manifest(const std::string& command, const Json& inputs,
                                                const Json& tolerances, const Json& results) {
  Json m;
  m["tool"] = "surfstate";
  m["version"] = kVersion;
  m["modules"] = module_versions();
  m["command"] = command;
  m["inputs"] = inputs;
  m["tolerances"] = tolerances;
  m["results"] = results;
  m["files"] = files_;
  const auto path = dir_ / "manifest.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << dump(m);
  return path;
}

}  // namespace surfstate
