#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "surfstate/bpm.hpp"
#include "surfstate/errors.hpp"

using namespace surfstate;
using oracle::pi;

namespace {

Field gaussian(const Grid1D& g, double sigma, double center = 0.0) {
  Field f(g.n_points);
  for (int i = 0; i < g.n_points; ++i) f[i] = oracle::free_gaussian(sigma, g.x(i) - center, 0.0);
  return f;
}

double second_moment(const Grid1D& g, const Field& f) {
  double m0 = 0.0, m2 = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    m0 += std::norm(f[i]);
    m2 += std::norm(f[i]) * g.x(i) * g.x(i);
  }
  return m2 / m0;
}

const PiecewiseState& fig2a() {
  static const auto s = solve_semi_infinite(LatticeParams(0.3, 0.2, 0), 1, pi / 2).state;
  return s;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW((Grid1D{-1.0, 1.0, 64}.validate()));
  CHECK_THROWS_AS((Grid1D{-1.0, 1.0, 100}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Grid1D{1.0, -1.0, 64}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Grid1D{-1.0, 1.0, 8}.validate()), std::invalid_argument);
  const Grid1D g{-2.0, 2.0, 16};
  CHECK(g.dx() == 0.25);
  CHECK(g.points().back() == doctest::Approx(1.75));
}

TEST_CASE("free Gaussian follows the analytic solution") {
  const Grid1D g{-120.0, 120.0, 2048};
  const double sigma = 2.0, z = 5.0;
  PropagationConfig c;
  c.z_max = z;
  const auto rec = split_step(g, gaussian(g, sigma), std::vector<double>(g.n_points, 0.0), c);
  Field exact(g.n_points);
  for (int i = 0; i < g.n_points; ++i) exact[i] = oracle::free_gaussian(sigma, g.x(i), z);
  CHECK(relative_distance(rec.final_field, exact) < 1e-6);
  const double width2 = sigma * sigma + 4 * z * z / (sigma * sigma);
  CHECK(second_moment(g, rec.final_field) == doctest::Approx(width2 / 2).epsilon(1e-6));
  CHECK(rec.norm_drift() < 1e-12);
}

TEST_CASE("unitarity without the absorber") {
  GridFitOptions go;
  go.n_points = 2048;
  const auto g = fit_grid(fig2a(), go);
  PropagationConfig c;
  c.z_max = 10.0;
  c.contamination_tol = 1.0;
  const auto rec = split_step(g, sample_field(g, fig2a().evaluator()), sample_potential(g, fig2a()), c);
  CHECK(rec.norm_drift() < 1e-12);
}

TEST_CASE("guards: boundary contamination and accuracy") {
  const Grid1D g{-10.0, 10.0, 256};
  PropagationConfig c;
  c.z_max = 10.0;
  CHECK_THROWS_AS(split_step(g, gaussian(g, 1.0), std::vector<double>(g.n_points, 0.0), c), BoundaryContamination);
  c.absorber = true;
  CHECK_NOTHROW(split_step(g, gaussian(g, 1.0), std::vector<double>(g.n_points, 0.0), c));

  PropagationConfig hot;
  CHECK_THROWS_AS(split_step(g, gaussian(g, 1.0), std::vector<double>(g.n_points, 100.0), hot), std::invalid_argument);
  CHECK_THROWS_AS(split_step(g, Field(10), std::vector<double>(g.n_points, 0.0), hot), std::invalid_argument);
}

TEST_CASE("absorber strength does not depend on dz") {
  const Grid1D g{-10.0, 10.0, 256};
  const auto norm_after = [&](double dz) {
    PropagationConfig c;
    c.z_max = 4.0;
    c.dz = dz;
    c.absorber = true;
    return split_step(g, gaussian(g, 1.0), std::vector<double>(g.n_points, 0.0), c).steps.back().norm;
  };
  const double a = norm_after(0.005), b = norm_after(0.0025);
  CHECK(a < 0.99 * std::sqrt(std::sqrt(pi)));  // initial norm pi^(1/4)
  CHECK(a == doctest::Approx(b).epsilon(1e-2));
}

TEST_CASE("fit_grid: tails and whole periods") {
  const auto g = fit_grid(fig2a());
  CHECK(g.n_points == 4096);
  const double peak = 1.0;
  CHECK(std::abs(fig2a().eval(g.x_min).psi) < 1e-12 * peak);
  CHECK(std::abs(fig2a().eval(g.x_max).psi) < 1e-12 * peak);
  const double periods = (g.x_max - pi / 2) / (2 * pi);
  CHECK(periods == doctest::Approx(std::round(periods)).epsilon(1e-12));
  GridFitOptions padded;
  padded.absorber_fraction = 0.1;
  CHECK(fit_grid(fig2a(), padded).length() > g.length());
}

TEST_CASE("sample_potential: interface cell is length weighted") {
  const Grid1D g{0.0, 16.0, 16};
  const PotentialFn step = [](double x) { return x < 4.25 ? 1.0 : 3.0; };
  const auto v = sample_potential(g, step, {4.25});
  CHECK(v[2] == 1.0);
  CHECK(v[5] == 3.0);
  // cell of x = 4 covers [3.5, 4.5]
  CHECK(v[4] == doctest::Approx(0.75 * 1.0 + 0.25 * 3.0));
}

TEST_CASE("stationarity of the semi-infinite state") {
  GridFitOptions go;
  go.absorber_fraction = 0.1;
  PropagationConfig c;
  c.absorber = true;
  const auto r = stationarity_report(fig2a(), fit_grid(fig2a(), go), c);
  CHECK(r.min_overlap >= 0.999);
  CHECK(r.norm_drift < 1e-9);
  CHECK(std::abs(r.beta_fit - (-0.19)) < 1e-3);
  CHECK(r.record.snapshots.empty());
  CHECK(r.record.steps.size() == 501);
}

TEST_CASE("stationarity of the symmetric gap-guide state") {
  const auto s = solve_gap_guide(LatticeParams(0.3, 0.1, 0), 1, -pi / 2, pi / 2).state;
  GridFitOptions go;
  go.absorber_fraction = 0.1;
  PropagationConfig c;
  c.absorber = true;
  const auto r = stationarity_report(s, fit_grid(s, go), c);
  CHECK(r.min_overlap >= 0.999);
  CHECK(r.norm_drift < 1e-9);
  CHECK(r.centroid_drift < r.dx);
  CHECK(std::abs(r.beta_fit - s.beta()) < 1e-3);
}

TEST_CASE("negative control: truncated state without its interface") {
  GridFitOptions go;
  go.absorber_fraction = 0.1;
  const auto g = fit_grid(fig2a(), go);
  PropagationConfig c;
  c.absorber = true;
  const auto lattice = fig2a().regions().back().potential;
  const auto r = stationarity_report(fig2a(), g, c, sample_potential(g, lattice));
  CHECK(r.min_overlap < 0.9);
}

TEST_CASE("dz self-convergence is second order") {
  GridFitOptions go;
  go.n_points = 2048;
  const auto g = fit_grid(fig2a(), go);
  const auto V = sample_potential(g, fig2a());
  const auto f0 = sample_field(g, fig2a().evaluator());
  const auto run = [&](double dz) {
    PropagationConfig c;
    c.dz = dz;
    c.z_max = 2.0;
    c.contamination_tol = 1.0;
    return split_step(g, f0, V, c).final_field;
  };
  const auto ref = run(1e-4);
  const double ratio = relative_distance(run(0.005), ref) / relative_distance(run(0.0025), ref);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("grid convergence of the overlap once resolved") {
  const auto overlap = [&](int n) {
    GridFitOptions go;
    go.n_points = n;
    go.absorber_fraction = 0.1;
    PropagationConfig c;
    c.absorber = true;
    c.z_max = 10.0;
    return stationarity_report(fig2a(), fit_grid(fig2a(), go), c).min_overlap;
  };
  CHECK(std::abs(overlap(8192) - overlap(16384)) < 1e-8);
}

TEST_CASE("snapshots and observables") {
  const Grid1D g{-60.0, 60.0, 512};
  PropagationConfig c;
  c.z_max = 1.0;
  c.output_stride = 10;
  c.snapshot_stride = 100;
  const auto rec = split_step(g, gaussian(g, 2.0, 3.0), std::vector<double>(g.n_points, 0.0), c);
  CHECK(rec.snapshots.size() == 3);
  CHECK(rec.steps.front().z == 0.0);
  CHECK(rec.steps.back().z == doctest::Approx(1.0));
  CHECK(rec.steps.front().centroid == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(rec.steps.front().peak_x - 3.0) < 1e-3);
  CHECK(rec.steps.back().centroid == doctest::Approx(3.0).epsilon(1e-9));
}
