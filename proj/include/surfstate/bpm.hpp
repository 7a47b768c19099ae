#pragma once

// Split-step Fourier integration of  i phi_z = -phi_xx + V(x) phi  on a periodic grid.
// A stationary state phi = psi exp(-i beta z) keeps |<psi|phi>| fixed and its
// overlap phase falls off with slope -beta.

#include <complex>
#include <optional>
#include <vector>

#include "surfstate/ingap.hpp"
#include "surfstate/interface.hpp"

namespace surfstate {

using Field = std::vector<std::complex<double>>;

/// Periodic grid x_i = x_min + i dx, i = 0..n-1, dx = (x_max - x_min)/n.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 4096;

  double length() const { return x_max - x_min; }
  double dx() const { return length() / n_points; }
  double x(int i) const { return x_min + i * dx(); }
  std::vector<double> points() const;
  /// Throws std::invalid_argument unless x_max > x_min and n_points is a power of two >= 16.
  void validate() const;
};

struct GridFitOptions {
  int n_points = 4096;
  double tail_tol = 1e-12;  // |psi| at the domain edges relative to the peak
  double max_half_width = 400.0 * 3.14159265358979323846;
  /// Extra whole periods on each side so that an absorber covering this
  /// fraction of the final domain lies entirely in the converged tail.
  double absorber_fraction = 0.0;
};

/// Smallest domain [x_min, x_max] around the interfaces, extended in whole
/// periods of 2 pi, on which the state falls below tail_tol of its peak.
Grid1D fit_grid(const PiecewiseState& state, const GridFitOptions& opts = {});

/// V sampled on the grid. Cells that contain an interface get the
/// length-weighted mean of the two sides.
std::vector<double> sample_potential(const Grid1D& grid, const PotentialFn& V,
                                     const std::vector<double>& interfaces = {});
std::vector<double> sample_potential(const Grid1D& grid, const PiecewiseState& state);

Field sample_field(const Grid1D& grid, const Evaluator& eval);

struct PropagationConfig {
  double dz = 0.005;
  double z_max = 50.0;
  int output_stride = 20;   // record observables every this many steps
  int snapshot_stride = 0;  // field snapshots every this many steps; 0 = none
  /// Damping layer over absorber_fraction of each edge: the field is multiplied
  /// by cos(pi s / 2)^(1/8) per z-interval absorber_dz_ref, s = 1 at the edge.
  bool absorber = false;
  double absorber_fraction = 0.1;
  double absorber_dz_ref = 0.005;
  double contamination_tol = 1e-6;  // edge amplitude / peak
  double accuracy_guard = 0.1;      // required dz * max|V|
};

struct Observables {
  double z = 0.0;
  double norm = 0.0;     // sqrt(sum |phi|^2 dx)
  double overlap = 0.0;  // |<phi0|phi>| / (|phi0| |phi|)
  double phase = 0.0;    // unwrapped arg <phi0|phi>
  double peak_x = 0.0;   // position of max |phi|, parabolic refinement
  double centroid = 0.0; // intensity-weighted mean position
};

struct Snapshot {
  double z = 0.0;
  Field field;
};

struct EvolutionRecord {
  Grid1D grid;
  PropagationConfig config;
  std::vector<Observables> steps;
  std::vector<Snapshot> snapshots;
  Field final_field;
  double max_edge_ratio = 0.0;

  /// -slope of the unwrapped overlap phase over the second half of the run.
  double beta_fit() const;
  double min_overlap() const;
  /// max |norm(z)/norm(0) - 1|
  double norm_drift() const;
};

/// Strang splitting: half kinetic step exp(-i k^2 dz/2), full potential step
/// exp(-i V dz), half kinetic step. Throws BoundaryContamination when the edge
/// amplitude exceeds contamination_tol of the peak (absorber off) and
/// std::invalid_argument when the accuracy guard fails.
EvolutionRecord split_step(const Grid1D& grid, const Field& initial,
                           const std::vector<double>& potential, const PropagationConfig& config);

struct StationarityReport {
  double beta = 0.0;      // the state's propagation constant
  double beta_fit = 0.0;  // from the overlap phase
  double min_overlap = 0.0;
  double final_overlap = 0.0;
  double norm_drift = 0.0;
  double peak_drift = 0.0;      // max |peak_x(z) - peak_x(0)|
  double centroid_drift = 0.0;  // max |centroid(z) - centroid(0)|
  double dx = 0.0;
  EvolutionRecord record;
};

/// Propagates the sampled state in its own piecewise potential, or in
/// `potential` when given (e.g. the interface removed).
StationarityReport stationarity_report(const PiecewiseState& state, const Grid1D& grid,
                                       const PropagationConfig& config,
                                       std::optional<std::vector<double>> potential = std::nullopt);

/// ||a - b|| / ||b|| on the grid.
double relative_distance(const Field& a, const Field& b);

}  // namespace surfstate
