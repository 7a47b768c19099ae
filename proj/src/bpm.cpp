#include "surfstate/bpm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "surfstate/errors.hpp"

namespace surfstate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plan pair bound to one buffer.
class FftPair {
 public:
  explicit FftPair(int n) : n_(n), buf_(fftw_alloc_complex(n)) {
    if (!buf_) throw std::bad_alloc();
    fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }
  int size() const { return n_; }

 private:
  int n_;
  fftw_complex* buf_;
  fftw_plan fwd_{}, bwd_{};
};

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

Observables observe(const Grid1D& grid, const std::complex<double>* phi, const Field& phi0,
                    double norm0, double z, double prev_phase) {
  const int n = grid.n_points;
  const double dx = grid.dx();
  double sum2 = 0.0, moment = 0.0;
  std::complex<double> inner{};
  int imax = 0;
  double vmax = -1.0;
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(phi[i]);
    sum2 += p;
    moment += p * grid.x(i);
    inner += std::conj(phi0[i]) * phi[i];
    if (p > vmax) {
      vmax = p;
      imax = i;
    }
  }
  Observables o;
  o.z = z;
  o.norm = std::sqrt(sum2 * dx);
  inner *= dx;
  o.overlap = std::abs(inner) / (norm0 * o.norm);
  o.phase = prev_phase + wrap_angle(std::arg(inner) - prev_phase);
  o.centroid = moment / sum2;
  // Parabola through the three samples around the maximum of |phi|^2.
  const double ym = std::norm(phi[(imax + n - 1) % n]), y0 = vmax, yp = std::norm(phi[(imax + 1) % n]);
  const double den = ym - 2.0 * y0 + yp;
  const double shift = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
  o.peak_x = grid.x(imax) + std::clamp(shift, -0.5, 0.5) * dx;
  return o;
}

double edge_ratio(const std::complex<double>* phi, int n) {
  constexpr int edge = 8;
  double peak = 0.0, at_edge = 0.0;
  for (int i = 0; i < n; ++i) peak = std::max(peak, std::abs(phi[i]));
  for (int i = 0; i < edge; ++i)
    at_edge = std::max({at_edge, std::abs(phi[i]), std::abs(phi[n - 1 - i])});
  return peak > 0.0 ? at_edge / peak : 0.0;
}

}  // namespace

std::vector<double> Grid1D::points() const {
  std::vector<double> xs(n_points);
  for (int i = 0; i < n_points; ++i) xs[i] = x(i);
  return xs;
}

void Grid1D::validate() const {
  if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
  if (!is_power_of_two(n_points) || n_points < 16)
    throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                std::to_string(n_points));
}

Grid1D fit_grid(const PiecewiseState& state, const GridFitOptions& opts) {
  const auto ifaces = state.interfaces();
  const auto cell_max = [&](double a, double b) {
    double m = 0.0;
    for (double x : linspace(a, b, 129)) m = std::max(m, std::abs(state.eval(x).psi));
    return m;
  };
  double lo = ifaces.front() - kTwoPi;
  while (cell_max(lo, lo + kTwoPi) >= opts.tail_tol) {
    lo -= kTwoPi;
    if (ifaces.front() - lo > opts.max_half_width)
      throw BoundaryContamination(cell_max(lo, lo + kTwoPi), 0.0);
  }
  double hi = ifaces.back() + kTwoPi;
  while (cell_max(hi - kTwoPi, hi) >= opts.tail_tol) {
    hi += kTwoPi;
    if (hi - ifaces.back() > opts.max_half_width)
      throw BoundaryContamination(cell_max(hi - kTwoPi, hi), 0.0);
  }
  if (opts.absorber_fraction > 0.0) {
    if (opts.absorber_fraction >= 0.5) throw std::invalid_argument("absorber fraction must be < 1/2");
    const double total = (hi - lo) / (1.0 - 2.0 * opts.absorber_fraction);
    const double pad = kTwoPi * std::ceil(opts.absorber_fraction * total / kTwoPi);
    lo -= pad;
    hi += pad;
  }
  Grid1D g{lo, hi, opts.n_points};
  g.validate();
  return g;
}

std::vector<double> sample_potential(const Grid1D& grid, const PotentialFn& V,
                                     const std::vector<double>& interfaces) {
  grid.validate();
  const double dx = grid.dx();
  std::vector<double> out(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double a = x - 0.5 * dx, b = x + 0.5 * dx;
    const auto hit = std::find_if(interfaces.begin(), interfaces.end(),
                                  [&](double s) { return s > a && s < b; });
    if (hit == interfaces.end()) {
      out[i] = V(x);
    } else {
      const double f = (*hit - a) / dx;
      out[i] = f * V(0.5 * (a + *hit)) + (1.0 - f) * V(0.5 * (*hit + b));
    }
  }
  return out;
}

std::vector<double> sample_potential(const Grid1D& grid, const PiecewiseState& state) {
  return sample_potential(grid, [&state](double x) { return state.potential(x); },
                          state.interfaces());
}

Field sample_field(const Grid1D& grid, const Evaluator& eval) {
  grid.validate();
  Field f(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) f[i] = eval(grid.x(i)).psi;
  return f;
}

double EvolutionRecord::beta_fit() const {
  if (steps.size() < 2) throw std::logic_error("beta fit needs at least two recorded steps");
  const double z_half = 0.5 * steps.back().z;
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& o : steps) {
    if (o.z < z_half) continue;
    n += 1;
    sx += o.z;
    sy += o.phase;
    sxx += o.z * o.z;
    sxy += o.z * o.phase;
  }
  if (n < 2) throw std::logic_error("beta fit needs at least two points in the second half");
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double EvolutionRecord::min_overlap() const {
  double m = 1.0;
  for (const auto& o : steps) m = std::min(m, o.overlap);
  return m;
}

double EvolutionRecord::norm_drift() const {
  double m = 0.0;
  for (const auto& o : steps) m = std::max(m, std::abs(o.norm / steps.front().norm - 1.0));
  return m;
}

EvolutionRecord split_step(const Grid1D& grid, const Field& initial,
                           const std::vector<double>& potential, const PropagationConfig& config) {
  grid.validate();
  const int n = grid.n_points;
  if (static_cast<int>(initial.size()) != n || static_cast<int>(potential.size()) != n)
    throw std::invalid_argument("field and potential must match the grid size");
  if (!(config.dz > 0.0) || !(config.z_max > 0.0) || config.output_stride < 1)
    throw std::invalid_argument("propagation needs dz > 0, z_max > 0 and output_stride >= 1");
  double vmax = 0.0;
  for (double v : potential) vmax = std::max(vmax, std::abs(v));
  if (config.dz * vmax >= config.accuracy_guard)
    throw std::invalid_argument("dz * max|V| = " + std::to_string(config.dz * vmax) +
                                " violates the accuracy guard");

  const double dz = config.dz;
  const long nsteps = std::lround(config.z_max / dz);
  const double L = grid.length();

  std::vector<std::complex<double>> half_kinetic(n), full_kinetic(n), potential_step(n);
  for (int j = 0; j < n; ++j) {
    const int m = j <= n / 2 ? j : j - n;
    const double k = kTwoPi * m / L;
    half_kinetic[j] = std::polar(1.0 / n, -0.5 * k * k * dz);  // includes the 1/n of the inverse FFT
    full_kinetic[j] = std::polar(1.0 / n, -k * k * dz);
  }
  std::vector<double> mask(n, 1.0);
  if (config.absorber) {
    const int w = std::max(1, static_cast<int>(config.absorber_fraction * n));
    for (int i = 0; i < w; ++i) {
      const double s = 1.0 - static_cast<double>(i) / w;  // 1 at the boundary
      const double m = std::pow(std::cos(0.5 * std::numbers::pi * s),
                                0.125 * config.dz / config.absorber_dz_ref);
      mask[i] = m;
      mask[n - 1 - i] = m;
    }
  }
  for (int i = 0; i < n; ++i) potential_step[i] = mask[i] * std::polar(1.0, -potential[i] * dz);

  EvolutionRecord rec;
  rec.grid = grid;
  rec.config = config;

  FftPair fft(n);
  auto* phi = fft.data();
  std::copy(initial.begin(), initial.end(), phi);
  double norm0 = 0.0;
  for (const auto& v : initial) norm0 += std::norm(v);
  norm0 = std::sqrt(norm0 * grid.dx());
  if (!(norm0 > 0.0)) throw std::invalid_argument("initial field is zero");

  const auto record = [&](double z) {
    const double prev = rec.steps.empty() ? 0.0 : rec.steps.back().phase;
    rec.steps.push_back(observe(grid, phi, initial, norm0, z, prev));
    const double e = edge_ratio(phi, n);
    rec.max_edge_ratio = std::max(rec.max_edge_ratio, e);
    if (!config.absorber && e > config.contamination_tol) throw BoundaryContamination(e, z);
  };
  const auto snapshot = [&](long step) {
    if (config.snapshot_stride > 0 && step % config.snapshot_stride == 0)
      rec.snapshots.push_back({step * dz, Field(phi, phi + n)});
  };
  const auto kinetic = [&](const std::vector<std::complex<double>>& mult) {
    fft.forward();
    for (int j = 0; j < n; ++j) phi[j] *= mult[j];
    fft.backward();
  };

  record(0.0);
  snapshot(0);
  // Adjacent half kinetic steps are fused except where the field is observed.
  bool pending_half = true;
  for (long s = 1; s <= nsteps; ++s) {
    if (pending_half) kinetic(half_kinetic);
    for (int i = 0; i < n; ++i) phi[i] *= potential_step[i];
    const bool observe_now = s == nsteps || s % config.output_stride == 0 ||
                             (config.snapshot_stride > 0 && s % config.snapshot_stride == 0);
    if (observe_now) {
      kinetic(half_kinetic);
      if (s % config.output_stride == 0 || s == nsteps) record(s * dz);
      snapshot(s);
      pending_half = true;
    } else {
      fft.forward();
      for (int j = 0; j < n; ++j) phi[j] *= full_kinetic[j];
      fft.backward();
      pending_half = false;
    }
  }
  rec.final_field.assign(phi, phi + n);
  return rec;
}

StationarityReport stationarity_report(const PiecewiseState& state, const Grid1D& grid,
                                       const PropagationConfig& config,
                                       std::optional<std::vector<double>> potential) {
  const auto V = potential ? std::move(*potential) : sample_potential(grid, state);
  const Field initial = sample_field(grid, [&state](double x) { return state.eval(x); });
  StationarityReport r;
  r.record = split_step(grid, initial, V, config);
  r.beta = state.beta();
  r.beta_fit = r.record.beta_fit();
  r.min_overlap = r.record.min_overlap();
  r.final_overlap = r.record.steps.back().overlap;
  r.norm_drift = r.record.norm_drift();
  r.dx = grid.dx();
  const auto& first = r.record.steps.front();
  for (const auto& o : r.record.steps) {
    r.peak_drift = std::max(r.peak_drift, std::abs(o.peak_x - first.peak_x));
    r.centroid_drift = std::max(r.centroid_drift, std::abs(o.centroid - first.centroid));
  }
  return r;
}

double relative_distance(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fields differ in size");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace surfstate
