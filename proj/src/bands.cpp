#include "surfstate/bands.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "surfstate/errors.hpp"
#include "surfstate/ingap.hpp"

namespace surfstate {

std::vector<double> bloch_bands(const LatticeParams& params, double k, int count,
                                int truncation) {
  const int M = truncation;
  const int dim = 2 * M + 1;
  if (count < 1) throw std::invalid_argument("band count must be positive");
  if (count > 2 * M || 4 * count > 3 * dim)
    throw TruncationTooSmall("requested " + std::to_string(count) + " bands from " +
                             std::to_string(dim) + " plane waves");

  const std::complex<double> v1 =
      0.5 * params.n2p() * std::polar(1.0, params.theta());  // V^(+1)
  const double v2 = -0.5 * params.n1p();                     // V^(+-2)

  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double q = k + (i - M);
    H(i, i) = q * q;
    if (i + 1 < dim) {
      H(i + 1, i) = v1;  // row m = col n + 1
      H(i, i + 1) = std::conj(v1);
    }
    if (i + 2 < dim) {
      H(i + 2, i) = v2;
      H(i, i + 2) = v2;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hill matrix diagonalization failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + count};
}

double BandTable::band_min(int j) const {
  return *std::min_element(bands.at(j).begin(), bands.at(j).end());
}

double BandTable::band_max(int j) const {
  return *std::max_element(bands.at(j).begin(), bands.at(j).end());
}

BandTable band_table(const LatticeParams& params, int count, const BandOptions& opts) {
  BandTable t;
  t.params = params;
  t.truncation = opts.truncation;
  t.k_grid = linspace(-0.5, 0.5, opts.k_points);
  // The extrema of the lowest bands sit at k = 0 or k = +-1/2 for the lattices
  // studied here; make sure those points are on the grid.
  for (double edge : {-0.5, 0.0, 0.5})
    if (std::find(t.k_grid.begin(), t.k_grid.end(), edge) == t.k_grid.end()) t.k_grid.push_back(edge);
  std::sort(t.k_grid.begin(), t.k_grid.end());

  // Real V makes the spectrum even in k, so each +-k pair is diagonalized once.
  const std::size_t nk = t.k_grid.size();
  t.bands.assign(count, std::vector<double>(nk));
  for (std::size_t ik = 0; ik < nk; ++ik) {
    const std::size_t mirror = nk - 1 - ik;
    if (mirror < ik && std::abs(t.k_grid[ik] + t.k_grid[mirror]) < 1e-14) {
      for (int j = 0; j < count; ++j) t.bands[j][ik] = t.bands[j][mirror];
      continue;
    }
    const auto ev = bloch_bands(params, t.k_grid[ik], count, opts.truncation);
    for (int j = 0; j < count; ++j) t.bands[j][ik] = ev[j];
  }
  return t;
}

const char* to_string(GapKind kind) {
  switch (kind) {
    case GapKind::SemiInfiniteGap:
      return "semi_infinite_gap";
    case GapKind::FiniteGap:
      return "finite_gap";
    case GapKind::InBand:
      return "in_band";
    case GapKind::Ambiguous:
      return "ambiguous";
  }
  return "?";
}

GapVerdict classify(const BandTable& table, double beta, double edge_tol) {
  GapVerdict v;
  v.beta = beta;
  const int count = table.band_count();
  for (int j = 0; j < count; ++j) {
    for (double edge : {table.band_min(j), table.band_max(j)}) {
      if (edge <= beta) v.margin_below = std::min(v.margin_below, beta - edge);
      if (edge >= beta) v.margin_above = std::min(v.margin_above, edge - beta);
    }
  }
  if (v.edge_distance() < edge_tol) {
    v.kind = GapKind::Ambiguous;
    return v;
  }
  if (beta < table.band_min(0)) {
    v.kind = GapKind::SemiInfiniteGap;
    return v;
  }
  for (int j = 0; j < count; ++j) {
    if (beta <= table.band_max(j)) {
      v.kind = GapKind::InBand;
      v.index = j + 1;
      return v;
    }
    if (j + 1 < count && beta < table.band_min(j + 1)) {
      v.kind = GapKind::FiniteGap;
      v.index = j + 1;
      return v;
    }
  }
  throw std::logic_error("beta above the computed bands");
}

GapVerdict classify(const LatticeParams& params, double beta, const BandOptions& opts,
                    double edge_tol) {
  const int dim = 2 * opts.truncation + 1;
  const int max_count = (3 * dim) / 4;
  for (int count = 4;; count *= 2) {
    count = std::min(count, max_count);
    const auto table = band_table(params, count, opts);
    if (beta < table.band_min(count - 1)) return classify(table, beta, edge_tol);
    if (count == max_count)
      throw TruncationTooSmall("beta lies above the reliable part of the spectrum");
  }
}

std::vector<CirclePoint> gap_circle_scan(double eta, double delta_max, int steps) {
  if (steps < 2) throw std::invalid_argument("gap circle scan needs at least two steps");
  std::vector<CirclePoint> out;
  out.reserve(steps);
  for (double delta : linspace(-delta_max, delta_max, steps)) {
    CirclePoint p;
    p.delta = delta;
    try {
      const auto roots = propagation_constants(LatticeParams(eta, delta, 1));
      p.exists = true;
      p.beta1 = roots.front().beta;
      p.beta2 = roots.back().beta;
    } catch (const NoRealRoot&) {
      p.exists = false;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace surfstate
