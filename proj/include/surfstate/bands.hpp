#pragma once

#include <limits>
#include <vector>

#include "surfstate/lattice.hpp"

namespace surfstate {

struct BandOptions {
  int truncation = 32;  // plane waves exp(i (k + m) x) with m = -M..M
  int k_points = 201;   // uniform grid over [-1/2, 1/2]
};

/// Lowest `count` eigenvalues of the Hill matrix
///   H[m][n] = (k + m)^2 delta_mn + V^(m - n)
/// with V^(+-2) = -n1'/2 and V^(+-1) = (n2'/2) exp(+-i theta).
/// Throws TruncationTooSmall when count reaches the top quarter of the spectrum.
std::vector<double> bloch_bands(const LatticeParams& params, double k, int count,
                                int truncation = 32);

struct BandTable {
  LatticeParams params;
  std::vector<double> k_grid;
  std::vector<std::vector<double>> bands;  // bands[j][ik], ascending in j
  int truncation = 0;

  int band_count() const { return static_cast<int>(bands.size()); }
  double band_min(int j) const;
  double band_max(int j) const;
};

BandTable band_table(const LatticeParams& params, int count, const BandOptions& opts = {});

enum class GapKind { SemiInfiniteGap, FiniteGap, InBand, Ambiguous };

const char* to_string(GapKind kind);

struct GapVerdict {
  double beta = 0.0;
  GapKind kind = GapKind::Ambiguous;
  /// Gap index g (gap between bands g and g+1) or 1-based band index j; 0 for
  /// the semi-infinite gap.
  int index = 0;
  double margin_below = std::numeric_limits<double>::infinity();  // beta - nearest edge below
  double margin_above = std::numeric_limits<double>::infinity();  // nearest edge above - beta
  double edge_distance() const { return std::min(margin_below, margin_above); }
};

GapVerdict classify(const LatticeParams& params, double beta, const BandOptions& opts = {},
                    double edge_tol = 1e-8);
GapVerdict classify(const BandTable& table, double beta, double edge_tol = 1e-8);

struct CirclePoint {
  double delta = 0.0;
  bool exists = false;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// Traces (Delta, beta_1^1, beta_1^2) for N = 1 over Delta in [-delta_max, delta_max].
/// Points with |Delta| > 4 eta have no real branch and are marked exists = false.
std::vector<CirclePoint> gap_circle_scan(double eta, double delta_max, int steps);

}  // namespace surfstate
