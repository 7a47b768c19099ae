#pragma once

// Bichromatic superlattice V(x) = -n1' cos(2x) + n2' cos(x + theta) restricted to
// the exactly solvable family
//
//   n1' = 2 eta^2,  n2' = 2 eta sqrt((N+1)^2 + Delta^2),  theta = atan(Delta / (N+1)),
//
// together with the mapping to waveguide-array units.

#include <cmath>
#include <numbers>

namespace surfstate {

/// Waveguide-array description in physical units. Lengths share one unit
/// (meters in the CLI); the index amplitudes are dimensionless.
struct PhysicalParams {
  double wavelength = 0.0;      // lambda
  double substrate_index = 0.0; // n_s
  double half_period = 0.0;     // Lambda; the potential period is 2 Lambda
  double amp1 = 0.0;            // n1
  double amp2 = 0.0;            // n2
  double phase = 0.0;           // theta [rad]

  /// Throws std::invalid_argument when lengths or n_s are not positive or an
  /// amplitude is negative.
  void validate() const;
};

/// One member (eta, Delta, N) of the exact family. The derived potential
/// parameters are computed, never stored, so an instance can not violate the
/// family relation.
///
/// eta may be zero (free limit) or negative: the lattice-pair geometry places
/// V(-eta, -Delta, N, x) on one side of the interface.
class LatticeParams {
 public:
  LatticeParams() = default;
  /// Throws std::invalid_argument for a negative order or non-finite input.
  LatticeParams(double eta, double delta, int order);

  double eta() const noexcept { return eta_; }
  double delta() const noexcept { return delta_; }
  int order() const noexcept { return order_; }

  double n1p() const noexcept { return 2.0 * eta_ * eta_; }
  double n2p() const noexcept {
    const double m = order_ + 1.0;
    return 2.0 * eta_ * std::sqrt(m * m + delta_ * delta_);
  }
  double theta() const noexcept { return std::atan(delta_ / (order_ + 1.0)); }

  /// Same lattice with eta and Delta negated (left side of the lattice pair).
  LatticeParams negated() const { return {-eta_, -delta_, order_}; }
  /// Same lattice with Delta negated, V(eta, -Delta, N, x) = V(eta, Delta, N, -x).
  LatticeParams mirrored() const { return {eta_, -delta_, order_}; }

  friend bool operator==(const LatticeParams&, const LatticeParams&) = default;

 private:
  double eta_ = 0.0;
  double delta_ = 0.0;
  int order_ = 0;
};

/// Dimensionless coordinates x = pi X / Lambda and z = pi lambda Z / (4 Lambda^2 n_s).
struct ScaledCoords {
  double x = 0.0;
  double z = 0.0;
};

ScaledCoords to_scaled(double X, double Z, const PhysicalParams& phys);

/// V(eta, Delta, N, x).
double potential(const LatticeParams& params, double x);

/// Amplitudes in physical units: n_i = n_i' lambda^2 / (8 Lambda^2 n_s).
PhysicalParams to_physical(const LatticeParams& params, double wavelength,
                           double substrate_index, double half_period);

struct FamilyOptions {
  int max_order = 16;
  double rel_tol = 1e-9;
};

/// Recovers (eta, Delta, N) from physical parameters by scanning N = 0..max_order
/// for n2' cos(theta) = sqrt(2 n1') (N + 1). Throws NotInExactFamily carrying the
/// smallest relative residual when no order matches.
LatticeParams from_physical(const PhysicalParams& phys, const FamilyOptions& opts = {});

}  // namespace surfstate
