#include "surfstate/lattice.hpp"

#include <limits>
#include <stdexcept>

#include "surfstate/errors.hpp"

namespace surfstate {

void PhysicalParams::validate() const {
  if (!(wavelength > 0.0) || !(half_period > 0.0) || !(substrate_index > 0.0))
    throw std::invalid_argument("wavelength, half period and substrate index must be positive");
  if (!(amp1 >= 0.0) || !(amp2 >= 0.0))
    throw std::invalid_argument("index amplitudes must be non-negative");
  if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
}

LatticeParams::LatticeParams(double eta, double delta, int order)
    : eta_(eta), delta_(delta), order_(order) {
  if (order < 0) throw std::invalid_argument("order N must be >= 0");
  if (!std::isfinite(eta) || !std::isfinite(delta))
    throw std::invalid_argument("eta and Delta must be finite");
}

ScaledCoords to_scaled(double X, double Z, const PhysicalParams& phys) {
  phys.validate();
  const double L = phys.half_period;
  return {std::numbers::pi * X / L,
          std::numbers::pi * phys.wavelength * Z / (4.0 * L * L * phys.substrate_index)};
}

double potential(const LatticeParams& params, double x) {
  return -params.n1p() * std::cos(2.0 * x) + params.n2p() * std::cos(x + params.theta());
}

namespace {

// lambda^2 / (8 Lambda^2 n_s)
double index_scale(double wavelength, double substrate_index, double half_period) {
  return wavelength * wavelength / (8.0 * half_period * half_period * substrate_index);
}

}  // namespace

PhysicalParams to_physical(const LatticeParams& params, double wavelength,
                           double substrate_index, double half_period) {
  PhysicalParams phys;
  phys.wavelength = wavelength;
  phys.substrate_index = substrate_index;
  phys.half_period = half_period;
  if (!(wavelength > 0.0) || !(half_period > 0.0) || !(substrate_index > 0.0))
    throw std::invalid_argument("wavelength, half period and substrate index must be positive");
  if (params.eta() < 0.0)
    throw std::invalid_argument("negative eta has no physical amplitude representation");
  const double s = index_scale(wavelength, substrate_index, half_period);
  phys.amp1 = params.n1p() * s;
  phys.amp2 = params.n2p() * s;
  phys.phase = params.theta();
  return phys;
}

LatticeParams from_physical(const PhysicalParams& phys, const FamilyOptions& opts) {
  phys.validate();
  const double s = index_scale(phys.wavelength, phys.substrate_index, phys.half_period);
  const double n1p = phys.amp1 / s;
  const double n2p = phys.amp2 / s;
  if (!(n1p > 0.0)) throw NotInExactFamily(std::numeric_limits<double>::infinity());

  const double root = std::sqrt(2.0 * n1p);  // = 2 eta
  const double eta = 0.5 * root;
  const double cos_part = n2p * std::cos(phys.phase);
  const double sin_part = n2p * std::sin(phys.phase);

  double best = std::numeric_limits<double>::infinity();
  for (int N = 0; N <= opts.max_order; ++N) {
    const double target = root * (N + 1);
    const double residual = std::abs(cos_part - target) / target;
    best = std::min(best, residual);
    if (residual <= opts.rel_tol) return LatticeParams(eta, sin_part / root, N);
  }
  throw NotInExactFamily(best);
}

}  // namespace surfstate
