#pragma once

// Linearly independent partner psi~ of an in-gap state psi. psi~ is fixed only up
// to adding multiples of psi; two normalizations are supported:
//
//  * IntegralFromMinusInfinity: psi~(x) = psi(x) * int_{-inf}^{x} psi^{-2} dt,
//    evaluated by Gauss-Kronrod quadrature (Delta > 0, psi free of nodes).
//  * WronskianAnchored(x_ref): psi~(x_ref) = 0, psi~'(x_ref) = 1/psi(x_ref),
//    integrated as an ODE. Equals psi * int_{x_ref}^{x} psi^{-2} where psi has no
//    nodes, and stays valid across nodes.
//
// Both give the Wronskian psi psi~' - psi' psi~ = 1.

#include <optional>
#include <vector>

#include "surfstate/ingap.hpp"

namespace surfstate {

enum class Convention { IntegralFromMinusInfinity, WronskianAnchored };

const char* to_string(Convention c);

class SecondSolution {
 public:
  /// Quadrature route. Values are tabulated on [lo, hi]; evaluation outside the
  /// window is allowed but slower. Throws NodeOnPath if psi has nodes and
  /// std::invalid_argument if Delta <= 0.
  static SecondSolution integral(const InGapState& base, double lo, double hi);

  /// ODE route anchored at x_ref.
  static SecondSolution anchored(const InGapState& base, double x_ref, double lo, double hi);

  /// IntegralFromMinusInfinity for N = 0, WronskianAnchored(lo) otherwise.
  static SecondSolution make_default(const InGapState& base, double lo, double hi);

  StateSample eval(double x) const;
  Evaluator evaluator() const;

  const InGapState& base() const noexcept { return base_; }
  Convention convention() const noexcept { return convention_; }
  std::optional<double> x_ref() const noexcept { return x_ref_; }
  double wronskian() const noexcept { return 1.0; }
  /// Lower limit used in place of -infinity, and the bound on the discarded tail
  /// relative to the integral at the window start (integral convention only).
  double truncation_point() const noexcept { return x_min_; }
  double tail_bound() const noexcept { return tail_bound_; }

 private:
  explicit SecondSolution(const InGapState& base) : base_(base) {}

  double integral_to(double x) const;
  double improper_integral(double x, double* x_min, double* tail_rel) const;
  StateSample ode_to(double x) const;

  InGapState base_;
  Convention convention_ = Convention::IntegralFromMinusInfinity;
  std::optional<double> x_ref_;
  double lo_ = 0.0, hi_ = 0.0, h_ = 0.0;
  std::vector<double> knots_;
  // Integral convention: cumulative integral at knots.
  std::vector<double> cumulative_;
  // Anchored convention: (psi~, psi~') at knots.
  std::vector<StateSample> ode_states_;
  double x_min_ = 0.0;
  double tail_bound_ = 0.0;
  double periodic_sup_ = 0.0;
};

}  // namespace surfstate
