#include "surfstate/second_solution.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "surfstate/errors.hpp"

namespace surfstate {

namespace {

constexpr double kPanel = std::numbers::pi / 4;
constexpr double kTailRelTol = 1e-12;

using OdeState = std::array<double, 2>;

template <class F>
double integrate_span(F&& f, double a, double b) {
  if (a == b) return 0.0;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanel)));
  const double w = (hi - lo) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double p = lo + i * w;
    const double q = i + 1 == panels ? hi : p + w;
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, p, q, 8, 1e-14);
  }
  return sign * sum;
}

struct Schrodinger {
  const InGapState* base;
  void operator()(const OdeState& y, OdeState& dydx, double x) const {
    dydx[0] = y[1];
    dydx[1] = (potential(base->params(), x) - base->beta()) * y[0];
  }
};

OdeState integrate_ode(const InGapState& base, OdeState y, double from, double to) {
  namespace odeint = boost::numeric::odeint;
  if (from == to) return y;
  auto stepper = odeint::make_controlled(1e-300, 1e-15, odeint::runge_kutta_fehlberg78<OdeState>());
  const double dx = to > from ? 0.05 : -0.05;
  odeint::integrate_adaptive(stepper, Schrodinger{&base}, y, from, to, dx);
  return y;
}

// Restores psi y' - psi' y = 1 by a step along (-psi', psi), which removes the
// slow drift of the Wronskian over long integration spans.
OdeState project(const InGapState& base, double x, OdeState y) {
  const auto p = base.eval(x);
  const double w = p.psi * y[1] - p.dpsi * y[0];
  const double n2 = p.psi * p.psi + p.dpsi * p.dpsi;
  y[0] -= (1.0 - w) * p.dpsi / n2;
  y[1] += (1.0 - w) * p.psi / n2;
  return y;
}

void make_knots(double lo, double hi, double& h, std::vector<double>& knots) {
  if (!(hi > lo)) throw std::invalid_argument("second-solution window requires hi > lo");
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / (std::numbers::pi / 8))));
  h = (hi - lo) / n;
  knots.resize(n + 1);
  for (int i = 0; i <= n; ++i) knots[i] = lo + i * h;
  knots[n] = hi;
}

}  // namespace

const char* to_string(Convention c) {
  switch (c) {
    case Convention::IntegralFromMinusInfinity:
      return "integral_from_minus_infinity";
    case Convention::WronskianAnchored:
      return "wronskian_anchored";
  }
  return "?";
}

SecondSolution SecondSolution::integral(const InGapState& base, double lo, double hi) {
  const double delta = base.params().delta();
  if (!(delta > 0.0))
    throw std::invalid_argument("the integral convention needs Delta > 0 for convergence at -infinity");

  SecondSolution s(base);
  s.convention_ = Convention::IntegralFromMinusInfinity;
  s.lo_ = lo;
  s.hi_ = hi;
  make_knots(lo, hi, s.h_, s.knots_);

  // psi^{-2} = exp(Delta x) P(x) with P 2pi-periodic; bound P over one period.
  constexpr int samples = 2048;
  double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
  double prev_sign = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double x = 2.0 * std::numbers::pi * j / samples;
    const double u = base.eval(x).psi * std::exp(0.5 * delta * x);
    const double sign = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
    if (sign == 0.0 || (prev_sign != 0.0 && sign != prev_sign))
      throw NodeOnPath("psi has nodes; use the Wronskian-anchored convention");
    prev_sign = sign;
    pmax = std::max(pmax, std::abs(u));
    pmin = std::min(pmin, std::abs(u));
  }
  if (pmin < 1e-6 * pmax) throw NodeOnPath("psi nearly vanishes on the integration path");
  s.periodic_sup_ = 1.05 / (pmin * pmin);

  s.cumulative_.resize(s.knots_.size());
  s.cumulative_[0] = s.improper_integral(lo, &s.x_min_, &s.tail_bound_);
  const auto f = [&base](double t) {
    const double p = base.eval(t).psi;
    return 1.0 / (p * p);
  };
  for (std::size_t i = 1; i < s.knots_.size(); ++i)
    s.cumulative_[i] = s.cumulative_[i - 1] + integrate_span(f, s.knots_[i - 1], s.knots_[i]);
  return s;
}

double SecondSolution::integral_to(double x) const {
  const auto f = [this](double t) {
    const double p = base_.eval(t).psi;
    return 1.0 / (p * p);
  };
  if (x < lo_) return improper_integral(x, nullptr, nullptr);
  const std::size_t last = knots_.size() - 1;
  const std::size_t k =
      x >= hi_ ? last : std::min(last, static_cast<std::size_t>((x - lo_) / h_));
  return cumulative_[k] + integrate_span(f, knots_[k], x);
}

double SecondSolution::improper_integral(double x, double* x_min, double* tail_rel) const {
  const auto f = [this](double t) {
    const double p = base_.eval(t).psi;
    return 1.0 / (p * p);
  };
  // Accumulate whole panels towards -infinity until the analytic tail bound
  // sup(P) exp(Delta a) / Delta drops below kTailRelTol of the sum.
  const double delta = base_.params().delta();
  double acc = 0.0;
  double a = x;
  for (int panels = 0; panels < 200000; ++panels) {
    acc += integrate_span(f, a - kPanel, a);
    a -= kPanel;
    const double tail = periodic_sup_ * std::exp(delta * a) / delta;
    if (tail < kTailRelTol * acc) {
      if (x_min) *x_min = a;
      if (tail_rel) *tail_rel = tail / acc;
      return acc;
    }
  }
  throw std::runtime_error("improper integral did not converge");
}

SecondSolution SecondSolution::anchored(const InGapState& base, double x_ref, double lo,
                                        double hi) {
  SecondSolution s(base);
  s.convention_ = Convention::WronskianAnchored;
  s.x_ref_ = x_ref;
  s.lo_ = lo;
  s.hi_ = hi;
  make_knots(lo, hi, s.h_, s.knots_);

  const auto at_ref = base.eval(x_ref);
  const double scale = local_scale([&base](double t) { return base.eval(t); }, x_ref);
  if (!(std::abs(at_ref.psi) >= 1e-13 * scale)) throw NodeAtX(x_ref, at_ref.psi);

  const std::size_t n = s.knots_.size();
  const double pos = std::clamp((x_ref - lo) / s.h_, 0.0, static_cast<double>(n - 1));
  const auto j0 = static_cast<std::size_t>(std::lround(pos));
  s.ode_states_.resize(n);
  OdeState y{0.0, 1.0 / at_ref.psi};
  y = project(base, s.knots_[j0], integrate_ode(base, y, x_ref, s.knots_[j0]));
  s.ode_states_[j0] = {s.knots_[j0], y[0], y[1]};
  OdeState fwd = y;
  for (std::size_t j = j0 + 1; j < n; ++j) {
    fwd = project(base, s.knots_[j], integrate_ode(base, fwd, s.knots_[j - 1], s.knots_[j]));
    s.ode_states_[j] = {s.knots_[j], fwd[0], fwd[1]};
  }
  OdeState bwd = y;
  for (std::size_t j = j0; j-- > 0;) {
    bwd = project(base, s.knots_[j], integrate_ode(base, bwd, s.knots_[j + 1], s.knots_[j]));
    s.ode_states_[j] = {s.knots_[j], bwd[0], bwd[1]};
  }
  return s;
}

StateSample SecondSolution::ode_to(double x) const {
  const std::size_t last = knots_.size() - 1;
  const double pos = std::clamp((x - lo_) / h_, 0.0, static_cast<double>(last));
  const auto k = static_cast<std::size_t>(std::lround(pos));
  const auto& start = ode_states_[k];
  const OdeState y = integrate_ode(base_, {start.psi, start.dpsi}, start.x, x);
  return {x, y[0], y[1]};
}

SecondSolution SecondSolution::make_default(const InGapState& base, double lo, double hi) {
  if (base.params().order() == 0 && base.params().delta() > 0.0) return integral(base, lo, hi);
  return anchored(base, lo, lo, hi);
}

StateSample SecondSolution::eval(double x) const {
  if (convention_ == Convention::WronskianAnchored) return ode_to(x);
  const auto s = base_.eval(x);
  const double I = integral_to(x);
  return {x, s.psi * I, s.dpsi * I + 1.0 / s.psi};
}

Evaluator SecondSolution::evaluator() const {
  return [self = *this](double x) { return self.eval(x); };
}

}  // namespace surfstate
