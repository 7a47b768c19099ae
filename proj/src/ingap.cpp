#include "surfstate/ingap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "surfstate/errors.hpp"

namespace surfstate {

namespace {

void require_nonzero_eta(const LatticeParams& params) {
  if (params.eta() == 0.0) throw std::invalid_argument("in-gap states require eta != 0");
}

// c1(n) + beta: the beta-independent part of the middle coefficient.
cplx middle_constant(const LatticeParams& params, int n) {
  const cplx lam = transform_exponent(params);
  const double eta = params.eta();
  return (n + 1.0) * (n + 1.0 + 2.0 * lam) + lam * lam - 2.0 * eta * eta;
}

double max_abs(const std::vector<cplx>& v, std::size_t count) {
  double m = 0.0;
  for (std::size_t i = 0; i < count && i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

cplx transform_exponent(const LatticeParams& params) {
  return {-0.5 * params.order(), -0.5 * params.delta()};
}

RecurrenceTerms recurrence_terms(const LatticeParams& params, double beta, int n) {
  const double eta = params.eta();
  RecurrenceTerms t;
  t.c0 = 2.0 * eta * (params.order() - n);
  t.c1 = middle_constant(params, n) - beta;
  t.c2 = 2.0 * eta * (n + 2.0);
  return t;
}

cplx recurrence_step(const LatticeParams& params, double beta, int n, cplx d_n, cplx d_n1) {
  require_nonzero_eta(params);
  const auto t = recurrence_terms(params, beta, n);
  return -(t.c0 * d_n + t.c1 * d_n1) / t.c2;
}

std::pair<double, double> real_recurrence_step(const LatticeParams& params, double beta, int n,
                                               std::pair<double, double> ab_n,
                                               std::pair<double, double> ab_n1) {
  require_nonzero_eta(params);
  const double eta = params.eta();
  const double N = params.order();
  const double D = params.delta();
  const double c0 = 2.0 * eta * (N - n);
  const double c2 = 2.0 * eta * (n + 2.0);
  const double re = (n + 1.0) * (n + 1.0 - N) + (N * N - D * D) / 4.0 - 2.0 * eta * eta - beta;
  const double im = N * D / 2.0 - (n + 1.0) * D;
  const auto [a_n, b_n] = ab_n;
  const auto [a_n1, b_n1] = ab_n1;
  return {-(c0 * a_n + re * a_n1 - im * b_n1) / c2, -(c0 * b_n + re * b_n1 + im * a_n1) / c2};
}

RecurrenceCoeffs run_recurrence(const LatticeParams& params, double beta) {
  require_nonzero_eta(params);
  const int N = params.order();
  RecurrenceCoeffs rc;
  rc.order = N;
  rc.beta = beta;
  rc.d.assign(N + 3, cplx{});
  rc.d[0] = 1.0;
  cplx prev{};  // d_{-1}
  for (int n = -1; n <= N; ++n) {
    const cplx d_n = n < 0 ? prev : rc.d[n];
    rc.d[n + 2] = recurrence_step(params, beta, n, d_n, rc.d[n + 1]);
  }
  rc.a.resize(rc.d.size());
  rc.b.resize(rc.d.size());
  for (std::size_t i = 0; i < rc.d.size(); ++i) {
    rc.a[i] = rc.d[i].real();
    rc.b[i] = rc.d[i].imag();
  }
  return rc;
}

CharPolynomial char_polynomial(const LatticeParams& params) {
  require_nonzero_eta(params);
  const int N = params.order();
  Polynomial before;                          // d_{n}
  Polynomial current = Polynomial::constant(1.0);  // d_{n+1}
  for (int n = -1; n < N; ++n) {
    const auto t = recurrence_terms(params, 0.0, n);
    // d_{n+2} = -(c0 d_n + (c1|_{beta=0} - beta) d_{n+1}) / c2
    Polynomial next = before * cplx(t.c0) + Polynomial::linear(t.c1, -1.0) * current;
    next *= cplx(-1.0 / t.c2);
    before = std::move(current);
    current = std::move(next);
  }
  CharPolynomial cp;
  cp.a = current.real_part();
  cp.b = current.imag_part();
  cp.d = std::move(current);
  return cp;
}

std::vector<PropagationConstant> propagation_constants(const LatticeParams& params,
                                                       const RootOptions& opts) {
  const auto cp = char_polynomial(params);
  auto roots = polynomial_roots(cp.d);
  std::sort(roots.begin(), roots.end(), [](cplx l, cplx r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });

  // Group coincident roots, then polish each group on the (m-1)-th derivative,
  // where an m-fold root is simple.
  std::vector<PropagationConstant> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = roots[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) <= opts.cluster_tol * std::max(1.0, std::abs(roots[i]))) {
        used[j] = true;
        sum += roots[j];
        ++mult;
      }
    }
    cplx r = sum / static_cast<double>(mult);
    Polynomial target = cp.d;
    for (int k = 1; k < mult; ++k) target = target.derivative();
    for (int it = 0; it < 8; ++it) {
      const auto [f, df] = target.eval_with_derivative(r);
      if (df == cplx{}) break;
      const cplx next = r - f / df;
      if (std::abs(next - r) <= 1e-16 * std::max(1.0, std::abs(r))) {
        r = next;
        break;
      }
      r = next;
    }
    if (std::abs(r.imag()) < opts.imag_tol) out.push_back({r.real(), mult});
  }
  if (out.empty())
    throw NoRealRoot("d_{N+1}(beta) has no real zero for eta = " + std::to_string(params.eta()) +
                     ", Delta = " + std::to_string(params.delta()) +
                     ", N = " + std::to_string(params.order()));
  std::sort(out.begin(), out.end(), [](auto& l, auto& r) { return l.beta < r.beta; });
  return out;
}

InGapState InGapState::build(const LatticeParams& params, int branch) {
  const auto roots = propagation_constants(params);
  if (branch < 1 || branch > static_cast<int>(roots.size()))
    throw std::out_of_range("branch " + std::to_string(branch) + " outside 1.." +
                            std::to_string(roots.size()));
  const auto& root = roots[branch - 1];
  return at_beta(params, root.beta, branch, root.multiplicity);
}

InGapState InGapState::at_beta(const LatticeParams& params, double beta, int branch,
                               int multiplicity) {
  auto rc = run_recurrence(params, beta);
  const int N = params.order();
  const double scale = max_abs(rc.d, N + 1);
  const double resid = std::max(std::abs(rc.d[N + 1]), std::abs(rc.d[N + 2])) / scale;
  if (!(resid < 1e-8))
    throw std::invalid_argument("beta = " + std::to_string(beta) +
                                " does not truncate the series (residual " +
                                std::to_string(resid) + ")");
  InGapState s;
  s.params_ = params;
  s.branch_ = branch;
  s.multiplicity_ = multiplicity;
  s.beta_ = beta;
  s.d_.assign(rc.d.begin(), rc.d.begin() + N + 1);
  s.a_.assign(rc.a.begin(), rc.a.begin() + N + 1);
  s.b_.assign(rc.b.begin(), rc.b.begin() + N + 1);
  s.truncation_residual_ = resid;
  return s;
}

cplx InGapState::wave_number() const noexcept {
  return {0.5 * params_.order(), 0.5 * params_.delta()};
}

// psi = exp(g) S with g = -Delta x/2 - 2 eta cos x and
// S = sum_n a_n cos(w_n x) - b_n sin(w_n x), w_n = N/2 - n.
StateSample InGapState::eval(double x) const {
  const double eta = params_.eta();
  const double g = -0.5 * params_.delta() * x - 2.0 * eta * std::cos(x);
  const double dg = -0.5 * params_.delta() + 2.0 * eta * std::sin(x);
  double S = 0.0, dS = 0.0;
  for (std::size_t n = 0; n < a_.size(); ++n) {
    const double w = 0.5 * params_.order() - static_cast<double>(n);
    const double c = std::cos(w * x), s = std::sin(w * x);
    S += a_[n] * c - b_[n] * s;
    dS += -w * (a_[n] * s + b_[n] * c);
  }
  const double e = std::exp(g);
  return {x, e * S, e * (dg * S + dS)};
}

double InGapState::second_derivative(double x) const {
  const double eta = params_.eta();
  const double g = -0.5 * params_.delta() * x - 2.0 * eta * std::cos(x);
  const double dg = -0.5 * params_.delta() + 2.0 * eta * std::sin(x);
  const double ddg = 2.0 * eta * std::cos(x);
  double S = 0.0, dS = 0.0, ddS = 0.0;
  for (std::size_t n = 0; n < a_.size(); ++n) {
    const double w = 0.5 * params_.order() - static_cast<double>(n);
    const double c = std::cos(w * x), s = std::sin(w * x);
    const double f = a_[n] * c - b_[n] * s;
    S += f;
    dS += -w * (a_[n] * s + b_[n] * c);
    ddS += -w * w * f;
  }
  return std::exp(g) * ((ddg + dg * dg) * S + 2.0 * dg * dS + ddS);
}

cplx InGapState::eval_complex(double x) const {
  const cplx i(0.0, 1.0);
  cplx sum{};
  for (std::size_t n = 0; n < d_.size(); ++n) sum += d_[n] * std::exp(-i * static_cast<double>(n) * x);
  return std::exp(i * wave_number() * x - 2.0 * params_.eta() * std::cos(x)) * sum;
}

double local_scale(const Evaluator& eval, double x) {
  constexpr int samples = 64;
  double m = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const double t = x - std::numbers::pi + 2.0 * std::numbers::pi * j / samples;
    m = std::max(m, std::abs(eval(t).psi));
  }
  return m;
}

double log_derivative(const Evaluator& eval, double x, double node_tol) {
  const auto s = eval(x);
  const double scale = local_scale(eval, x);
  if (!(std::abs(s.psi) >= node_tol * scale)) throw NodeAtX(x, s.psi);
  return s.dpsi / s.psi;
}

double log_derivative(const InGapState& state, double x, double node_tol) {
  return log_derivative([&state](double t) { return state.eval(t); }, x, node_tol);
}

ResidualReport ode_residual(const InGapState& state, std::span<const double> xs) {
  ResidualReport r;
  for (double x : xs) {
    const double psi = state.eval(x).psi;
    const double v = potential(state.params(), x);
    r.max_residual = std::max(r.max_residual,
                              std::abs(-state.second_derivative(x) + (v - state.beta()) * psi));
    r.scale = std::max(r.scale, std::abs(psi));
  }
  return r;
}

ResidualReport ode_residual(const Evaluator& eval, const PotentialFn& potential_fn, double beta,
                            std::span<const double> xs, double h) {
  ResidualReport r;
  for (double x : xs) {
    const double d2 = (-eval(x + 2 * h).dpsi + 8 * eval(x + h).dpsi - 8 * eval(x - h).dpsi +
                       eval(x - 2 * h).dpsi) /
                      (12 * h);
    const double psi = eval(x).psi;
    r.max_residual = std::max(r.max_residual, std::abs(-d2 + (potential_fn(x) - beta) * psi));
    r.scale = std::max(r.scale, std::abs(psi));
  }
  return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace surfstate
