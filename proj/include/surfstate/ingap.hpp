#pragma once

// Finite-superposition in-gap Bloch states of V(eta, Delta, N, x).
//
// With xi = exp(-ix) and psi = exp(-2 eta cos x) xi^lambda phi(xi), lambda = -(N + i Delta)/2,
// the power series phi = sum d_n xi^n obeys
//
//   c0(n) d_n + c1(n) d_{n+1} + c2(n) d_{n+2} = 0,   d_{-1} = 0, d_0 = 1,
//   c0(n) = 2 eta (N - n)
//   c1(n) = (n + 1)(n + 1 + 2 lambda) + lambda^2 - 2 eta^2 - beta
//   c2(n) = 2 eta (n + 2).
//
// c0(N) vanishes identically on the family, so d_{N+1}(beta) = 0 truncates the
// series to a polynomial of degree N; its real zeros are the propagation constants.

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "surfstate/lattice.hpp"
#include "surfstate/polynomial.hpp"

namespace surfstate {

struct StateSample {
  double x = 0.0;
  double psi = 0.0;
  double dpsi = 0.0;
};

/// Evaluates a state and its first derivative at x.
using Evaluator = std::function<StateSample(double)>;
using PotentialFn = std::function<double(double)>;

/// The transformation exponent lambda = -(N + i Delta)/2; -lambda is the complex
/// Bloch wave number.
cplx transform_exponent(const LatticeParams& params);

struct RecurrenceTerms {
  double c0 = 0.0;
  cplx c1;
  double c2 = 0.0;
};

RecurrenceTerms recurrence_terms(const LatticeParams& params, double beta, int n);

/// d_{n+2} from d_n and d_{n+1}. Requires eta != 0.
cplx recurrence_step(const LatticeParams& params, double beta, int n, cplx d_n, cplx d_n1);

/// Same step split into the coupled real recursions for a_n = Re d_n, b_n = Im d_n.
std::pair<double, double> real_recurrence_step(const LatticeParams& params, double beta, int n,
                                               std::pair<double, double> ab_n,
                                               std::pair<double, double> ab_n1);

struct RecurrenceCoeffs {
  int order = 0;
  double beta = 0.0;
  std::vector<cplx> d;    // d_0 .. d_{N+2}
  std::vector<double> a;  // Re d_n
  std::vector<double> b;  // Im d_n
};

RecurrenceCoeffs run_recurrence(const LatticeParams& params, double beta);

/// d_{N+1} as a polynomial in beta, with its real and imaginary coefficient
/// vectors A_{N+1}(beta), B_{N+1}(beta) (lowest degree first).
struct CharPolynomial {
  Polynomial d;
  std::vector<double> a;
  std::vector<double> b;
};

CharPolynomial char_polynomial(const LatticeParams& params);

struct PropagationConstant {
  double beta = 0.0;
  int multiplicity = 1;
};

struct RootOptions {
  double cluster_tol = 1e-7;
  double imag_tol = 1e-9;
};

/// Distinct real zeros of d_{N+1}(beta) in ascending order. Coincident zeros are
/// merged and reported with their multiplicity. Throws NoRealRoot when there is none.
std::vector<PropagationConstant> propagation_constants(const LatticeParams& params,
                                                       const RootOptions& opts = {});

/// psi_N^{m1}(eta, Delta, x): the real part of the finite Bloch superposition.
class InGapState {
 public:
  /// Branch m1 is 1-based into propagation_constants(params).
  static InGapState build(const LatticeParams& params, int branch);

  /// State for a beta known to truncate the series (for example the branch of a
  /// related lattice). Throws std::invalid_argument if d_{N+1}(beta) does not vanish.
  static InGapState at_beta(const LatticeParams& params, double beta, int branch = 0,
                            int multiplicity = 1);

  const LatticeParams& params() const noexcept { return params_; }
  int branch() const noexcept { return branch_; }
  int multiplicity() const noexcept { return multiplicity_; }
  double beta() const noexcept { return beta_; }
  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<cplx>& d() const noexcept { return d_; }
  /// k = N/2 + i Delta/2
  cplx wave_number() const noexcept;
  /// |d_{N+1}| and |d_{N+2}| relative to max |d_n|, from the recurrence.
  double truncation_residual() const noexcept { return truncation_residual_; }

  StateSample eval(double x) const;
  double second_derivative(double x) const;
  /// The complex Bloch solution whose real part is eval().
  cplx eval_complex(double x) const;

 private:
  InGapState() = default;

  LatticeParams params_;
  int branch_ = 0;
  int multiplicity_ = 1;
  double beta_ = 0.0;
  std::vector<double> a_, b_;
  std::vector<cplx> d_;
  double truncation_residual_ = 0.0;
};

inline StateSample eval_state(const InGapState& state, double x) { return state.eval(x); }

/// Largest |psi| over the period [x - pi, x + pi].
double local_scale(const Evaluator& eval, double x);

/// W = psi'/psi. Throws NodeAtX if |psi(x)| < node_tol * local_scale.
double log_derivative(const InGapState& state, double x, double node_tol = 1e-13);
double log_derivative(const Evaluator& eval, double x, double node_tol = 1e-13);

struct ResidualReport {
  double max_residual = 0.0;  // max |-psi'' + (V - beta) psi|
  double scale = 0.0;         // max |psi| on the grid
  double relative() const { return scale > 0.0 ? max_residual / scale : max_residual; }
};

/// Residual using the closed-form second derivative.
ResidualReport ode_residual(const InGapState& state, std::span<const double> xs);

/// Residual of a generic evaluator; psi'' from a five-point central difference of
/// psi' with step h. All grid points must lie inside one smooth region.
ResidualReport ode_residual(const Evaluator& eval, const PotentialFn& potential, double beta,
                            std::span<const double> xs, double h = 1e-3);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace surfstate
