#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "surfstate/errors.hpp"
#include "surfstate/ingap.hpp"
#include "surfstate/polynomial.hpp"
#include "surfstate/second_solution.hpp"

using namespace surfstate;
using oracle::pi;

namespace {

// Real zeros of d_{N+1}: sign changes of Re d or Im d on a dense grid, refined by
// bisection, kept where |d| also vanishes. For real beta, d_{N+1} is a constant
// times a real polynomial, so one of the two parts may vanish identically.
std::vector<double> oracle_roots(double eta, double delta, int order, double lo, double hi) {
  std::vector<double> roots;
  for (int part = 0; part < 2; ++part) {
    const auto f = [&](double b) {
      const auto d = oracle::d_next(eta, delta, order, b);
      return part == 0 ? d.real() : d.imag();
    };
    const int n = 200000;
    double prev = f(lo);
    for (int i = 1; i <= n; ++i) {
      double a = lo + (hi - lo) * (i - 1) / n, b = lo + (hi - lo) * i / n;
      const double cur = f(b);
      if ((prev < 0.0) != (cur < 0.0)) {
        double fa = prev;
        for (int k = 0; k < 100; ++k) {
          const double m = 0.5 * (a + b), fm = f(m);
          if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        const double r = 0.5 * (a + b);
        const bool fresh = std::none_of(roots.begin(), roots.end(), [&](double x) { return std::abs(x - r) < 1e-9; });
        if (fresh && std::abs(oracle::d_next(eta, delta, order, r)) < 1e-10) roots.push_back(r);
      }
      prev = cur;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double fd_log_derivative(const std::function<double(double)>& f, double x) {
  // Richardson-extrapolated central difference.
  const auto d = [&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  const double h = 1e-3;
  return (4.0 * d(h / 2) - d(h)) / 3.0 / f(x);
}

}  // namespace

TEST_CASE("recurrence: first step for N = 0") {
  const LatticeParams p(0.3, 0.2, 0);
  const double beta = 0.05;
  const cplx d1 = recurrence_step(p, beta, -1, 0.0, 1.0);
  CHECK(std::abs(d1 - oracle::d_next(0.3, 0.2, 0, beta)) < 1e-15);
  CHECK(d1.real() == doctest::Approx((beta + 2 * 0.09 + 0.04 / 4) / 0.6).epsilon(1e-14));
  CHECK(std::abs(d1.imag()) < 1e-16);
}

TEST_CASE("recurrence: linearity and the real split") {
  const LatticeParams p(0.1, 0.3, 1);
  CHECK(std::abs(recurrence_step(p, 0.07, 0, 0.0, 0.0)) == 0.0);

  const auto t = recurrence_terms(p, 0.07, 0);
  const cplx lam(-0.5, -0.15);
  CHECK(t.c0 == doctest::Approx(0.2));
  CHECK(std::abs(t.c1 - (1.0 + 2.0 * lam + lam * lam - 0.02 - 0.07)) < 1e-15);
  CHECK(t.c2 == doctest::Approx(0.4));

  const cplx dn(0.3, -0.7), dn1(-1.1, 0.4);
  const cplx d2 = recurrence_step(p, 0.07, 0, dn, dn1);
  CHECK(std::abs(d2 + (t.c0 * dn + t.c1 * dn1) / t.c2) < 1e-14);
  const auto [a2, b2] = real_recurrence_step(p, 0.07, 0, {dn.real(), dn.imag()}, {dn1.real(), dn1.imag()});
  CHECK(a2 == doctest::Approx(d2.real()).epsilon(1e-13));
  CHECK(b2 == doctest::Approx(d2.imag()).epsilon(1e-13));
}

TEST_CASE("recurrence: truncation at the closed-form root") {
  const double b11 = oracle::beta_n1(0.3, 0.1).first;
  const auto r = run_recurrence(LatticeParams(0.3, 0.1, 1), b11);
  CHECK(std::abs(r.a[2]) < 1e-12);
  CHECK(std::abs(r.b[2]) < 1e-12);
  CHECK(r.a[1] == doctest::Approx(-std::sqrt(16 * 0.09 - 0.01) / 1.2).epsilon(1e-12));
  CHECK(r.b[1] == doctest::Approx(-0.1 / 1.2).epsilon(1e-12));
}

TEST_CASE("char_polynomial: N = 0 and the N = 1 product form") {
  const auto c0 = char_polynomial(LatticeParams(0.3, 0.2, 0));
  CHECK(c0.d.degree() == 1);
  const double root = -(c0.d[0] / c0.d[1]).real();
  CHECK(root == doctest::Approx(-0.19).epsilon(1e-14));

  const double eta = 0.1, delta = 0.3;
  const auto c1 = char_polynomial(LatticeParams(eta, delta, 1));
  const auto product = [&](double beta) {
    const cplx dp(delta, 1.0), dm(delta, -1.0);
    return (beta + dp * dp / 4.0 + 2 * eta * eta) * (beta + dm * dm / 4.0 + 2 * eta * eta) - 4 * eta * eta;
  };
  // d_2 equals the product form up to a constant factor
  const cplx factor = c1.d(0.7) / product(0.7);
  for (double beta : {-0.3, 0.0, 0.11, 0.5})
    CHECK(std::abs(c1.d(beta) / product(beta) - factor) < 1e-12 * std::abs(factor));
  CHECK(c1.a == c1.d.real_part());
  CHECK(c1.b == c1.d.imag_part());
}

TEST_CASE("polynomial roots by companion matrix") {
  const Polynomial p({cplx(6), cplx(-5), cplx(1)});  // (t - 2)(t - 3)
  auto r = polynomial_roots(p);
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - 2.0) < 1e-13);
  CHECK(std::abs(r[1] - 3.0) < 1e-13);
  const auto [v, dv] = p.eval_with_derivative(4.0);
  CHECK(std::abs(v - 2.0) < 1e-15);
  CHECK(std::abs(dv - 3.0) < 1e-15);
}

TEST_CASE("propagation_constants: examples") {
  auto r0 = propagation_constants(LatticeParams(0.3, 0.2, 0));
  REQUIRE(r0.size() == 1);
  CHECK(r0[0].beta == doctest::Approx(-0.19).epsilon(1e-14));

  auto dbl = propagation_constants(LatticeParams(0.1, 0.4, 1));
  REQUIRE(dbl.size() == 1);
  CHECK(dbl[0].multiplicity == 2);
  CHECK(dbl[0].beta == doctest::Approx(oracle::beta_n1(0.1, 0.4).first).epsilon(1e-7));

  auto r1 = propagation_constants(LatticeParams(0.1, 0.3, 1));
  REQUIRE(r1.size() == 2);
  CHECK(r1[0].beta == doctest::Approx(0.0752124).epsilon(1e-7));
  CHECK(r1[1].beta == doctest::Approx(0.3397876).epsilon(1e-7));

  CHECK_THROWS_AS(propagation_constants(LatticeParams(0.1, 0.5, 1)), NoRealRoot);
  CHECK_THROWS_AS(propagation_constants(LatticeParams(0.0, 0.5, 1)), std::invalid_argument);
}

TEST_CASE("propagation_constants: N = 2, 3 against an independent root scan") {
  for (const auto& [eta, delta, order] :
       std::vector<std::tuple<double, double, int>>{{0.2, 0.1, 2}, {0.3, 0.25, 2}, {0.15, 0.2, 3}}) {
    const auto expected = oracle_roots(eta, delta, order, -4.0, 6.0);
    const auto got = propagation_constants(LatticeParams(eta, delta, order));
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i].beta - expected[i]) < 1e-10);
  }
}

TEST_CASE("eval_state: closed forms") {
  const auto s0 = InGapState::build(LatticeParams(0.3, 0.2, 0), 1);
  CHECK(s0.eval(0.0).psi == doctest::Approx(std::exp(-0.6)).epsilon(1e-14));
  for (double x = -20.0; x <= 20.0; x += 0.37)
    CHECK(std::abs(s0.eval(x).psi / oracle::psi_n0(0.3, 0.2, x) - 1.0) < 1e-12);

  for (int branch : {1, 2}) {
    const auto s1 = InGapState::build(LatticeParams(0.1, 0.3, 1), branch);
    for (double x = -20.0; x <= 20.0; x += 0.37) {
      const double ref = oracle::psi_n1(0.1, 0.3, branch, x);
      CHECK(std::abs(s1.eval(x).psi - ref) < 1e-12 * std::max(1.0, oracle::psi_n0(0.1, 0.3, x)));
    }
  }
}

TEST_CASE("eval_state: parity under Delta -> -Delta") {
  const auto a = InGapState::build(LatticeParams(0.2, 0.3, 0), 1);
  const auto b = InGapState::build(LatticeParams(0.2, -0.3, 0), 1);
  for (double x = -6.0; x <= 6.0; x += 0.5)
    CHECK(b.eval(-x).psi == doctest::Approx(a.eval(x).psi).epsilon(1e-12));
}

TEST_CASE("log_derivative") {
  const auto s0 = InGapState::build(LatticeParams(0.3, 0.2, 0), 1);
  CHECK(log_derivative(s0, pi / 2) == doctest::Approx(0.5).epsilon(1e-14));
  const auto flat = InGapState::build(LatticeParams(0.3, 0.0, 0), 1);
  CHECK(std::abs(log_derivative(flat, 0.0)) < 1e-15);
  for (double x = -5.0; x <= 5.0; x += 0.9)
    CHECK(log_derivative(s0, x) == doctest::Approx(oracle::w_n0(0.3, 0.2, x)).epsilon(1e-12));

  const auto s12 = InGapState::build(LatticeParams(0.1, 0.3, 1), 2);
  const double fd = fd_log_derivative([&](double x) { return oracle::psi_n1(0.1, 0.3, 2, x); }, pi / 3);
  CHECK(std::abs(log_derivative(s12, pi / 3) - fd) < 1e-9);

  // node of psi_1^1
  const double s = std::sqrt(16 * 0.01 - 0.09);
  const double c = (0.4 - s) / 0.4;
  const double node = 2.0 * std::atan(c * 0.4 / 0.3);
  const auto s11 = InGapState::build(LatticeParams(0.1, 0.3, 1), 1);
  CHECK(std::abs(s11.eval(node).psi) < 1e-14);
  CHECK_THROWS_AS(log_derivative(s11, node), NodeAtX);
}

TEST_CASE("ode_residual: exact and recurrence-built states") {
  const auto xs = linspace(-10 * pi, 10 * pi, 2001);
  for (const auto& [p, branch] : std::vector<std::pair<LatticeParams, int>>{
           {LatticeParams(0.3, 0.2, 0), 1},
           {LatticeParams(0.1, 0.3, 1), 1},
           {LatticeParams(0.1, 0.3, 1), 2}}) {
    CHECK(ode_residual(InGapState::build(p, branch), xs).relative() < 1e-9);
  }
  for (const auto& p : {LatticeParams(0.2, 0.1, 2), LatticeParams(0.15, 0.2, 3)}) {
    const auto roots = propagation_constants(p);
    for (int m = 1; m <= static_cast<int>(roots.size()); ++m)
      CHECK(ode_residual(InGapState::build(p, m), xs).relative() < 1e-8);
  }
}

TEST_CASE("ode_residual: perturbed beta grows proportionally") {
  const LatticeParams p(0.3, 0.2, 0);
  const auto s = InGapState::build(p, 1);
  const auto xs = linspace(-3 * pi, 3 * pi, 601);
  const Evaluator ev = [&](double x) { return s.eval(x); };
  const PotentialFn V = [&](double x) { return potential(p, x); };
  const auto exact = ode_residual(ev, V, s.beta(), xs);
  const auto off = ode_residual(ev, V, s.beta() + 1e-3, xs);
  CHECK(exact.relative() < 1e-9);
  CHECK(off.relative() == doctest::Approx(1e-3).epsilon(1e-3));
}

TEST_CASE("second solution: Wronskian and oracle agreement") {
  const auto s = InGapState::build(LatticeParams(0.3, 0.1, 0), 1);
  const auto integral = SecondSolution::integral(s, -40.0, 40.0);
  const auto anchored = SecondSolution::anchored(s, -10.0, -40.0, 40.0);
  CHECK(integral.convention() == Convention::IntegralFromMinusInfinity);
  CHECK(anchored.x_ref().value() == -10.0);
  for (double x = -35.0; x <= 35.0; x += 1.3) {
    const auto p = s.eval(x);
    for (const auto* t : {&integral, &anchored}) {
      const auto q = t->eval(x);
      CHECK(std::abs(p.psi * q.dpsi - p.dpsi * q.psi - 1.0) < 1e-9);
    }
  }

  // integral convention against Simpson from far left
  for (double x : {-12.0, 0.0, 9.0, 29.8}) {
    const double lo = -120 * pi;
    const double I = oracle::simpson(
        [](double t) { return std::pow(oracle::psi_n0(0.3, 0.1, t), -2); }, lo, x, 400000);
    CHECK(integral.eval(x).psi == doctest::Approx(oracle::psi_n0(0.3, 0.1, x) * I).epsilon(1e-8));
  }

  // anchored convention against RK4
  const PotentialFn V = [](double x) { return oracle::lattice_v(0.3, 0.1, 0, x); };
  for (double x : {-30.0, 5.0, 25.0}) {
    const auto [y, dy] = oracle::rk4(V, s.beta(), -10.0, x, 0.0, 1.0 / s.eval(-10.0).psi, 40000);
    CHECK(anchored.eval(x).psi == doctest::Approx(y).epsilon(1e-8));
    CHECK(anchored.eval(x).dpsi == doctest::Approx(dy).epsilon(1e-8));
  }
}

TEST_CASE("second solution: divergence duality") {
  const auto s = InGapState::build(LatticeParams(0.3, 0.1, 0), 1);
  const auto t = SecondSolution::integral(s, -100.0, 100.0);
  // |psi| ~ exp(-Delta x / 2), |psi~| ~ exp(+Delta x / 2)
  CHECK(std::abs(s.eval(400.0).psi) < 1e-8 * std::abs(s.eval(0.0).psi));
  CHECK(std::abs(t.eval(400.0).psi) > 1e6 * std::abs(t.eval(0.0).psi));
  CHECK(std::abs(t.eval(-400.0).psi) < 1e-6 * std::abs(t.eval(0.0).psi));
}

TEST_CASE("second solution: log-derivative at x1 gives V1 of the pure second mode") {
  const double eta = 0.3, delta = 0.1, x1 = 19 * pi / 2;
  const auto s = InGapState::build(LatticeParams(eta, delta, 0), 1);
  const auto t = SecondSolution::anchored(s, -100.0, -100.0, 40.0);
  const auto q = t.eval(x1);
  const double kappa = -q.dpsi / q.psi;
  CHECK(s.beta() + kappa * kappa == doctest::Approx(0.142676).epsilon(1e-5 / 0.142676));
  const double w_oracle = oracle::w_second_n0(eta, delta, -100.0, x1);
  CHECK(q.dpsi / q.psi == doctest::Approx(w_oracle).epsilon(1e-9));
}

TEST_CASE("second solution: preconditions") {
  const auto s11 = InGapState::build(LatticeParams(0.1, 0.3, 1), 1);
  CHECK_THROWS_AS(SecondSolution::integral(s11, -20.0, 20.0), NodeOnPath);
  const auto flat = InGapState::build(LatticeParams(0.3, 0.0, 0), 1);
  CHECK_THROWS_AS(SecondSolution::integral(flat, -20.0, 20.0), std::invalid_argument);
  const auto s = InGapState::build(LatticeParams(0.3, 0.1, 0), 1);
  CHECK(SecondSolution::make_default(s, -10.0, 10.0).convention() == Convention::IntegralFromMinusInfinity);
  CHECK(SecondSolution::make_default(s11, -10.0, 10.0).convention() == Convention::WronskianAnchored);
  // the anchored route crosses the nodes of psi_1^1
  const auto a = SecondSolution::anchored(s11, 0.5, -20.0, 20.0);
  for (double x = -19.0; x <= 19.0; x += 0.77) {
    const auto p = s11.eval(x);
    const auto q = a.eval(x);
    CHECK(std::abs(p.psi * q.dpsi - p.dpsi * q.psi - 1.0) < 1e-9);
  }
}
