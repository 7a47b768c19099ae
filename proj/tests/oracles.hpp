#pragma once

// Reference implementations written independently of the library: closed forms,
// a plain RK4 integrator and composite Simpson quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double lattice_v(double eta, double delta, int order, double x) {
  const double m = order + 1.0;
  return -2.0 * eta * eta * std::cos(2.0 * x) +
         2.0 * eta * std::sqrt(m * m + delta * delta) * std::cos(x + std::atan(delta / m));
}

inline double beta_n0(double eta, double delta) { return -(delta * delta + 8.0 * eta * eta) / 4.0; }

/// (beta_1^1, beta_1^2)
inline std::pair<double, double> beta_n1(double eta, double delta) {
  const double base = 1.0 - delta * delta - 8.0 * eta * eta;
  const double s = 2.0 * std::sqrt(16.0 * eta * eta - delta * delta);
  return {(base - s) / 4.0, (base + s) / 4.0};
}

inline double psi_n0(double eta, double delta, double x) {
  return std::exp(-delta * x / 2.0 - 2.0 * eta * std::cos(x));
}

inline double w_n0(double eta, double delta, double x) { return -delta / 2.0 + 2.0 * eta * std::sin(x); }

/// Printed N = 1 states, branch 1 or 2.
inline double psi_n1(double eta, double delta, int branch, double x) {
  const double s = std::sqrt(16.0 * eta * eta - delta * delta);
  const double c = (4.0 * eta + (branch == 1 ? -s : s)) / (4.0 * eta);
  return psi_n0(eta, delta, x) * (c * std::cos(x / 2.0) - delta / (4.0 * eta) * std::sin(x / 2.0));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Solves y'' = (V - beta) y from x0 to x1 with fixed-step RK4. Returns (y, y').
inline std::pair<double, double> rk4(const std::function<double(double)>& V, double beta, double x0,
                                     double x1, double y, double dy, int steps) {
  const double h = (x1 - x0) / steps;
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    const auto f = [&](double xx, double yy) { return (V(xx) - beta) * yy; };
    const double k1y = dy, k1d = f(x, y);
    const double k2y = dy + 0.5 * h * k1d, k2d = f(x + 0.5 * h, y + 0.5 * h * k1y);
    const double k3y = dy + 0.5 * h * k2d, k3d = f(x + 0.5 * h, y + 0.5 * h * k2y);
    const double k4y = dy + h * k3d, k4d = f(x + h, y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    x += h;
  }
  return {y, dy};
}

/// Log-derivative of psi * int_{lo}^{x} psi^-2 for the N = 0 state.
inline double w_second_n0(double eta, double delta, double lo, double x, int n = 200000) {
  const auto inv2 = [&](double t) {
    const double p = psi_n0(eta, delta, t);
    return 1.0 / (p * p);
  };
  const double integral = simpson(inv2, lo, x, n);
  const double p = psi_n0(eta, delta, x);
  return w_n0(eta, delta, x) + 1.0 / (p * p * integral);
}

/// Free evolution of exp(-x^2 / (2 sigma^2)) under i phi_z = -phi_xx.
inline std::complex<double> free_gaussian(double sigma, double x, double z) {
  const std::complex<double> s(sigma * sigma, 2.0 * z);
  return std::sqrt(sigma * sigma / s) * std::exp(-x * x / (2.0 * s));
}

/// Plain complex recurrence d_{n+2} = -(c0 d_n + c1 d_{n+1}) / c2, returning d_{N+1}.
inline std::complex<double> d_next(double eta, double delta, int order, double beta) {
  using C = std::complex<double>;
  const C lam(-order / 2.0, -delta / 2.0);
  C dm1 = 0.0, d0 = 1.0;
  for (int n = -1; n < order; ++n) {
    const double c0 = 2.0 * eta * (order - n);
    const C c1 = (n + 1.0) * (n + 1.0 + 2.0 * lam) + lam * lam - 2.0 * eta * eta - beta;
    const double c2 = 2.0 * eta * (n + 2.0);
    const C d1 = -(c0 * dm1 + c1 * d0) / c2;
    dm1 = d0;
    d0 = d1;
  }
  return d0;
}

}  // namespace oracle
