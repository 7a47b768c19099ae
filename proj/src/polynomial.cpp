#include "surfstate/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

namespace surfstate {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(cplx{});
  trim();
}

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx Polynomial::operator()(cplx t) const { return eval_with_derivative(t).first; }

std::pair<cplx, cplx> Polynomial::eval_with_derivative(cplx t) const {
  cplx p = coeffs_.back();
  cplx dp{};
  for (int i = degree() - 1; i >= 0; --i) {
    dp = dp * t + p;
    p = p * t + coeffs_[i];
  }
  return {p, dp};
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial();
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

std::vector<double> Polynomial::real_part() const {
  std::vector<double> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(), [](cplx c) { return c.real(); });
  return out;
}

std::vector<double> Polynomial::imag_part() const {
  std::vector<double> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(), [](cplx c) { return c.imag(); });
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

std::vector<cplx> polynomial_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) return {};
  const cplx lead = p[n];
  if (lead == cplx{}) throw std::logic_error("polynomial with zero leading coefficient");

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigensolver failed");

  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      const auto [f, df] = p.eval_with_derivative(r);
      if (df == cplx{}) break;
      const cplx next = r - f / df;
      // Newton stalls near multiple roots; keep the eigenvalue estimate then.
      if (std::abs(p(next)) >= std::abs(f)) break;
      r = next;
    }
  }
  return roots;
}

}  // namespace surfstate
