#pragma once

#include <complex>
#include <vector>

namespace surfstate {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients, stored lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  static Polynomial constant(cplx c) { return Polynomial({c}); }
  /// c0 + c1 * t
  static Polynomial linear(cplx c0, cplx c1) { return Polynomial({c0, c1}); }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  cplx operator[](int i) const { return i <= degree() ? coeffs_[i] : cplx{}; }

  cplx operator()(cplx t) const;
  /// Value and first derivative by Horner's rule.
  std::pair<cplx, cplx> eval_with_derivative(cplx t) const;
  Polynomial derivative() const;

  /// Real and imaginary coefficient parts as polynomials over the reals.
  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator*=(cplx s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void trim();
  std::vector<cplx> coeffs_{cplx{}};
};

/// All complex roots from the eigenvalues of the companion matrix, each
/// polished by a few Newton steps on the polynomial itself.
std::vector<cplx> polynomial_roots(const Polynomial& p);

}  // namespace surfstate
