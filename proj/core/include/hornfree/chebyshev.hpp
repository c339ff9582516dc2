#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "hornfree/linalg.hpp"

namespace hornfree {

/// Dense real polynomial, coefficient index = degree. Trailing zeros are
/// trimmed so the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial monomial(unsigned degree, double c = 1.0);

  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  [[nodiscard]] double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
  [[nodiscard]] double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;

  /// p(a·x + b).
  [[nodiscard]] Polynomial compose_affine(double a, double b) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// p(A) by Horner's rule on matrices.
Matrix evaluate(const Polynomial& p, const Matrix& a);

enum class ChebKind { First, Second };

/// Monic Chebyshev polynomial on [−2, 2]: T_n(2cosθ) = 2cos(nθ) for n ≥ 1,
/// U_n(2cosθ) = sin((n+1)θ)/sinθ. T_0 = U_0 = 1.
Polynomial cheb(ChebKind kind, unsigned n);

/// Affine map sending [u, v] onto [−2, 2]: x ↦ scale·x + offset.
struct AffineToCanonical {
  double scale;
  double offset;
};
AffineToCanonical affine_to_canonical(double u, double v);

/// cheb(kind, n) composed with the affine map [u, v] → [−2, 2].
Polynomial shifted_cheb(ChebKind kind, unsigned n, double u, double v);

std::uint64_t catalan(unsigned j);

/// k-th moment of the (0,1) semicircle law: Catalan(k/2) for even k, else 0.
double semicircle_moment(unsigned k);

/// τ(p(s)) for a (0,1)-semicircular s.
double semicircle_trace(const Polynomial& p);

/// α_n = (1/2π) ∫ T_n(t) √(4 − t²) dt; requires n ≥ 1.
double alpha_coeff(unsigned n);

/// ∫_{−2}^{2} p q w dx with w the first- or second-kind Chebyshev weight,
/// by 200-node Gauss–Legendre in θ after x = 2cosθ.
double inner_product(const Polynomial& p, const Polynomial& q, ChebKind weight);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [−1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule (Newton iteration on P_n).
GaussLegendreRule gauss_legendre(unsigned n);

}  // namespace hornfree
