#include "hornfree/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hornfree/errors.hpp"

namespace hornfree {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(unsigned degree, double c) {
  std::vector<double> v(degree + 1, 0.0);
  v[degree] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::compose_affine(double a, double b) const {
  // Horner on polynomials: acc ← acc·(a x + b) + c_k.
  const Polynomial lin({b, a});
  Polynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + Polynomial::constant(*it);
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

Matrix evaluate(const Polynomial& p, const Matrix& a) {
  if (!a.square()) throw StructuralError("evaluate: matrix is not square");
  const std::size_t n = a.rows();
  Matrix acc(n, n);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * a;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += *it;
  }
  return acc;
}

Polynomial cheb(ChebKind kind, unsigned n) {
  if (n == 0) return Polynomial::constant(1.0);
  const Polynomial x({0.0, 1.0});
  Polynomial prev = Polynomial::constant(1.0);
  Polynomial cur = x;
  if (n == 1) return cur;
  // First step differs: T_2 = x·T_1 − 2·T_0, U_2 = x·U_1 − U_0.
  Polynomial next = x * cur - prev * (kind == ChebKind::First ? 2.0 : 1.0);
  for (unsigned k = 2; k < n; ++k) {
    prev = std::move(cur);
    cur = std::move(next);
    next = x * cur - prev;
  }
  return next;
}

AffineToCanonical affine_to_canonical(double u, double v) {
  if (!(u < v)) throw DomainError("affine_to_canonical: requires u < v");
  return {4.0 / (v - u), -2.0 * (u + v) / (v - u)};
}

Polynomial shifted_cheb(ChebKind kind, unsigned n, double u, double v) {
  const auto map = affine_to_canonical(u, v);
  return cheb(kind, n).compose_affine(map.scale, map.offset);
}

std::uint64_t catalan(unsigned j) {
  // C_{k+1} = C_k · 2(2k+1)/(k+2), exact in 64 bits through C_35.
  std::uint64_t c = 1;
  for (unsigned k = 0; k < j; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

double semicircle_moment(unsigned k) {
  return k % 2 == 1 ? 0.0 : static_cast<double>(catalan(k / 2));
}

double semicircle_trace(const Polynomial& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) s += p.coeffs()[k] * semicircle_moment(static_cast<unsigned>(k));
  return s;
}

double alpha_coeff(unsigned n) {
  if (n == 0) throw DomainError("alpha_coeff: index starts at 1");
  return semicircle_trace(cheb(ChebKind::First, n));
}

GaussLegendreRule gauss_legendre(unsigned n) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double inner_product(const Polynomial& p, const Polynomial& q, ChebKind weight) {
  static const GaussLegendreRule rule = gauss_legendre(200);
  // x = 2cosθ, θ ∈ [0, π]:
  //   first kind:  ∫ f(x)(4−x²)^{−1/2} dx = ∫ f(2cosθ) dθ
  //   second kind: ∫ f(x)(4−x²)^{1/2} dx  = ∫ f(2cosθ)·4sin²θ dθ
  const double half = std::numbers::pi / 2.0;
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double theta = half * (rule.nodes[k] + 1.0);
    const double x = 2.0 * std::cos(theta);
    double f = p(x) * q(x);
    if (weight == ChebKind::Second) {
      const double sn = std::sin(theta);
      f *= 4.0 * sn * sn;
    }
    s += rule.weights[k] * f;
  }
  return s * half;
}

}  // namespace hornfree
