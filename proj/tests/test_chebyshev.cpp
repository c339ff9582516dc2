#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hornfree/chebyshev.hpp"
#include "hornfree/errors.hpp"

using namespace hornfree;

namespace {

// Midpoint rule in θ for ∫ f(2cosθ)·2sin²θ·2 dθ / (2π) = (1/2π)∫_{−2}^{2} f(t)√(4−t²) dt.
// Kept independent of the library's Gauss–Legendre rule.
double semicircle_integral_midpoint(const Polynomial& p, int nodes = 20000) {
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double th = pi * (i + 0.5) / nodes;
    const double sn = std::sin(th);
    s += p(2.0 * std::cos(th)) * 4.0 * sn * sn;
  }
  return s * (pi / nodes) / (2.0 * pi);
}

}  // namespace

TEST(Polynomial, TrimsTrailingZeros) {
  const Polynomial p({1.0, 2.0, 0.0, 0.0});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_EQ(Polynomial({0.0}).degree(), -1);
  EXPECT_TRUE(Polynomial().is_zero());
}

TEST(Polynomial, Arithmetic) {
  const Polynomial a({1, 1});   // 1 + x
  const Polynomial b({-1, 1});  // −1 + x
  EXPECT_EQ(a * b, Polynomial({-1, 0, 1}));
  EXPECT_EQ(a - a, Polynomial());
  EXPECT_DOUBLE_EQ((a * b)(3.0), 8.0);
}

TEST(Polynomial, ComposeAffine) {
  const Polynomial p({0, 0, 1});  // x²
  // (2x + 1)² = 4x² + 4x + 1
  EXPECT_EQ(p.compose_affine(2.0, 1.0), Polynomial({1, 4, 4}));
}

TEST(Polynomial, MatrixEvaluation) {
  const double d[] = {1, 2, -3};
  const auto m = Matrix::diagonal(d);
  const Polynomial p({1, -2, 0, 1});
  const auto pm = evaluate(p, m);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(pm(i, i).real(), p(d[i]), 1e-12);
}

TEST(Cheb, LowOrder) {
  EXPECT_EQ(cheb(ChebKind::First, 0), Polynomial({1}));
  EXPECT_EQ(cheb(ChebKind::First, 1), Polynomial({0, 1}));
  EXPECT_EQ(cheb(ChebKind::First, 2), Polynomial({-2, 0, 1}));
  EXPECT_EQ(cheb(ChebKind::Second, 0), Polynomial({1}));
  EXPECT_EQ(cheb(ChebKind::Second, 1), Polynomial({0, 1}));
  EXPECT_EQ(cheb(ChebKind::Second, 2), Polynomial({-1, 0, 1}));
}

TEST(Cheb, MonicOfExactDegree) {
  for (unsigned n = 1; n <= 12; ++n) {
    for (auto kind : {ChebKind::First, ChebKind::Second}) {
      const auto p = cheb(kind, n);
      EXPECT_EQ(p.degree(), static_cast<int>(n));
      EXPECT_EQ(p.leading(), 1.0);
    }
  }
}

TEST(Cheb, TrigonometricIdentities) {
  const double pi = std::numbers::pi;
  for (unsigned n = 1; n <= 10; ++n) {
    const auto t = cheb(ChebKind::First, n);
    const auto u = cheb(ChebKind::Second, n);
    for (int k = 0; k < 100; ++k) {
      const double th = pi * (k + 0.37) / 100.0;
      EXPECT_NEAR(t(2.0 * std::cos(th)), 2.0 * std::cos(n * th), 1e-10);
      EXPECT_NEAR(u(2.0 * std::cos(th)), std::sin((n + 1) * th) / std::sin(th), 1e-9);
    }
  }
}

TEST(Cheb, SecondKindGeneratingSeries) {
  const double pi = std::numbers::pi;
  std::vector<Polynomial> us;
  for (unsigned n = 0; n <= 30; ++n) us.push_back(cheb(ChebKind::Second, n));
  for (double t : {-0.3, -0.1, 0.05, 0.2, 0.3}) {
    for (int k = 0; k < 50; ++k) {
      const double x = 2.0 * std::cos(pi * (k + 0.5) / 50.0);
      double series = 0.0, tn = 1.0;
      for (const auto& u : us) {
        series += u(x) * tn;
        tn *= t;
      }
      EXPECT_NEAR(series, 1.0 / (1.0 - t * x + t * t), 1e-8);
    }
  }
}

TEST(Cheb, FirstKindGeneratingSeries) {
  // Σ T_n(x) tⁿ = (1 − t²)/(1 − t x + t²) with T_0 counted once.
  const double pi = std::numbers::pi;
  for (double t : {-0.3, 0.1, 0.3}) {
    for (int k = 0; k < 50; ++k) {
      const double x = 2.0 * std::cos(pi * (k + 0.5) / 50.0);
      double series = 0.0, tn = 1.0;
      for (unsigned n = 0; n <= 30; ++n) {
        series += cheb(ChebKind::First, n)(x) * tn;
        tn *= t;
      }
      EXPECT_NEAR(series, (1.0 - t * t) / (1.0 - t * x + t * t), 1e-8);
    }
  }
}

TEST(ShiftedCheb, CanonicalIntervalIsIdentity) {
  for (unsigned n = 0; n <= 6; ++n) {
    const auto a = shifted_cheb(ChebKind::First, n, -2, 2);
    const auto b = cheb(ChebKind::First, n);
    for (double x : {-1.7, 0.0, 0.3, 1.9}) EXPECT_NEAR(a(x), b(x), 1e-13);
  }
}

TEST(ShiftedCheb, ZeroToFour) {
  const auto p = shifted_cheb(ChebKind::First, 1, 0, 4);
  EXPECT_NEAR(p.coeff(0), -2.0, 1e-15);
  EXPECT_NEAR(p.coeff(1), 1.0, 1e-15);
  EXPECT_EQ(p.degree(), 1);
}

TEST(ShiftedCheb, DegreeAndEndpoints) {
  for (auto [u, v] : {std::pair{0.0, 1.0}, std::pair{-5.0, 3.0}, std::pair{0.1, 0.9}}) {
    const auto p = shifted_cheb(ChebKind::First, 5, u, v);
    EXPECT_EQ(p.degree(), 5);
    // endpoints map to ±2, where T_5 = ±2
    EXPECT_NEAR(p(v), 2.0, 1e-8);
    EXPECT_NEAR(p(u), -2.0, 1e-8);
  }
  EXPECT_THROW((void)shifted_cheb(ChebKind::First, 2, 1.0, 1.0), DomainError);
}

TEST(Affine, MapsIntervalOntoCanonical) {
  const auto a = affine_to_canonical(0.2, 0.7);
  EXPECT_NEAR(a.scale * 0.2 + a.offset, -2.0, 1e-14);
  EXPECT_NEAR(a.scale * 0.7 + a.offset, 2.0, 1e-14);
}

TEST(Semicircle, CatalanMoments) {
  const std::uint64_t expected[] = {1, 1, 2, 5, 14, 42, 132, 429};
  for (unsigned j = 0; j < 8; ++j) {
    EXPECT_EQ(catalan(j), expected[j]);
    EXPECT_EQ(semicircle_moment(2 * j), static_cast<double>(expected[j]));
    EXPECT_EQ(semicircle_moment(2 * j + 1), 0.0);
  }
}

TEST(Semicircle, TraceExamples) {
  EXPECT_DOUBLE_EQ(semicircle_trace(Polynomial({0, 0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(semicircle_trace(cheb(ChebKind::First, 2)), -1.0);
  for (unsigned n = 1; n <= 10; ++n) EXPECT_NEAR(semicircle_trace(cheb(ChebKind::Second, n)), 0.0, 1e-9);
}

TEST(Semicircle, TraceMatchesIndependentQuadrature) {
  for (unsigned n = 0; n <= 10; ++n) {
    const auto p = cheb(ChebKind::First, n) * Polynomial({0.5, -1.0, 0.25});
    EXPECT_NEAR(semicircle_trace(p), semicircle_integral_midpoint(p), 1e-9);
  }
}

TEST(Alpha, Values) {
  EXPECT_THROW((void)alpha_coeff(0), DomainError);
  EXPECT_NEAR(alpha_coeff(1), 0.0, 1e-12);
  EXPECT_NEAR(alpha_coeff(2), -1.0, 1e-12);
  for (unsigned n = 3; n <= 12; ++n) EXPECT_NEAR(alpha_coeff(n), 0.0, 1e-9) << n;
}

TEST(Alpha, AgreesWithSemicircleTraceAndQuadrature) {
  for (unsigned n = 1; n <= 8; ++n) {
    const auto t = cheb(ChebKind::First, n);
    EXPECT_NEAR(alpha_coeff(n), semicircle_trace(t), 1e-12);
    EXPECT_NEAR(alpha_coeff(n), semicircle_integral_midpoint(t), 1e-10);
    EXPECT_NEAR(alpha_coeff(n), inner_product(t, Polynomial({1.0}), ChebKind::Second) / (2.0 * std::numbers::pi),
                1e-10);
  }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto rule = gauss_legendre(20);
  double sum_w = 0.0;
  for (double w : rule.weights) sum_w += w;
  EXPECT_NEAR(sum_w, 2.0, 1e-14);
  for (int k = 0; k <= 39; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(s, exact, 1e-13) << k;
  }
}

TEST(InnerProduct, Orthogonality) {
  EXPECT_NEAR(inner_product(cheb(ChebKind::First, 1), cheb(ChebKind::First, 2), ChebKind::First), 0.0, 1e-10);
  EXPECT_NEAR(inner_product(cheb(ChebKind::Second, 1), cheb(ChebKind::Second, 3), ChebKind::Second), 0.0, 1e-10);
  EXPECT_NEAR(inner_product(Polynomial({1}), Polynomial({1}), ChebKind::Second), 2.0 * std::numbers::pi, 1e-10);
  EXPECT_NEAR(inner_product(Polynomial({1}), Polynomial({1}), ChebKind::First), std::numbers::pi, 1e-10);
  for (unsigned m = 0; m <= 20; ++m)
    for (unsigned n = 0; n <= 20; ++n) {
      if (m == n) continue;
      EXPECT_NEAR(inner_product(cheb(ChebKind::First, m), cheb(ChebKind::First, n), ChebKind::First), 0.0, 1e-8);
      EXPECT_NEAR(inner_product(cheb(ChebKind::Second, m), cheb(ChebKind::Second, n), ChebKind::Second), 0.0, 1e-8);
    }
}

TEST(InnerProduct, Norms) {
  // ∫ T_n² (4−x²)^{−1/2} = 2π and ∫ U_n² (4−x²)^{1/2} = 2π for n ≥ 1.
  for (unsigned n = 1; n <= 15; ++n) {
    EXPECT_NEAR(inner_product(cheb(ChebKind::First, n), cheb(ChebKind::First, n), ChebKind::First),
                2.0 * std::numbers::pi, 1e-8);
    EXPECT_NEAR(inner_product(cheb(ChebKind::Second, n), cheb(ChebKind::Second, n), ChebKind::Second),
                2.0 * std::numbers::pi, 1e-8);
  }
}
