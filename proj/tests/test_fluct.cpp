#include <gtest/gtest.h>

#include <cmath>

#include "hornfree/errors.hpp"
#include "hornfree/fluct.hpp"
#include "hornfree/ncwords.hpp"

using namespace hornfree;

namespace {

Polynomial x() { return Polynomial({0, 1}); }

void expect_all_pass(const ExperimentReport& r) {
  for (const auto& a : r.asserts) EXPECT_TRUE(a.pass) << a.name << " value " << a.value << " band [" << a.lo << ", " << a.hi << "]";
}

}  // namespace

TEST(Statistics, Summarize) {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_NEAR(s.mean_se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_THROW((void)summarize({1.0}), DomainError);
}

TEST(Statistics, CovarianceOfPerfectlyCorrelated) {
  const auto [c, se] = covariance_with_se({1, 2, 3, 4}, {2, 4, 6, 8});
  EXPECT_NEAR(c, 2.0 * 5.0 / 3.0, 1e-12);
  EXPECT_GT(se, 0.0);
}

TEST(Statistics, ProportionErrorStaysPositive) {
  const auto [p, se] = proportion_with_se(100, 100);
  EXPECT_EQ(p, 1.0);
  EXPECT_GT(se, 0.0);
  EXPECT_GT(proportion_with_se(0, 100).second, 0.0);
}

TEST(Report, ChecksAndLookup) {
  ExperimentReport r;
  r.check("inside", 0.5, 0.0, 1.0);
  EXPECT_TRUE(r.passed());
  r.check("outside", 2.0, 0.0, 1.0);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.assertion("outside")->pass);
  EXPECT_EQ(r.assertion("missing"), nullptr);
}

TEST(Traces, ThreePathsAgree) {
  Rng rng(RngState{81, 0});
  for (std::size_t n : {1u, 7u, 40u}) {
    const auto xm = sample_gue(n, rng);
    const auto traces = power_traces(xm, 9);
    EXPECT_NEAR(traces[0], static_cast<double>(n), 0.0);
    EXPECT_NEAR(traces[1], xm.trace(), 1e-10);
    for (unsigned k = 1; k <= 9; ++k) {
      const double a = trace_poly_power_path(cheb(ChebKind::First, k), traces);
      const double b = trace_chebyshev_recursion_path(xm, k);
      const double c = trace_chebyshev_eigen_path(xm, k);
      EXPECT_NEAR(a, c, 1e-8 * std::max(1.0, std::abs(c)));
      EXPECT_NEAR(b, c, 1e-8 * std::max(1.0, std::abs(c)));
    }
  }
}

TEST(Clt, TraceOfXHasUnitVariance) {
  // Tr X is a sum of N independent N(0, 1/N) diagonal entries.
  Rng rng(RngState{82, 0});
  std::vector<double> t(4000);
  for (auto& v : t) v = sample_gue(10, rng).trace();
  const auto s = summarize(t);
  EXPECT_NEAR(s.variance, 1.0, 4 * s.variance_se);
}

TEST(Clt, DeskScaleRunPassesGates) {
  const auto r = clt_johansson(80, 4, 600, RngState{83, 0});
  EXPECT_EQ(r.asserts.size(), 4u * 2 + 6u);
  expect_all_pass(r);
}

TEST(Clt, DoublingSamplesShrinksErrors) {
  const auto a = clt_johansson(30, 2, 1000, RngState{84, 0});
  const auto b = clt_johansson(30, 2, 2000, RngState{84, 0});
  for (const char* name : {"mean_1", "mean_2"}) {
    const double ratio = a.estimate(name)->std_error / b.estimate(name)->std_error;
    EXPECT_NEAR(ratio, std::sqrt(2.0), 0.1 * std::sqrt(2.0)) << name;
  }
}

TEST(Clt, Preconditions) {
  EXPECT_THROW((void)clt_johansson(10, 9, 100, RngState{}), DomainError);
  EXPECT_THROW((void)clt_johansson(10, 0, 100, RngState{}), DomainError);
  EXPECT_THROW((void)clt_johansson(10, 2, 99, RngState{}), DomainError);
}

TEST(Clt, Deterministic) {
  const auto a = clt_johansson(20, 3, 150, RngState{85, 0});
  const auto b = clt_johansson(20, 3, 150, RngState{85, 0});
  ASSERT_EQ(a.estimates.size(), b.estimates.size());
  for (std::size_t i = 0; i < a.estimates.size(); ++i) EXPECT_EQ(a.estimates[i].value, b.estimates[i].value);
}

TEST(SofFormula, Examples) {
  EXPECT_DOUBLE_EQ(sof_limit_formula({x()}, {x()}, {x()}, {x()}), 1.0);
  EXPECT_EQ(sof_limit_formula({x()}, {x()}, {x(), x()}, {x(), x()}), 0.0);
  const Polynomial u2({-1, 0, 1});
  EXPECT_DOUBLE_EQ(sof_limit_formula({u2}, {u2}, {u2}, {u2}), 1.0);
  // m = 2 with all entries x: two cyclic alignments each contributing 1.
  EXPECT_DOUBLE_EQ(sof_limit_formula({x(), x()}, {x(), x()}, {x(), x()}, {x(), x()}), 2.0);
}

TEST(SofFormula, RejectsUncenteredInput) {
  const Polynomial sq({0, 0, 1});
  EXPECT_THROW((void)sof_limit_formula({sq}, {x()}, {x()}, {x()}), PreconditionError);
  EXPECT_THROW((void)sof_limit_formula({x()}, {x(), x()}, {x()}, {x()}), StructuralError);
}

TEST(SofFormula, InvariantUnderCyclicShiftOfTildeLists) {
  Rng rng(RngState{86, 0});
  auto centered = [&]() {
    Polynomial p({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    return p - Polynomial::constant(semicircle_trace(p));
  };
  for (std::size_t m = 1; m <= 3; ++m) {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Polynomial> ps, qs, pts, qts;
      for (std::size_t j = 0; j < m; ++j) {
        ps.push_back(centered());
        qs.push_back(centered());
        pts.push_back(centered());
        qts.push_back(centered());
      }
      const double base = sof_limit_formula(ps, qs, pts, qts);
      std::rotate(pts.begin(), pts.begin() + 1, pts.end());
      std::rotate(qts.begin(), qts.begin() + 1, qts.end());
      EXPECT_NEAR(sof_limit_formula(ps, qs, pts, qts), base, 1e-9 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST(SofExperiment, SingleLetterCase) {
  const auto r = sof_experiment({x()}, {x()}, {x()}, {x()}, 60, 800, RngState{87, 0});
  expect_all_pass(r);
  EXPECT_EQ(r.estimate("limit_formula")->value, 1.0);
}

TEST(SofExperiment, MismatchedLengthsVanish) {
  const auto r = sof_experiment({x()}, {x()}, {x(), x()}, {x(), x()}, 50, 600, RngState{88, 0});
  expect_all_pass(r);
  EXPECT_THROW((void)sof_experiment({x()}, {x()}, {x()}, {x()}, 49, 10, RngState{}), DomainError);
}

TEST(XiFluctuations, DegreeTwoFamily) {
  const auto r = xi_fluctuations(0.0, 1.0, 2, 60, 800, RngState{89, 0});
  expect_all_pass(r);
  // T̃₁(x₁), T̃₁(x₂), T̃₂(x₁), T̃₂(x₂), Ũ^{x1x2}
  EXPECT_EQ(r.asserts.size(), 5u * 2 + 10u);
  EXPECT_THROW((void)xi_fluctuations(1.0, 0.0, 2, 10, 10, RngState{}), DomainError);
  EXPECT_THROW((void)xi_fluctuations(0.0, 1.0, 5, 10, 10, RngState{}), DomainError);
}

TEST(Anticoncentration, ClosedForms) {
  EXPECT_EQ(anticoncentration_w(0.5, 1.0 / 3.0, 0.0), 0.25);
  EXPECT_EQ(anticoncentration_w(0.5, 0.25, 0.0), 0.0);
  const double w = anticoncentration_w(0.5, 1.0 / 3.0, 0.1);
  EXPECT_GT(w, 0.0);
  EXPECT_LT(w, 1.0);
  EXPECT_GE(w, 0.1);  // Prob(U ≤ 0.1) for U uniform on [0, 1]
}

TEST(Anticoncentration, Domain) {
  EXPECT_THROW((void)anticoncentration_w(0.0, 1.0, 0.0), DomainError);
  EXPECT_THROW((void)anticoncentration_w(1.0, 0.5, 0.0), DomainError);
  EXPECT_THROW((void)anticoncentration_w(0.5, 1.0 / 3.0, -0.1), DomainError);
  EXPECT_THROW((void)anticoncentration_w(0.5, 1.0 / 3.0, 1.0 / 3.0), DomainError);
}

TEST(Anticoncentration, ContinuousAndInUnitInterval) {
  Rng rng(RngState{90, 0});
  for (int rep = 0; rep < 200; ++rep) {
    const double m1 = 0.1 + rng.uniform();
    const double m2 = m1 * m1 * (1.0 + 3.0 * rng.uniform());
    const double dmax = std::min(m2 / (2 * m1), m1);
    const double d = dmax * 0.98 * rng.uniform();
    const double w = anticoncentration_w(m1, m2, d);
    EXPECT_GE(w, -1e-12);
    EXPECT_LT(w, 1.0);
    const double h = 1e-7;
    EXPECT_NEAR(anticoncentration_w(m1, m2, d + h), w, 1e-4);
    EXPECT_NEAR(anticoncentration_w(m1 + h, m2, d), w, 1e-4);
    EXPECT_NEAR(anticoncentration_w(m1, m2 + h, d), w, 1e-4);
  }
  // δ → 0 approaches the δ = 0 branch
  EXPECT_NEAR(anticoncentration_w(0.5, 1.0 / 3.0, 1e-6), 0.25, 1e-5);
}

TEST(Anticoncentration, EmpiricalBoundHolds) {
  for (auto dist : {TestDistribution::Uniform, TestDistribution::AbsGaussian, TestDistribution::Exponential}) {
    const auto r = anticoncentration_experiment(dist, 10000, 10, RngState{91, 0});
    EXPECT_EQ(r.asserts.size(), 10u);
    expect_all_pass(r);
  }
}

TEST(Edge, HighProbabilityNearSpectrum) {
  const auto r = edge_containment(200, -2.0, 2.0, 0.5, 300, RngState{92, 0});
  EXPECT_GE(r.estimate("probability")->value, 0.98);
  const auto wide = edge_containment(50, 0.0, 4.0, 0.5, 200, RngState{93, 0});
  EXPECT_GE(wide.estimate("probability")->value, 0.98);
  const auto huge = edge_containment(20, -2.0, 2.0, 10.0, 100, RngState{94, 0});
  EXPECT_EQ(huge.estimate("probability")->value, 1.0);
  EXPECT_THROW((void)edge_containment(10, 0.0, 1.0, 0.0, 10, RngState{}), DomainError);
}

TEST(Edge, ScanIsNondecreasing) {
  const auto r = edge_containment_scan({20, 50, 100}, -2.0, 2.0, 0.2, 200, RngState{95, 0});
  expect_all_pass(r);
  EXPECT_EQ(r.estimates.size(), 3u);
}
