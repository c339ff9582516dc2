#include <gtest/gtest.h>

#include <cmath>

#include "hornfree/errors.hpp"
#include "hornfree/qhorn.hpp"
#include "test_support.hpp"

using namespace hornfree;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) { return HermitianMatrix::diagonal(std::vector<double>(d)); }

EigenvalueSequence random_sequence(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return EigenvalueSequence::from_unsorted(v);
}

// Hermitian matrix with spectrum uniform in [lo, hi], in a random basis.
HermitianMatrix random_with_spectrum(std::size_t n, double lo, double hi, Rng& rng) {
  std::vector<double> d(n);
  for (auto& x : d) x = lo + (hi - lo) * rng.uniform();
  return conjugate(haar_unitary(n, rng), HermitianMatrix::diagonal(d));
}

double det3(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

}  // namespace

TEST(QuantumHornSpec, Validation) {
  QuantumHornSpec s{diag({1}), diag({1, 2}), EigenvalueSequence({1}), EigenvalueSequence({1}), 1};
  EXPECT_THROW(s.validate(), StructuralError);
  s.a2 = diag({2});
  s.beta = EigenvalueSequence({1, 0});
  EXPECT_THROW(s.validate(), StructuralError);
  s.beta = EigenvalueSequence({1});
  s.d = 0;
  EXPECT_THROW(s.validate(), StructuralError);
}

TEST(QHornSample, ScalarSpecIsClassicalHorn) {
  Rng rng(RngState{61, 0});
  const auto alpha = random_sequence(rng, 3);
  const auto beta = random_sequence(rng, 3);
  const QuantumHornSpec spec{diag({1}), diag({1}), alpha, beta, 1};
  const auto cloud = qhorn_sample(spec, 200, RngState{62, 0});
  ASSERT_EQ(cloud.samples.size(), 200u);
  for (const auto& s : cloud.samples) EXPECT_TRUE(horn_membership(alpha, beta, s.gamma).member);
}

TEST(QHornSample, DegenerateMergeIsConcatenation) {
  Rng rng(RngState{63, 0});
  const auto alpha = random_sequence(rng, 3);
  const auto beta = random_sequence(rng, 3);
  const QuantumHornSpec spec{diag({1, 0}), diag({0, 1}), alpha, beta, 1};
  std::vector<double> concat = alpha.values();
  concat.insert(concat.end(), beta.begin(), beta.end());
  const auto expected = EigenvalueSequence::from_unsorted(concat);
  for (const auto& s : qhorn_sample(spec, 50, RngState{64, 0}).samples)
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(s.gamma[i], expected[i], 1e-10);
}

TEST(QHornSample, IdentityModeIsDiagonalSum) {
  const QuantumHornSpec spec{diag({1, 4}), diag({2, 1}), EigenvalueSequence({2, 1}), EigenvalueSequence({1, -1}), 2};
  const auto cloud = qhorn_sample(spec, 3, RngState{65, 0}, UnitaryMode::Identity);
  // diagonal entries a1_i α_j + a2_i β_j, each twice
  std::vector<double> expected;
  for (double a1 : {1.0, 4.0})
    for (auto [al, be] : {std::pair{2.0, 1.0}, std::pair{1.0, -1.0}}) {
      const double a2 = a1 == 1.0 ? 2.0 : 1.0;
      expected.push_back(a1 * al + a2 * be);
      expected.push_back(a1 * al + a2 * be);
    }
  const auto e = EigenvalueSequence::from_unsorted(expected);
  for (const auto& s : cloud.samples) {
    ASSERT_EQ(s.gamma.size(), 8u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(s.gamma[i], e[i], 1e-12);
  }
}

TEST(QHornSample, TraceIdentity) {
  Rng rng(RngState{66, 0});
  const auto a1 = random_hermitian(2, rng), a2 = random_hermitian(2, rng);
  const auto alpha = random_sequence(rng, 2), beta = random_sequence(rng, 2);
  const QuantumHornSpec spec{a1, a2, alpha, beta, 2};
  for (const auto& s : qhorn_sample(spec, 30, RngState{67, 0}).samples) {
    const double expected = a1.trace() * alpha.sum() * 2 + a2.trace() * beta.sum() * 2;
    EXPECT_NEAR(s.gamma.sum(), expected, 1e-8);
  }
}

TEST(QHornSample, DeterministicAndIndexed) {
  const QuantumHornSpec spec{diag({1}), diag({1}), EigenvalueSequence({1, 0}), EigenvalueSequence({1, 0}), 1};
  const auto a = qhorn_sample(spec, 20, RngState{68, 0});
  const auto b = qhorn_sample(spec, 20, RngState{68, 0});
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(a.samples[i].idx, i);
    EXPECT_EQ(a.samples[i].gamma, b.samples[i].gamma);
  }
  EXPECT_THROW((void)qhorn_sample(spec, 0, RngState{68, 0}), DomainError);
}

TEST(QHornSample, ConjugationInvarianceOfLaw) {
  Rng rng(RngState{69, 0});
  const auto a1 = random_hermitian(2, rng), a2 = random_hermitian(2, rng);
  const auto w = haar_unitary(2, rng);
  const auto alpha = random_sequence(rng, 2), beta = random_sequence(rng, 2);
  const QuantumHornSpec plain{a1, a2, alpha, beta, 1};
  const QuantumHornSpec rotated{conjugate(w, a1), conjugate(w, a2), alpha, beta, 1};
  const auto ca = qhorn_sample(plain, 4000, RngState{70, 0});
  const auto cb = qhorn_sample(rotated, 4000, RngState{71, 0});
  std::vector<double> xa, xb;
  for (const auto& s : ca.samples) xa.push_back(s.gamma[0]);
  for (const auto& s : cb.samples) xb.push_back(s.gamma[0]);
  EXPECT_LT(testing_support::ks_statistic(xa, xb), 0.05);
}

TEST(QHornSample, DilationSupportsAgreeUnderIdentity) {
  // (α, β, d) and (α⊗1_d, β⊗1_d, 1) give the same eigenvalue function.
  const auto a1 = diag({2, 1}), a2 = diag({1, 3});
  const EigenvalueSequence alpha({3, 1}), beta({2, -1});
  const QuantumHornSpec dilated{a1, a2, alpha, beta, 3};
  const QuantumHornSpec flat{a1, a2, dilate(alpha, 3), dilate(beta, 3), 1};
  const auto x = qhorn_sample(dilated, 1, RngState{72, 0}, UnitaryMode::Identity).samples[0].gamma;
  const auto y = qhorn_sample(flat, 1, RngState{72, 0}, UnitaryMode::Identity).samples[0].gamma;
  EXPECT_EQ(eigfun_from_seq(x), eigfun_from_seq(y));
}

TEST(ExampleK, Endpoints) {
  EXPECT_EQ(example_k(0.0).analytic, EigenvalueSequence({10, 6, 5, 3}));
  EXPECT_EQ(example_k(1.0).analytic, EigenvalueSequence({9, 6, 5, 4}));
  const auto n0 = example_k(0.0).numeric;
  const double expected[] = {10, 6, 5, 3};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(n0[i], expected[i], 1e-12);
  EXPECT_THROW((void)example_k(-0.1), DomainError);
  EXPECT_THROW((void)example_k(1.1), DomainError);
}

TEST(ExampleK, AnalyticMatchesNumericOnGrid) {
  for (int i = 0; i <= 100; ++i) {
    const auto e = example_k(i / 100.0);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(e.analytic[k], e.numeric[k], 1e-9) << "t=" << i / 100.0;
  }
}

TEST(ExampleK, BranchCrossing) {
  const double t1 = example_k_threshold();
  EXPECT_NEAR(t1, 0.593, 5e-4);
  const auto e = example_k(t1);
  EXPECT_LE(std::abs(e.numeric[1] - e.numeric[2]), 1e-8);
  EXPECT_NEAR(example_k_crossing(), t1, 1e-6);
}

TEST(Figure1, Endpoints) {
  const auto curve = figure1_curve(101);
  ASSERT_EQ(curve.size(), 101u);
  EXPECT_EQ(curve.front().t, 0.0);
  EXPECT_EQ(curve.back().t, 1.0);
  EXPECT_EQ(curve.front().lambda[2], 5.0);
  EXPECT_EQ(curve.front().lambda[3], 3.0);
  EXPECT_EQ(curve.back().lambda[2], 5.0);
  EXPECT_EQ(curve.back().lambda[3], 4.0);
  EXPECT_THROW((void)figure1_curve(1), DomainError);
}

TEST(Figure1, UpperPartIsSegmentLowerIsNot) {
  const double t1 = example_k_threshold();
  auto pt = [](double t) {
    const auto e = example_k(t).analytic;
    return std::pair{e[2], e[3]};
  };
  // past the crossing λ₃ + λ₄ = 9
  const auto [ax, ay] = pt(t1 + 0.05);
  const auto [bx, by] = pt(0.8);
  const auto [cx, cy] = pt(0.99);
  EXPECT_LE(std::abs(det3(ax, ay, bx, by, cx, cy)), 1e-9);
  EXPECT_NEAR(ax + ay, 9.0, 1e-12);
  // before it the points bend
  const auto [dx, dy] = pt(0.0);
  const auto [ex, ey] = pt(0.3);
  const auto [fx, fy] = pt(0.55);
  EXPECT_GT(std::abs(det3(dx, dy, ex, ey, fx, fy)), 1e-6);
}

TEST(Inclusion, ExampleKSpecPasses) {
  const QuantumHornSpec spec{diag({1, 4}), diag({2, 1}), EigenvalueSequence({2, 1}), EigenvalueSequence({2, 1}), 1};
  const auto cloud = qhorn_sample(spec, 200, RngState{73, 0});
  const auto v = inclusion_check(cloud, 1e-9);
  EXPECT_TRUE(v.passed);
  EXPECT_EQ(v.checked, 200u);
  EXPECT_EQ(v.a_side, EigenvalueSequence({8, 4, 2, 1}));
}

TEST(Inclusion, ExampleKMatricesPass) {
  // R_t is exactly of the sampled form with α = β = (2, 1), so its spectrum
  // must pass for every t.
  const QuantumHornSpec spec{diag({1, 4}), diag({2, 1}), EigenvalueSequence({2, 1}), EigenvalueSequence({2, 1}), 1};
  SampleCloud cloud{spec, RngState{}, {}};
  for (int i = 0; i <= 20; ++i) cloud.samples.push_back({static_cast<std::uint64_t>(i), example_k(i / 20.0).numeric});
  EXPECT_TRUE(inclusion_check(cloud, 1e-9).passed);
}

TEST(Inclusion, ScalarSpec) {
  const QuantumHornSpec spec{diag({1}), diag({1}), EigenvalueSequence({3, 1, 0}), EigenvalueSequence({1, 1, -2}), 1};
  EXPECT_TRUE(inclusion_check(qhorn_sample(spec, 100, RngState{74, 0}), 1e-9).passed);
}

TEST(Inclusion, PerturbedSampleFails) {
  const QuantumHornSpec spec{diag({1, 4}), diag({2, 1}), EigenvalueSequence({2, 1}), EigenvalueSequence({2, 1}), 1};
  auto cloud = qhorn_sample(spec, 5, RngState{75, 0});
  auto bumped = cloud.samples[3].gamma.values();
  bumped[0] += 0.1;
  cloud.samples[3].gamma = EigenvalueSequence(bumped);
  const auto v = inclusion_check(cloud, 1e-9);
  EXPECT_FALSE(v.passed);
  EXPECT_EQ(v.failing_idx, 3u);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_EQ(v.certificate->kind, HornCertificate::Kind::Trace);
}

TEST(Inclusion, SizeGuard) {
  const QuantumHornSpec spec{diag({1, 2}), diag({2, 1}), EigenvalueSequence({2, 1}), EigenvalueSequence({2, 1}), 2};
  const auto cloud = qhorn_sample(spec, 2, RngState{76, 0});
  EXPECT_THROW((void)inclusion_check(cloud, 1e-9), FeasibilityError);
  EXPECT_TRUE(inclusion_check(cloud, 1e-9, true).passed);
}

TEST(BlockScale, SingleBlockAndScales) {
  const double K = 2.0;
  const auto b1 = BlockPair{diag({2, 3}), diag({4, 2.5})};
  const auto one = block_scale_construction({b1}, K);
  EXPECT_EQ(one.a1.matrix()(0, 0), Complex(32.0));
  EXPECT_EQ(one.a2.matrix()(1, 1), Complex(40.0));
  const auto two = block_scale_construction({b1, BlockPair{diag({2}), diag({4})}}, K);
  EXPECT_EQ(two.a1.dim(), 3u);
  EXPECT_EQ(two.a1.matrix()(2, 2), Complex(512.0));
  EXPECT_EQ(two.a2.matrix()(2, 2), Complex(1024.0));
  EXPECT_EQ(two.a1.matrix()(0, 2), Complex(0.0));
}

TEST(BlockScale, Preconditions) {
  EXPECT_THROW((void)block_scale_construction({BlockPair{diag({2}), diag({2})}}, 1.0), PreconditionError);
  EXPECT_THROW((void)block_scale_construction({BlockPair{diag({5}), diag({2})}}, 2.0), PreconditionError);
  EXPECT_THROW((void)block_scale_construction({BlockPair{diag({1.5}), diag({2})}}, 2.0), PreconditionError);
}

TEST(BlockScale, WindowsAreDisjointAndCutRecoversBlocks) {
  Rng rng(RngState{77, 0});
  const double K = 2.0;
  std::vector<BlockPair> blocks;
  for (std::size_t n : {2u, 3u}) blocks.push_back({random_with_spectrum(n, K, K * K, rng), random_with_spectrum(n, K, K * K, rng)});
  const auto x1 = random_with_spectrum(2, 1.0 / K, K, rng);
  const auto x2 = random_with_spectrum(2, 1.0 / K, K, rng);
  const auto big = block_scale_construction(blocks, K);
  const auto h = kron(big.a1, x1) + kron(big.a2, x2);
  std::size_t seen = 0;
  for (int i = 1; i <= 2; ++i) {
    const auto [lo, hi] = block_window(K, i);
    if (i == 1) EXPECT_LT(hi, block_window(K, 2).first);
    const double s = std::pow(K, 4.0 * i);
    const auto block = kron(s * blocks[i - 1].a1, x1) + kron(s * blocks[i - 1].a2, x2);
    const auto expected = eigenvalues(block);
    const auto cut = spectral_window_cut(h, lo, hi);
    ASSERT_EQ(cut.size(), expected.size());
    for (std::size_t k = 0; k < cut.size(); ++k) EXPECT_NEAR(cut[k], expected[k], 1e-9 * std::max(1.0, expected[0]));
    seen += cut.size();
  }
  EXPECT_EQ(seen, h.dim());
}

TEST(WindowCut, Examples) {
  const auto h = diag({1, 5, 9});
  EXPECT_EQ(spectral_window_cut(h, 4, 6), EigenvalueSequence({5}));
  EXPECT_EQ(spectral_window_cut(h, -100, 100), EigenvalueSequence({9, 5, 1}));
  EXPECT_TRUE(spectral_window_cut(h, 6, 8).empty());
  EXPECT_EQ(spectral_window_cut(h, 5, 9), EigenvalueSequence({9, 5}));
  EXPECT_THROW((void)spectral_window_cut(h, 2, 2), DomainError);
}

TEST(Microstate, SelfTargetHasZeroDefect) {
  Rng rng(RngState{78, 0});
  const auto a = random_hermitian(3, rng), b = random_hermitian(3, rng);
  const auto target = trace_moments(a, b, 4);
  EXPECT_EQ(target.size(), 2u + 4u + 8u + 16u);
  EXPECT_LE(microstate_defect(target, a, b, 4), 1e-12);
  EXPECT_EQ(microstate_defect(trace_moments(diag({1, 0}), diag({0, 1}), 3), diag({1, 0}), diag({0, 1}), 3), 0.0);
}

TEST(Microstate, ConjugatedCopiesDifferOnlyInMixedWord) {
  Rng rng(RngState{79, 0});
  const auto x1 = diag({1, 0, 0.5}), x2 = diag({0, 1, 0.25});
  const auto target = trace_moments(x1, x2, 2);
  const auto a1 = conjugate(haar_unitary(3, rng), x1);
  const auto a2 = conjugate(haar_unitary(3, rng), x2);
  const double mixed = std::abs((a1.matrix() * a2.matrix()).trace() / 3.0 - (x1.matrix() * x2.matrix()).trace() / 3.0);
  EXPECT_NEAR(microstate_defect(target, a1, a2, 2), mixed, 1e-12);
}

TEST(Microstate, MissingMoment) {
  const auto target = trace_moments(diag({1}), diag({2}), 1);
  EXPECT_THROW((void)microstate_defect(target, diag({1}), diag({2}), 2), StructuralError);
}
