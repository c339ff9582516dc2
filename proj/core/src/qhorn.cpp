#include "hornfree/qhorn.hpp"

#include <cmath>
#include <string>

#include "hornfree/errors.hpp"
#include "hornfree/parallel.hpp"

namespace hornfree {

void QuantumHornSpec::validate() const {
  if (a1.dim() == 0 || a1.dim() != a2.dim()) throw StructuralError("QuantumHornSpec: a1 and a2 must share a dimension");
  if (alpha.empty() || alpha.size() != beta.size())
    throw StructuralError("QuantumHornSpec: alpha and beta must share a nonzero length");
  if (d < 1) throw StructuralError("QuantumHornSpec: multiplicity d must be positive");
}

std::size_t QuantumHornSpec::sample_size() const { return a1.dim() * alpha.size() * d; }

HermitianMatrix quantum_horn_matrix(const QuantumHornSpec& spec, const UnitaryMatrix& u, const UnitaryMatrix& v) {
  spec.validate();
  const auto da = HermitianMatrix::diagonal(dilate(spec.alpha, spec.d).values());
  const auto db = HermitianMatrix::diagonal(dilate(spec.beta, spec.d).values());
  return kron(spec.a1, conjugate(u, da)) + kron(spec.a2, conjugate(v, db));
}

SampleCloud qhorn_sample(const QuantumHornSpec& spec, std::size_t count, const RngState& rng, UnitaryMode mode) {
  spec.validate();
  if (count < 1) throw DomainError("qhorn_sample: count must be positive");
  const std::size_t m = spec.alpha.size() * spec.d;
  SampleCloud cloud{spec, rng, std::vector<CloudSample>(count)};
  parallel_for(count, [&](std::size_t i) {
    Rng r(rng.substream(i));
    UnitaryMatrix u = mode == UnitaryMode::Haar ? haar_unitary(m, r) : UnitaryMatrix::identity(m);
    UnitaryMatrix v = mode == UnitaryMode::Haar ? haar_unitary(m, r) : UnitaryMatrix::identity(m);
    cloud.samples[i] = CloudSample{i, eigenvalues(quantum_horn_matrix(spec, u, v))};
  });
  return cloud;
}

// ---------------------------------------------------------------- worked example

double example_k_threshold() {
  return static_cast<double>(1.5L * std::sqrt(65.0L) - 11.5L);
}

HermitianMatrix example_k_matrix(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("example_k: t must lie in [0, 1]");
  const double off = std::sqrt(t * (1.0 - t));
  const double a1[] = {1, 0, 0, 4};
  const double x1[] = {1, 0, 0, 2};
  const double a2[] = {2, 0, 0, 1};
  const double x2[] = {1 + t, off, off, 2 - t};
  return kron(HermitianMatrix::from_real(2, a1), HermitianMatrix::from_real(2, x1)) +
         kron(HermitianMatrix::from_real(2, a2), HermitianMatrix::from_real(2, x2));
}

ExampleK example_k(double t) {
  const HermitianMatrix r = example_k_matrix(t);
  const double big = std::sqrt(25.0 - 16.0 * t);
  const double small = std::sqrt(9.0 - 8.0 * t);
  const double upper_a = 7.5 + 0.5 * big;
  const double lower_a = 7.5 - 0.5 * big;
  const double upper_b = 4.5 + 0.5 * small;
  const double lower_b = 4.5 - 0.5 * small;
  std::vector<double> analytic;
  if (t <= example_k_threshold()) {
    analytic = {upper_a, upper_b, lower_a, lower_b};
  } else {
    analytic = {upper_a, lower_a, upper_b, lower_b};
  }
  // The branch formulas agree at t₁, so a rounding-level inversion there is
  // resolved by sorting.
  return ExampleK{EigenvalueSequence::from_unsorted(std::move(analytic)), eigenvalues(r)};
}

double example_k_crossing() {
  auto gap = [](double t) {
    const auto e = eigenvalues(example_k_matrix(t));
    return e[1] - e[2];
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = gap(x1);
  double f2 = gap(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = gap(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = gap(x2);
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<CurvePoint> figure1_curve(std::size_t grid) {
  if (grid < 2) throw DomainError("figure1_curve: grid must have at least 2 points");
  std::vector<CurvePoint> out;
  out.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = i + 1 == grid ? 1.0 : static_cast<double>(i) / static_cast<double>(grid - 1);
    out.push_back(CurvePoint{t, example_k(t).analytic.values()});
  }
  return out;
}

// ---------------------------------------------------------------- inclusion

InclusionVerdict inclusion_check(const SampleCloud& cloud, double tol, bool allow_large) {
  const auto& spec = cloud.spec;
  spec.validate();
  const std::size_t size = spec.sample_size();
  if (size > kInclusionSizeGuard && !allow_large)
    throw FeasibilityError("inclusion_check: n·N·d = " + std::to_string(size) + " exceeds the guard of " +
                           std::to_string(kInclusionSizeGuard));
  InclusionVerdict verdict;
  verdict.a_side = tensor_product(eigenvalues(spec.a1), dilate(spec.alpha, spec.d));
  verdict.b_side = tensor_product(eigenvalues(spec.a2), dilate(spec.beta, spec.d));
  for (const auto& s : cloud.samples) {
    if (s.gamma.size() != size) throw StructuralError("inclusion_check: sample length does not match the spec");
    auto v = horn_membership(verdict.a_side, verdict.b_side, s.gamma, tol);
    ++verdict.checked;
    if (!v.member) {
      verdict.passed = false;
      verdict.failing_idx = s.idx;
      verdict.certificate = v.violation;
      return verdict;
    }
  }
  return verdict;
}

// ---------------------------------------------------------------- block scaling

std::pair<double, double> block_window(double K, int i) {
  return {2.0 * std::pow(K, 4.0 * i), 2.0 * std::pow(K, 4.0 * i + 3.0)};
}

BlockPair block_scale_construction(const std::vector<BlockPair>& blocks, double K) {
  if (!(K > 1.0)) throw PreconditionError("block_scale_construction: K must exceed 1");
  if (blocks.empty()) throw PreconditionError("block_scale_construction: need at least one block");
  std::size_t total = 0;
  const double slack = 1e-12 * K * K;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.a1.dim() != b.a2.dim()) throw StructuralError("block_scale_construction: block pair dimensions differ");
    if (!spectrum_within(b.a1, K, K * K, slack) || !spectrum_within(b.a2, K, K * K, slack))
      throw PreconditionError("block_scale_construction: block " + std::to_string(i + 1) +
                              " has spectrum outside [K, K^2]");
    total += b.a1.dim();
  }
  Matrix m1(total, total);
  Matrix m2(total, total);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double scale = std::pow(K, 4.0 * static_cast<double>(i + 1));
    const std::size_t n = blocks[i].a1.dim();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        m1(offset + r, offset + c) = scale * blocks[i].a1.matrix()(r, c);
        m2(offset + r, offset + c) = scale * blocks[i].a2.matrix()(r, c);
      }
    offset += n;
  }
  return BlockPair{HermitianMatrix::symmetrized(std::move(m1)), HermitianMatrix::symmetrized(std::move(m2))};
}

EigenvalueSequence spectral_window_cut(const HermitianMatrix& h, double lo, double hi) {
  if (!(lo < hi)) throw DomainError("spectral_window_cut: requires lo < hi");
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> kept;
  for (double x : eigenvalues(h))
    if (x >= lo - slack && x <= hi + slack) kept.push_back(x);
  return EigenvalueSequence(std::move(kept));
}

// ---------------------------------------------------------------- microstates

namespace {

template <class Visit>
void for_each_word(std::size_t m, Visit visit) {
  for (std::size_t deg = 1; deg <= m; ++deg) {
    std::vector<int> digits(deg, 1);
    while (true) {
      visit(Word(digits));
      std::size_t pos = deg;
      while (pos > 0 && digits[pos - 1] == 2) digits[--pos] = 1;
      if (pos == 0) break;
      ++digits[pos - 1];
    }
  }
}

}  // namespace

std::map<Word, Complex> trace_moments(const HermitianMatrix& a1, const HermitianMatrix& a2, std::size_t m) {
  if (a1.dim() != a2.dim()) throw StructuralError("trace_moments: dimension mismatch");
  const HermitianMatrix mats[2] = {a1, a2};
  std::map<Word, Complex> out;
  for_each_word(m, [&](const Word& w) { out.emplace(w, trace_eval(NCPoly::word(w), mats, true)); });
  return out;
}

double microstate_defect(const std::map<Word, Complex>& target, const HermitianMatrix& cand1,
                         const HermitianMatrix& cand2, std::size_t m) {
  if (m < 1) throw DomainError("microstate_defect: m must be at least 1");
  if (cand1.dim() != cand2.dim()) throw StructuralError("microstate_defect: candidate dimensions differ");
  const HermitianMatrix mats[2] = {cand1, cand2};
  double worst = 0.0;
  for_each_word(m, [&](const Word& w) {
    auto it = target.find(w);
    if (it == target.end()) throw StructuralError("microstate_defect: target has no moment for " + w.to_string());
    worst = std::max(worst, std::abs(trace_eval(NCPoly::word(w), mats, true) - it->second));
  });
  return worst;
}

}  // namespace hornfree
