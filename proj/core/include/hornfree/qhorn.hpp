#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hornfree/horn.hpp"
#include "hornfree/linalg.hpp"
#include "hornfree/ncwords.hpp"
#include "hornfree/rng.hpp"

namespace hornfree {

/// Data (a₁, a₂, α, β, d) of the matrices
///   a₁ ⊗ U(diag α ⊗ 1_d)U* + a₂ ⊗ V(diag β ⊗ 1_d)V*.
struct QuantumHornSpec {
  HermitianMatrix a1;
  HermitianMatrix a2;
  EigenvalueSequence alpha;
  EigenvalueSequence beta;
  std::size_t d = 1;

  /// Throws StructuralError on mismatched sizes.
  void validate() const;
  /// n·N·d.
  [[nodiscard]] std::size_t sample_size() const;
};

struct CloudSample {
  std::uint64_t idx = 0;
  EigenvalueSequence gamma;
};

struct SampleCloud {
  QuantumHornSpec spec;
  RngState rng;  // sample idx used rng.substream(idx)
  std::vector<CloudSample> samples;
};

enum class UnitaryMode {
  Haar,
  Identity,  // U = V = 1, for deterministic checks
};

/// The Hermitian matrix for fixed unitaries U, V of size N·d.
HermitianMatrix quantum_horn_matrix(const QuantumHornSpec& spec, const UnitaryMatrix& u, const UnitaryMatrix& v);

/// `count` spectra with fresh Haar (or identity) U, V per sample.
SampleCloud qhorn_sample(const QuantumHornSpec& spec, std::size_t count, const RngState& rng,
                         UnitaryMode mode = UnitaryMode::Haar);

// ---------------------------------------------------------------- worked example

/// (3/2)√65 − 23/2, evaluated in long double.
double example_k_threshold();

/// R_t = diag(1,4) ⊗ diag(1,2) + diag(2,1) ⊗ [[1+t, √(t(1−t))], [√(t(1−t)), 2−t]].
HermitianMatrix example_k_matrix(double t);

struct ExampleK {
  EigenvalueSequence analytic;  // closed forms with the branch swap at t₁
  EigenvalueSequence numeric;   // eig_hermitian(R_t)
};

/// Requires 0 ≤ t ≤ 1.
ExampleK example_k(double t);

/// Locates the crossing λ₂(t) = λ₃(t) of the numeric spectrum by golden
/// section search on the gap λ₂ − λ₃.
double example_k_crossing();

struct CurvePoint {
  double t = 0.0;
  std::vector<double> lambda;  // λ₁..λ₄
};

/// Uniform grid of `grid` points on [0, 1]; analytic eigenvalues per point.
std::vector<CurvePoint> figure1_curve(std::size_t grid);

// ---------------------------------------------------------------- inclusion

struct InclusionVerdict {
  bool passed = true;
  std::size_t checked = 0;
  std::optional<std::uint64_t> failing_idx;
  std::optional<HornCertificate> certificate;
  EigenvalueSequence a_side;  // γ₁ ⊗ (α ⊗ 1_d)
  EigenvalueSequence b_side;  // γ₂ ⊗ (β ⊗ 1_d)
};

inline constexpr std::size_t kInclusionSizeGuard = 6;

/// Every sample must lie in the Horn body of (γ₁⊗α, γ₂⊗β). Throws
/// FeasibilityError when n·N·d exceeds the guard unless `allow_large`.
InclusionVerdict inclusion_check(const SampleCloud& cloud, double tol, bool allow_large = false);

// ---------------------------------------------------------------- block scaling

struct BlockPair {
  HermitianMatrix a1;
  HermitianMatrix a2;
};

/// a_j = ⊕_i K^{4i} a_j^i (i = 1..m). Every block must have spectrum in
/// [K, K²] and K must exceed 1; otherwise PreconditionError.
BlockPair block_scale_construction(const std::vector<BlockPair>& blocks, double K);

/// Closed window [lo, hi] for block i (1-based): [2K^{4i}, 2K^{4i+3}].
std::pair<double, double> block_window(double K, int i);

/// Nonincreasing eigenvalues of H inside [lo, hi] (1e-12 relative slack).
EigenvalueSequence spectral_window_cut(const HermitianMatrix& h, double lo, double hi);

// ---------------------------------------------------------------- microstates

/// Normalized trace moments tr(w(a₁, a₂)) for all words 1 ≤ deg(w) ≤ m.
std::map<Word, Complex> trace_moments(const HermitianMatrix& a1, const HermitianMatrix& a2, std::size_t m);

/// max over words 1 ≤ deg(w) ≤ m of |tr(w(c₁, c₂)) − target(w)|. Throws
/// StructuralError when the target lacks a moment.
double microstate_defect(const std::map<Word, Complex>& target, const HermitianMatrix& cand1,
                         const HermitianMatrix& cand2, std::size_t m);

}  // namespace hornfree
