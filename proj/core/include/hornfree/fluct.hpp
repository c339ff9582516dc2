#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hornfree/chebyshev.hpp"
#include "hornfree/linalg.hpp"
#include "hornfree/rng.hpp"

namespace hornfree {

struct Estimate {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

/// One pass/fail gate: passes iff lo ≤ value ≤ hi.
struct Assertion {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t N = 0;
  std::size_t samples = 0;
  std::vector<Estimate> estimates;
  std::vector<Assertion> asserts;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] const Estimate* estimate(const std::string& name) const;
  [[nodiscard]] const Assertion* assertion(const std::string& name) const;

  void add_estimate(std::string name, double value, double std_error);
  /// Records lo ≤ value ≤ hi.
  void check(std::string name, double value, double lo, double hi);
};

// ---------------------------------------------------------------- sample statistics

struct MomentSummary {
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;  // unbiased
  double variance_se = 0.0;
};

MomentSummary summarize(const std::vector<double>& xs);

/// Sample covariance and its standard error (from the spread of the centred
/// products).
std::pair<double, double> covariance_with_se(const std::vector<double>& xs, const std::vector<double>& ys);

/// Binomial proportion k/n with the add-two-successes-two-failures standard
/// error, which stays positive at k = 0 and k = n.
std::pair<double, double> proportion_with_se(std::size_t successes, std::size_t n);

// ---------------------------------------------------------------- traces

/// Tr X^k for k = 0..kmax from the matrix powers X^1..X^⌈kmax/2⌉ and
/// Tr X^{a+b} = Tr(X^a X^b).
std::vector<double> power_traces(const HermitianMatrix& x, unsigned kmax);

/// Tr p(X) assembled from power traces.
double trace_poly_power_path(const Polynomial& p, const std::vector<double>& power_traces);

/// Tr T_n(X) by the matrix three-term recurrence T_{k+1}(X) = X T_k(X) − T_{k−1}(X).
double trace_chebyshev_recursion_path(const HermitianMatrix& x, unsigned n);

/// Σ_i T_n(λ_i) from the eigenvalues.
double trace_chebyshev_eigen_path(const HermitianMatrix& x, unsigned n);

// ---------------------------------------------------------------- experiments

/// Fluctuations z_n = (Tr T_n(X) − N α_n)/√n, n = 1..m, of GUE traces with
/// the monic T_n. This equals 2(Tr T̂_n(X) − N α̂_n)/√n for the half-scale
/// family T̂_n(x) = T_n(x)/2 = cos(nθ) at x = 2cosθ, whose limit is a vector
/// of independent standard Gaussians. Gates: variance in [0.8, 1.2],
/// |mean| ≤ 0.15, |covariance| ≤ 0.15.
ExperimentReport clt_johansson(std::size_t N, unsigned m, std::size_t samples, const RngState& rng);

/// Limit of E[Tr(p₁(X)q₁(Y)⋯) · conj(Tr(p̃₁(X)q̃₁(Y)⋯))] for independent GUE
/// X, Y: Σ_ℓ Π_j τ(p_j p̃_{j+ℓ}) τ(q_j q̃_{j+ℓ}) when the lengths agree, else
/// 0. Every polynomial must be centred under the semicircle law.
double sof_limit_formula(const std::vector<Polynomial>& ps, const std::vector<Polynomial>& qs,
                         const std::vector<Polynomial>& pts, const std::vector<Polynomial>& qts);

/// Monte Carlo check of sof_limit_formula, the vanishing first-order limit
/// E tr(p₁(X)q₁(Y)⋯), and E[Tr(p₁(X)q₁(Y)⋯)·Tr(r(X or Y))] → 0; each gate is
/// a 3-standard-error band. Requires N ≥ 50.
ExperimentReport sof_experiment(const std::vector<Polynomial>& ps, const std::vector<Polynomial>& qs,
                                const std::vector<Polynomial>& pts, const std::vector<Polynomial>& qts,
                                std::size_t N, std::size_t samples, const RngState& rng,
                                const Polynomial& r = Polynomial({0.0, 1.0}));

/// Centred traces Tr(y(A, B)) − N β(y) for every Ξ element y ≠ 1 of degree
/// ≤ max_degree (≤ 4), with A, B independent shifted GUE on [u, v].
ExperimentReport xi_fluctuations(double u, double v, std::size_t max_degree, std::size_t N, std::size_t samples,
                                 const RngState& rng);

/// Bound w with Prob(y ≤ δ) ≤ w for y ≥ 0 with moments m₁ > 0, m₂ ≥ m₁²,
/// valid for 0 ≤ δ < min(m₂/(2m₁), m₁).
double anticoncentration_w(double m1, double m2, double delta);

enum class TestDistribution { Uniform, AbsGaussian, Exponential };

std::string to_string(TestDistribution d);

/// Empirical Prob(y ≤ δ) ≤ w(m̂₁, m̂₂, δ) + 2 SE on a `grid`-point δ-grid
/// covering [0, min(m̂₂/(2m̂₁), m̂₁)).
ExperimentReport anticoncentration_experiment(TestDistribution dist, std::size_t samples, std::size_t grid,
                                              const RngState& rng);

/// Fraction of shifted GUE draws with spectrum in [u − margin, v + margin].
ExperimentReport edge_containment(std::size_t N, double u, double v, double margin, std::size_t samples,
                                  const RngState& rng);

/// edge_containment over increasing dimensions with the gate that the
/// probability is nondecreasing within two combined standard errors.
ExperimentReport edge_containment_scan(const std::vector<std::size_t>& dims, double u, double v, double margin,
                                       std::size_t samples, const RngState& rng);

}  // namespace hornfree
