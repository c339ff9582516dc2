#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hornfree/linalg.hpp"

namespace hornfree {

/// (I, J, K) ⊆ {1..n}, each strictly increasing of cardinality r, with
/// ΣI + ΣJ = ΣK + r(r+1)/2.
struct HornTriple {
  int n = 0;
  int r = 0;
  std::vector<int> I, J, K;

  friend auto operator<=>(const HornTriple&, const HornTriple&) = default;
  friend bool operator==(const HornTriple&, const HornTriple&) = default;
};

std::string to_string(const HornTriple& t);

/// ∪_{r=1}^{n−1} T^n_r, ordered lexicographically on (r, I, J, K).
struct HornSystem {
  int n = 0;
  std::vector<HornTriple> triples;

  /// Triples of cardinality r (a contiguous range of `triples`).
  [[nodiscard]] std::vector<HornTriple> with_rank(int r) const;
  [[nodiscard]] std::size_t count(int r) const;
};

/// All (I, J, K) with the cardinality-r sum condition (the set U^n_r), in
/// lexicographic order.
std::vector<HornTriple> sum_condition_triples(int n, int r);

/// Horn's recursion. Memoized per n behind a reader/writer lock; the
/// returned system is shared and immutable. n = 1 gives an empty system.
std::shared_ptr<const HornSystem> horn_triples(int n);

/// Drops every memoized system (tests and benchmarks).
void clear_horn_cache();

/// Same as horn_triples but persists each system as `<dir>/T_<n>.json` and
/// reloads it on later calls.
std::shared_ptr<const HornSystem> horn_triples_cached(int n, const std::string& dir);

/// Default directory for the on-disk cache: $HORN_CACHE_DIR or "horn_cache".
std::string default_horn_cache_dir();

struct HornCertificate {
  enum class Kind { Trace, Inequality };
  Kind kind = Kind::Trace;
  std::optional<HornTriple> triple;
  double lhs = 0.0;  // Σα_I + Σβ_J (or Σα + Σβ for the trace)
  double rhs = 0.0;  // Σγ_K (or Σγ)
  int level = 0;     // grid size N at which an eigenvalue-function check failed
};

struct HornVerdict {
  bool member = true;
  std::optional<HornCertificate> violation;
  std::size_t inequalities_checked = 0;
  /// Largest grid size examined (eigenvalue-function checks only).
  int checked_up_to = 0;

  explicit operator bool() const { return member; }
};

/// 1e-9·(1 + largest magnitude among the three sequences).
double default_horn_tolerance(const EigenvalueSequence& a, const EigenvalueSequence& b, const EigenvalueSequence& c);

/// Trace equality plus Σ_I α + Σ_J β ≥ Σ_K γ − tol over horn_triples(N).
HornVerdict horn_membership(const EigenvalueSequence& alpha, const EigenvalueSequence& beta,
                            const EigenvalueSequence& gamma, double tol);
HornVerdict horn_membership(const EigenvalueSequence& alpha, const EigenvalueSequence& beta,
                            const EigenvalueSequence& gamma);

/// Right-continuous nonincreasing step function on [0, 1). Piece i takes
/// `values[i]` on [breakpoints[i], breakpoints[i+1]) with an implicit final
/// endpoint 1. Adjacent equal pieces are merged.
class EigenvalueFunction {
 public:
  EigenvalueFunction(std::vector<double> breakpoints, std::vector<double> values);

  [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::size_t steps() const { return values_.size(); }

  double operator()(double t) const;
  /// ∫_a^b λ(t) dt for 0 ≤ a ≤ b ≤ 1.
  [[nodiscard]] double integral(double a, double b) const;
  [[nodiscard]] double integral() const { return integral(0.0, 1.0); }

  friend bool operator==(const EigenvalueFunction&, const EigenvalueFunction&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// λ(t) = s_j on [(j−1)/N, j/N).
EigenvalueFunction eigfun_from_seq(const EigenvalueSequence& s);

/// Averages of w over the n intervals [(i−1)/n, i/n).
EigenvalueSequence coarsen(const EigenvalueFunction& w, std::size_t n);

/// ∫ u over ∪_{i∈F} [(i−1)/N, i/N); F holds 1-based indices.
double sigma_integral(const EigenvalueFunction& u, const std::vector<int>& F, int N);

/// 4 × the number of steps of w.
int default_fuv_levels(const EigenvalueFunction& w);

/// Necessary conditions for w ∈ F_{u,v}: the integral trace equality and
/// every σ-set Horn inequality for grid sizes 2..N_max.
HornVerdict fuv_membership(const EigenvalueFunction& u, const EigenvalueFunction& v, const EigenvalueFunction& w,
                           int N_max, double tol);

}  // namespace hornfree
