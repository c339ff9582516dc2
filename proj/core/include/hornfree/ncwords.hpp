#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hornfree/chebyshev.hpp"
#include "hornfree/linalg.hpp"
#include "hornfree/rng.hpp"

namespace hornfree {

/// Word in the free monoid on letters 1..k. The empty word is the unit.
struct Word {
  std::vector<int> letters;

  Word() = default;
  Word(std::initializer_list<int> l) : letters(l) {}
  explicit Word(std::vector<int> l) : letters(std::move(l)) {}

  [[nodiscard]] std::size_t degree() const { return letters.size(); }
  [[nodiscard]] bool empty() const { return letters.empty(); }
  [[nodiscard]] Word rotated(std::size_t shift) const;
  [[nodiscard]] Word least_rotation() const;
  [[nodiscard]] std::string to_string() const;

  friend Word operator*(const Word& a, const Word& b);
  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;
};

/// Rotation orbit of a word, keyed by its lexicographically least rotation.
struct CyclicClass {
  Word representative;
  std::size_t size = 0;

  friend bool operator==(const CyclicClass&, const CyclicClass&) = default;
};

CyclicClass cyclic_class_of(const Word& w);

/// One class per rotation orbit of the k^p words of degree p, sorted by
/// representative.
std::vector<CyclicClass> cyclic_classes(int k, std::size_t p);

/// Alternating block form x_{l_1}^{e_1} x_{l_2}^{e_2} ⋯ with cyclically
/// distinct neighbouring letters, rotated to the least rotation (which starts
/// with the smallest letter present). For two letters this is
/// x₁^{a₁}x₂^{b₁}⋯x₁^{a_n}x₂^{b_n}.
struct SForm {
  std::vector<std::pair<int, unsigned>> blocks;  // (letter, exponent ≥ 1)

  [[nodiscard]] Word word() const;
  [[nodiscard]] std::size_t degree() const;
  /// (a_i, b_i) pairs; only meaningful for two letters.
  [[nodiscard]] std::vector<std::pair<unsigned, unsigned>> exponent_pairs() const;

  friend bool operator==(const SForm&, const SForm&) = default;
};

/// Singleton orbit {x_i^a}.
struct PowerTag {
  int letter = 1;
  unsigned exponent = 1;

  friend bool operator==(const PowerTag&, const PowerTag&) = default;
};

using CanonicalForm = std::variant<PowerTag, SForm>;

/// Throws DomainError for the empty word's class.
CanonicalForm canonical_s_form(const CyclicClass& c);

/// Finite linear combination of words with complex coefficients. Zero
/// coefficients (|c| ≤ 1e-12) are never stored.
class NCPoly {
 public:
  static constexpr double kZeroThreshold = 1e-12;

  NCPoly() = default;
  static NCPoly unit(Complex c = 1.0);
  static NCPoly word(const Word& w, Complex c = 1.0);
  /// p(x_letter).
  static NCPoly univariate(const Polynomial& p, int letter);

  [[nodiscard]] const std::map<Word, Complex>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] Complex coeff(const Word& w) const;
  [[nodiscard]] std::size_t degree() const;
  [[nodiscard]] double max_abs_coeff() const;
  /// Largest letter index used (0 for constants).
  [[nodiscard]] int max_letter() const;

  void add(const Word& w, Complex c);

  /// Applies `f` to every word (e.g. a rotation) and re-collects terms.
  template <class F>
  [[nodiscard]] NCPoly map_words(F f) const {
    NCPoly out;
    for (const auto& [w, c] : terms_) out.add(f(w), c);
    return out;
  }

  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  NCPoly& operator*=(Complex s);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(NCPoly a, Complex s) { return a *= s; }
  friend NCPoly operator*(Complex s, NCPoly a) { return a *= s; }
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b);

 private:
  std::map<Word, Complex> terms_;
};

/// Sum of coefficients of `y` over each cyclic class it touches.
std::map<Word, Complex> orbit_sums(const NCPoly& y);

/// Membership in the commutator subspace: every orbit sum vanishes.
bool is_commutator_element(const NCPoly& y, double tol = NCPoly::kZeroThreshold);

/// Label of a Ξ-family element.
struct XiLabel {
  enum class Kind { Unit, Power, Alternating };
  Kind kind = Kind::Unit;
  PowerTag power;  // Kind::Power: T̃_a(x_i)
  SForm sform;     // Kind::Alternating: Ũ_{e_1}(x_{l_1})Ũ_{e_2}(x_{l_2})⋯

  [[nodiscard]] std::string to_string() const;
  /// Word carrying the leading coefficient of the element (empty for Unit).
  [[nodiscard]] Word leading_word() const;
  [[nodiscard]] std::size_t degree() const;

  friend bool operator==(const XiLabel&, const XiLabel&) = default;
};

struct XiElement {
  XiLabel label;
  NCPoly poly;
};

/// The family {1} ∪ {T̃_a(x_i)} ∪ {Ũ^S} up to total degree `max_degree`,
/// shifted to the interval [u, v]. Order: unit, then powers by (degree,
/// letter), then alternating forms by (degree, word).
std::vector<XiElement> xi_basis(std::size_t max_degree, double u, double v, int k = 2);

struct IJDecomposition {
  NCPoly i_part;
  std::vector<std::pair<XiLabel, Complex>> j_coeffs;  // nonzero coefficients only

  /// Σ j_coeffs·Ξ expanded back into words.
  [[nodiscard]] NCPoly j_part(double u, double v) const;
};

/// y = i_part + Σ c·Ξ with i_part in the commutator subspace; coefficients are
/// peeled off orbit by orbit from the top degree down.
IJDecomposition decompose_IJ(const NCPoly& y, double u, double v, int k = 2);

/// Expands a Ξ label into its NCPoly for the interval [u, v].
NCPoly xi_element(const XiLabel& label, double u, double v);

/// Product of the matrices along `w`; the empty word gives the identity.
Matrix evaluate_word(const Word& w, std::span<const HermitianMatrix> mats);

/// Tr(y(a_1,…,a_k)), divided by the dimension when `normalized`.
Complex trace_eval(const NCPoly& y, std::span<const HermitianMatrix> mats, bool normalized);

struct KernelRankResult {
  std::size_t classes = 0;
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
  /// Rank recomputed with five extra sampled pairs.
  std::size_t rank_extended = 0;
  bool stabilized = false;
  /// Basis of the sampled kernel as combinations of class representatives.
  std::vector<NCPoly> kernel;
};

/// Numerical rank of [degree-p cyclic classes] → C, class ↦ Tr(rep(a, b)),
/// sampled at `trials` random Hermitian pairs of dimension N.
KernelRankResult kernel_rank(std::size_t N, std::size_t p, std::size_t trials, const RngState& rng);

struct SeparatingPair {
  HermitianMatrix a1;
  HermitianMatrix a2;
  std::size_t dimension = 0;
  Complex trace_value;
  std::size_t draws = 0;
};

/// Searches random shifted-GUE pairs of increasing dimension for a pair with
/// c ≤ a_i ≤ d and |Tr y(a_1, a_2)| > 1e-8. Throws DomainError when y lies in
/// the commutator subspace; returns nullopt when the draw budget runs out.
std::optional<SeparatingPair> find_separating_pair(const NCPoly& y, double c, double d, std::size_t N_max,
                                                   std::size_t budget, const RngState& rng);

/// Search interval [c + 0.1(d − c), d − 0.1(d − c)] used for the GUE draws.
std::pair<double, double> separating_subinterval(double c, double d);

}  // namespace hornfree
