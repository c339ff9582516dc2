#include "hornfree/ncwords.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hornfree/errors.hpp"

namespace hornfree {

// ---------------------------------------------------------------- Word

Word Word::rotated(std::size_t shift) const {
  if (letters.empty()) return *this;
  Word out;
  out.letters.resize(letters.size());
  const std::size_t n = letters.size();
  for (std::size_t i = 0; i < n; ++i) out.letters[i] = letters[(i + shift) % n];
  return out;
}

Word Word::least_rotation() const {
  Word best = *this;
  for (std::size_t s = 1; s < letters.size(); ++s) {
    Word r = rotated(s);
    if (r < best) best = std::move(r);
  }
  return best;
}

std::string Word::to_string() const {
  if (letters.empty()) return "1";
  std::ostringstream os;
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    os << 'x' << letters[i];
    if (j - i > 1) os << '^' << (j - i);
    i = j;
  }
  return os.str();
}

Word operator*(const Word& a, const Word& b) {
  Word out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

// ---------------------------------------------------------------- cyclic classes

CyclicClass cyclic_class_of(const Word& w) {
  std::set<Word> orbit;
  for (std::size_t s = 0; s < std::max<std::size_t>(w.degree(), 1); ++s) orbit.insert(w.rotated(s));
  return CyclicClass{*orbit.begin(), orbit.size()};
}

std::vector<CyclicClass> cyclic_classes(int k, std::size_t p) {
  if (k < 1) throw DomainError("cyclic_classes: need at least one letter");
  if (p < 1) throw DomainError("cyclic_classes: degree must be at least 1");
  std::map<Word, std::size_t> seen;
  std::vector<int> digits(p, 1);
  while (true) {
    Word w(digits);
    Word rep = w.least_rotation();
    if (rep == w) seen.emplace(rep, cyclic_class_of(w).size);
    std::size_t pos = p;
    while (pos > 0 && digits[pos - 1] == k) digits[--pos] = 1;
    if (pos == 0) break;
    ++digits[pos - 1];
  }
  std::vector<CyclicClass> out;
  out.reserve(seen.size());
  for (auto& [rep, size] : seen) out.push_back(CyclicClass{rep, size});
  return out;
}

Word SForm::word() const {
  Word w;
  for (const auto& [letter, e] : blocks) w.letters.insert(w.letters.end(), e, letter);
  return w;
}

std::size_t SForm::degree() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += b.second;
  return d;
}

std::vector<std::pair<unsigned, unsigned>> SForm::exponent_pairs() const {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (std::size_t i = 0; i + 1 < blocks.size(); i += 2) out.emplace_back(blocks[i].second, blocks[i + 1].second);
  return out;
}

CanonicalForm canonical_s_form(const CyclicClass& c) {
  const Word& rep = c.representative;
  if (rep.empty()) throw DomainError("canonical_s_form: the empty word has no alternating form");
  const bool constant = std::all_of(rep.letters.begin(), rep.letters.end(), [&](int l) { return l == rep.letters[0]; });
  if (constant) return PowerTag{rep.letters[0], static_cast<unsigned>(rep.degree())};
  // The least rotation of a non-constant word is a power of a Lyndon word, so
  // its first and last letters differ and the block split is already cyclic.
  SForm s;
  for (int l : rep.letters) {
    if (!s.blocks.empty() && s.blocks.back().first == l) {
      ++s.blocks.back().second;
    } else {
      s.blocks.emplace_back(l, 1U);
    }
  }
  return s;
}

// ---------------------------------------------------------------- NCPoly

NCPoly NCPoly::unit(Complex c) { return word(Word{}, c); }

NCPoly NCPoly::word(const Word& w, Complex c) {
  NCPoly p;
  p.add(w, c);
  return p;
}

NCPoly NCPoly::univariate(const Polynomial& p, int letter) {
  NCPoly out;
  Word w;
  for (double c : p.coeffs()) {
    out.add(w, c);
    w.letters.push_back(letter);
  }
  return out;
}

Complex NCPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

std::size_t NCPoly::degree() const {
  std::size_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return d;
}

double NCPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.second));
  return m;
}

int NCPoly::max_letter() const {
  int m = 0;
  for (const auto& t : terms_)
    for (int l : t.first.letters) m = std::max(m, l);
  return m;
}

void NCPoly::add(const Word& w, Complex c) {
  for (int l : w.letters)
    if (l < 1) throw StructuralError("NCPoly: letters are 1-based");
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kZeroThreshold) terms_.erase(it);
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

NCPoly& NCPoly::operator*=(Complex s) {
  NCPoly out;
  for (const auto& [w, c] : terms_) out.add(w, c * s);
  *this = std::move(out);
  return *this;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
  NCPoly out;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) out.add(wa * wb, ca * cb);
  return out;
}

// ---------------------------------------------------------------- commutator subspace

std::map<Word, Complex> orbit_sums(const NCPoly& y) {
  std::map<Word, Complex> sums;
  for (const auto& [w, c] : y.terms()) sums[w.least_rotation()] += c;
  return sums;
}

bool is_commutator_element(const NCPoly& y, double tol) {
  const double scale = std::max(1.0, y.max_abs_coeff());
  for (const auto& [rep, s] : orbit_sums(y))
    if (std::abs(s) > tol * scale) return false;
  return true;
}

// ---------------------------------------------------------------- Ξ family

std::string XiLabel::to_string() const {
  switch (kind) {
    case Kind::Unit:
      return "1";
    case Kind::Power:
      return "T" + std::to_string(power.exponent) + "(x" + std::to_string(power.letter) + ")";
    case Kind::Alternating: {
      std::string s = "U[";
      for (const auto& [l, e] : sform.blocks) s += "U" + std::to_string(e) + "(x" + std::to_string(l) + ")";
      return s + "]";
    }
  }
  return {};
}

Word XiLabel::leading_word() const {
  switch (kind) {
    case Kind::Unit:
      return {};
    case Kind::Power:
      return Word(std::vector<int>(power.exponent, power.letter));
    case Kind::Alternating:
      return sform.word();
  }
  return {};
}

std::size_t XiLabel::degree() const { return leading_word().degree(); }

NCPoly xi_element(const XiLabel& label, double u, double v) {
  switch (label.kind) {
    case XiLabel::Kind::Unit:
      return NCPoly::unit();
    case XiLabel::Kind::Power:
      return NCPoly::univariate(shifted_cheb(ChebKind::First, label.power.exponent, u, v), label.power.letter);
    case XiLabel::Kind::Alternating: {
      NCPoly acc = NCPoly::unit();
      for (const auto& [l, e] : label.sform.blocks)
        acc = acc * NCPoly::univariate(shifted_cheb(ChebKind::Second, e, u, v), l);
      return acc;
    }
  }
  return {};
}

namespace {

std::vector<XiLabel> xi_labels(std::size_t max_degree, int k) {
  std::vector<XiLabel> labels;
  labels.push_back(XiLabel{});
  for (std::size_t a = 1; a <= max_degree; ++a)
    for (int i = 1; i <= k; ++i) {
      XiLabel l;
      l.kind = XiLabel::Kind::Power;
      l.power = PowerTag{i, static_cast<unsigned>(a)};
      labels.push_back(l);
    }
  for (std::size_t p = 2; p <= max_degree; ++p)
    for (const auto& c : cyclic_classes(k, p)) {
      auto form = canonical_s_form(c);
      if (auto* s = std::get_if<SForm>(&form)) {
        XiLabel l;
        l.kind = XiLabel::Kind::Alternating;
        l.sform = *s;
        labels.push_back(l);
      }
    }
  return labels;
}

}  // namespace

std::vector<XiElement> xi_basis(std::size_t max_degree, double u, double v, int k) {
  if (max_degree < 1) throw DomainError("xi_basis: max_degree must be at least 1");
  if (!(u < v)) throw DomainError("xi_basis: requires u < v");
  if (k < 1) throw DomainError("xi_basis: need at least one letter");
  std::vector<XiElement> out;
  for (auto& l : xi_labels(max_degree, k)) {
    NCPoly p = xi_element(l, u, v);
    out.push_back(XiElement{std::move(l), std::move(p)});
  }
  return out;
}

NCPoly IJDecomposition::j_part(double u, double v) const {
  NCPoly acc;
  for (const auto& [label, c] : j_coeffs) acc += xi_element(label, u, v) * c;
  return acc;
}

IJDecomposition decompose_IJ(const NCPoly& y, double u, double v, int k) {
  const auto map = affine_to_canonical(u, v);
  k = std::max(k, y.max_letter());
  NCPoly rest = y;
  IJDecomposition out;

  for (std::size_t d = y.degree(); d >= 1; --d) {
    // Orbit sums of the current remainder at degree d. Subtracting the Ξ
    // element attached to one orbit only touches that orbit at degree d.
    std::map<Word, Complex> sums;
    for (const auto& [w, c] : rest.terms())
      if (w.degree() == d) sums[w.least_rotation()] += c;
    for (const auto& [rep, s] : sums) {
      if (std::abs(s) <= NCPoly::kZeroThreshold) continue;
      XiLabel label;
      auto form = canonical_s_form(CyclicClass{rep, 0});
      if (auto* pw = std::get_if<PowerTag>(&form)) {
        label.kind = XiLabel::Kind::Power;
        label.power = *pw;
      } else {
        label.kind = XiLabel::Kind::Alternating;
        label.sform = std::get<SForm>(form);
      }
      const Complex c = s / std::pow(map.scale, static_cast<double>(d));
      rest -= xi_element(label, u, v) * c;
      out.j_coeffs.emplace_back(std::move(label), c);
    }
  }
  const Complex c0 = rest.coeff(Word{});
  if (std::abs(c0) > NCPoly::kZeroThreshold) {
    rest.add(Word{}, -c0);
    out.j_coeffs.emplace_back(XiLabel{}, c0);
  }
  out.i_part = std::move(rest);
  return out;
}

// ---------------------------------------------------------------- evaluation

Matrix evaluate_word(const Word& w, std::span<const HermitianMatrix> mats) {
  if (mats.empty()) throw StructuralError("evaluate_word: no matrices supplied");
  const std::size_t n = mats[0].dim();
  if (w.empty()) return Matrix::identity(n);
  for (int l : w.letters)
    if (l < 1 || static_cast<std::size_t>(l) > mats.size())
      throw StructuralError("evaluate_word: letter x" + std::to_string(l) + " has no matrix");
  Matrix acc = mats[w.letters[0] - 1].matrix();
  for (std::size_t i = 1; i < w.letters.size(); ++i) acc = acc * mats[w.letters[i] - 1].matrix();
  return acc;
}

Complex trace_eval(const NCPoly& y, std::span<const HermitianMatrix> mats, bool normalized) {
  if (mats.empty()) throw StructuralError("trace_eval: no matrices supplied");
  const std::size_t n = mats[0].dim();
  for (const auto& m : mats)
    if (m.dim() != n) throw StructuralError("trace_eval: matrices differ in dimension");
  Complex total = 0.0;
  for (const auto& [w, c] : y.terms()) {
    Complex t;
    if (w.degree() <= 1) {
      t = w.empty() ? Complex(static_cast<double>(n)) : evaluate_word(w, mats).trace();
    } else {
      // Tr(w) = Tr(prefix · last letter) saves the final product.
      Word prefix(std::vector<int>(w.letters.begin(), w.letters.end() - 1));
      if (w.letters.back() < 1 || static_cast<std::size_t>(w.letters.back()) > mats.size())
        throw StructuralError("trace_eval: letter has no matrix");
      t = trace_of_product(evaluate_word(prefix, mats), mats[w.letters.back() - 1].matrix());
    }
    total += c * t;
  }
  return normalized ? total / static_cast<double>(n) : total;
}

// ---------------------------------------------------------------- kernel rank

namespace {

constexpr double kRankRelTol = 1e-10;

struct SampledRank {
  std::size_t rank = 0;
  std::vector<std::vector<Complex>> kernel;  // in class coordinates
};

// Rank of the rows-by-classes value matrix via the Gram matrix of its
// column-normalized form; eigenvalues below kRankRelTol·λ_max count as kernel.
SampledRank sampled_rank(const std::vector<std::vector<Complex>>& values, std::size_t classes) {
  std::vector<std::vector<Complex>> rows = values;
  for (auto& r : rows) {
    double s = 0.0;
    for (const auto& z : r) s += std::norm(z);
    s = std::sqrt(s);
    if (s > 0.0)
      for (auto& z : r) z /= s;
  }
  std::vector<double> colnorm(classes, 0.0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < classes; ++c) colnorm[c] += std::norm(r[c]);
  for (auto& cn : colnorm) cn = std::sqrt(cn);

  Matrix gram(classes, classes);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < classes; ++i)
      for (std::size_t j = 0; j < classes; ++j) {
        if (colnorm[i] == 0.0 || colnorm[j] == 0.0) continue;
        gram(i, j) += std::conj(r[i]) * r[j] / (colnorm[i] * colnorm[j]);
      }
  const auto eig = eig_hermitian(HermitianMatrix::symmetrized(std::move(gram)));
  const double top = eig.values.empty() ? 0.0 : eig.values[0];

  SampledRank out;
  for (std::size_t i = 0; i < classes; ++i) {
    if (top > 0.0 && eig.values[i] > kRankRelTol * top) {
      ++out.rank;
      continue;
    }
    std::vector<Complex> z(classes);
    for (std::size_t c = 0; c < classes; ++c)
      z[c] = colnorm[c] > 0.0 ? eig.vectors.matrix()(c, i) / colnorm[c] : eig.vectors.matrix()(c, i);
    out.kernel.push_back(std::move(z));
  }
  return out;
}

}  // namespace

KernelRankResult kernel_rank(std::size_t N, std::size_t p, std::size_t trials, const RngState& rng) {
  if (N < 1 || p < 1) throw DomainError("kernel_rank: N and p must be at least 1");
  const auto classes = cyclic_classes(2, p);
  if (trials < classes.size())
    throw DomainError("kernel_rank: need at least as many trials as classes (" + std::to_string(classes.size()) + ")");

  std::vector<std::vector<Complex>> values;
  for (std::size_t t = 0; t < trials + 5; ++t) {
    Rng r(rng.substream(t));
    const HermitianMatrix pair[2] = {random_hermitian(N, r), random_hermitian(N, r)};
    std::vector<Complex> row;
    row.reserve(classes.size());
    for (const auto& c : classes) row.push_back(trace_eval(NCPoly::word(c.representative), pair, false));
    values.push_back(std::move(row));
  }

  const std::vector<std::vector<Complex>> base(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(trials));
  auto first = sampled_rank(base, classes.size());
  auto extended = sampled_rank(values, classes.size());

  KernelRankResult out;
  out.classes = classes.size();
  out.rank = first.rank;
  out.kernel_dim = classes.size() - first.rank;
  out.rank_extended = extended.rank;
  out.stabilized = first.rank == extended.rank;
  for (const auto& z : first.kernel) {
    // Normalize so the largest coefficient is 1.
    std::size_t arg = 0;
    for (std::size_t c = 1; c < z.size(); ++c)
      if (std::abs(z[c]) > std::abs(z[arg])) arg = c;
    const Complex scale = z[arg];
    NCPoly y;
    for (std::size_t c = 0; c < z.size(); ++c) {
      Complex coef = z[c] / scale;
      if (std::abs(coef) < 1e-9) continue;
      y.add(classes[c].representative, coef);
    }
    out.kernel.push_back(std::move(y));
  }
  return out;
}

// ---------------------------------------------------------------- separating pairs

std::pair<double, double> separating_subinterval(double c, double d) {
  if (!(c < d)) throw DomainError("separating_subinterval: requires c < d");
  return {c + 0.1 * (d - c), d - 0.1 * (d - c)};
}

std::optional<SeparatingPair> find_separating_pair(const NCPoly& y, double c, double d, std::size_t N_max,
                                                   std::size_t budget, const RngState& rng) {
  const auto [u, v] = separating_subinterval(c, d);
  if (N_max < 1 || budget < 1) throw DomainError("find_separating_pair: N_max and budget must be positive");
  if (y.max_letter() > 2) throw StructuralError("find_separating_pair: expects words in two letters");
  const auto split = decompose_IJ(y, u, v);
  if (split.j_coeffs.empty())
    throw DomainError("find_separating_pair: y lies in the commutator subspace, every trace vanishes");

  const std::size_t per_dim = std::max<std::size_t>(1, budget / N_max);
  std::size_t draws = 0;
  for (std::size_t N = 1; N <= N_max && draws < budget; ++N) {
    for (std::size_t t = 0; t < per_dim && draws < budget; ++t) {
      Rng r(rng.substream(draws));
      ++draws;
      HermitianMatrix a1 = shifted_gue(N, u, v, r);
      HermitianMatrix a2 = shifted_gue(N, u, v, r);
      if (!spectrum_within(a1, c, d) || !spectrum_within(a2, c, d)) continue;
      const HermitianMatrix pair[2] = {a1, a2};
      const Complex value = trace_eval(y, pair, false);
      if (std::abs(value) > 1e-8) return SeparatingPair{std::move(a1), std::move(a2), N, value, draws};
    }
  }
  return std::nullopt;
}

}  // namespace hornfree
