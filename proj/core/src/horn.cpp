#include "hornfree/horn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>

#include "hornfree/errors.hpp"
#include "hornfree/serialize.hpp"

namespace hornfree {

std::string to_string(const HornTriple& t) {
  auto list = [](const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
  };
  return "(" + list(t.I) + "," + list(t.J) + "," + list(t.K) + ")";
}

std::vector<HornTriple> HornSystem::with_rank(int r) const {
  std::vector<HornTriple> out;
  for (const auto& t : triples)
    if (t.r == r) out.push_back(t);
  return out;
}

std::size_t HornSystem::count(int r) const {
  return static_cast<std::size_t>(std::count_if(triples.begin(), triples.end(), [r](const auto& t) { return t.r == r; }));
}

// ---------------------------------------------------------------- recursion

namespace {

// All r-subsets of {1..n} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(r);
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == n - r + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

int sum_of(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Σ_{f∈F} i_f + Σ_{g∈G} j_g ≤ Σ_{h∈H} k_h + p(p+1)/2 for every (F,G,H) of
// the smaller system.
bool passes_filter(const HornTriple& t, const HornSystem& lower) {
  for (const auto& f : lower.triples) {
    int lhs = 0;
    int rhs = f.r * (f.r + 1) / 2;
    for (int x : f.I) lhs += t.I[x - 1];
    for (int x : f.J) lhs += t.J[x - 1];
    for (int x : f.K) rhs += t.K[x - 1];
    if (lhs > rhs) return false;
  }
  return true;
}

struct Memo {
  std::shared_mutex mutex;
  std::map<int, std::shared_ptr<const HornSystem>> systems;
};

Memo& memo() {
  static Memo m;
  return m;
}

std::shared_ptr<const HornSystem> lookup(int n) {
  std::shared_lock lock(memo().mutex);
  auto it = memo().systems.find(n);
  return it == memo().systems.end() ? nullptr : it->second;
}

HornSystem build_system(int n) {
  HornSystem sys;
  sys.n = n;
  for (int r = 1; r <= n - 1; ++r) {
    auto candidates = sum_condition_triples(n, r);
    if (r == 1) {
      sys.triples.insert(sys.triples.end(), candidates.begin(), candidates.end());
      continue;
    }
    const auto lower = horn_triples(r);
    for (auto& t : candidates)
      if (passes_filter(t, *lower)) sys.triples.push_back(std::move(t));
  }
  return sys;
}

}  // namespace

std::vector<HornTriple> sum_condition_triples(int n, int r) {
  if (r < 1 || r > n) return {};
  const auto subs = subsets(n, r);
  std::map<int, std::vector<const std::vector<int>*>> by_sum;
  for (const auto& s : subs) by_sum[sum_of(s)].push_back(&s);
  const int shift = r * (r + 1) / 2;
  std::vector<HornTriple> out;
  for (const auto& I : subs)
    for (const auto& J : subs) {
      auto it = by_sum.find(sum_of(I) + sum_of(J) - shift);
      if (it == by_sum.end()) continue;
      for (const auto* K : it->second) out.push_back(HornTriple{n, r, I, J, *K});
    }
  return out;
}

std::shared_ptr<const HornSystem> horn_triples(int n) {
  if (n < 1) throw DomainError("horn_triples: n must be at least 1");
  if (auto hit = lookup(n)) return hit;
  // Built outside the lock: the recursion re-enters horn_triples for r < n.
  auto sys = std::make_shared<const HornSystem>(build_system(n));
  std::unique_lock lock(memo().mutex);
  auto [it, inserted] = memo().systems.emplace(n, sys);
  return it->second;
}

void clear_horn_cache() {
  std::unique_lock lock(memo().mutex);
  memo().systems.clear();
}

std::string default_horn_cache_dir() {
  if (const char* env = std::getenv("HORN_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return "horn_cache";
}

std::shared_ptr<const HornSystem> horn_triples_cached(int n, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(dir) / ("T_" + std::to_string(n) + ".json");
  if (fs::exists(path)) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto sys = std::make_shared<const HornSystem>(horn_system_from_json(buf.str()));
    if (sys->n == n) return sys;
  }
  auto sys = horn_triples(n);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (out) out << to_json(*sys);
  return sys;
}

// ---------------------------------------------------------------- membership

double default_horn_tolerance(const EigenvalueSequence& a, const EigenvalueSequence& b, const EigenvalueSequence& c) {
  return 1e-9 * (1.0 + std::max({a.max_abs(), b.max_abs(), c.max_abs()}));
}

HornVerdict horn_membership(const EigenvalueSequence& alpha, const EigenvalueSequence& beta,
                            const EigenvalueSequence& gamma, double tol) {
  if (alpha.size() != beta.size() || alpha.size() != gamma.size())
    throw StructuralError("horn_membership: sequences differ in length");
  if (!(tol >= 0.0)) throw DomainError("horn_membership: tolerance must be nonnegative");
  HornVerdict verdict;
  const double lhs = alpha.sum() + beta.sum();
  const double rhs = gamma.sum();
  if (std::abs(rhs - lhs) > tol) {
    verdict.member = false;
    verdict.violation = HornCertificate{HornCertificate::Kind::Trace, std::nullopt, lhs, rhs, 0};
    return verdict;
  }
  const int n = static_cast<int>(alpha.size());
  if (n == 0) return verdict;
  for (const auto& t : horn_triples(n)->triples) {
    double l = 0.0;
    double r = 0.0;
    for (int i : t.I) l += alpha[i - 1];
    for (int j : t.J) l += beta[j - 1];
    for (int k : t.K) r += gamma[k - 1];
    ++verdict.inequalities_checked;
    if (l < r - tol) {
      verdict.member = false;
      verdict.violation = HornCertificate{HornCertificate::Kind::Inequality, t, l, r, n};
      return verdict;
    }
  }
  return verdict;
}

HornVerdict horn_membership(const EigenvalueSequence& alpha, const EigenvalueSequence& beta,
                            const EigenvalueSequence& gamma) {
  return horn_membership(alpha, beta, gamma, default_horn_tolerance(alpha, beta, gamma));
}

// ---------------------------------------------------------------- eigenvalue functions

EigenvalueFunction::EigenvalueFunction(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size() || values.empty())
    throw StructuralError("EigenvalueFunction: need one value per piece and at least one piece");
  if (breakpoints.front() != 0.0) throw StructuralError("EigenvalueFunction: first piece must start at 0");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw StructuralError("EigenvalueFunction: values must be bounded");
    if (i + 1 < values.size()) {
      if (!(breakpoints[i] < breakpoints[i + 1])) throw StructuralError("EigenvalueFunction: breakpoints must increase");
      if (values[i] < values[i + 1]) throw StructuralError("EigenvalueFunction: values must be nonincreasing");
    }
  }
  if (!(breakpoints.back() < 1.0)) throw StructuralError("EigenvalueFunction: breakpoints must lie in [0, 1)");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values_.empty() && values_.back() == values[i]) continue;
    breakpoints_.push_back(breakpoints[i]);
    values_.push_back(values[i]);
  }
}

double EigenvalueFunction::operator()(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - breakpoints_.begin() - 1));
  return values_[idx];
}

double EigenvalueFunction::integral(double a, double b) const {
  if (!(0.0 <= a && a <= b && b <= 1.0)) throw DomainError("EigenvalueFunction::integral: need 0 ≤ a ≤ b ≤ 1");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double lo = std::max(a, breakpoints_[i]);
    const double hi = std::min(b, i + 1 < values_.size() ? breakpoints_[i + 1] : 1.0);
    if (hi > lo) s += values_[i] * (hi - lo);
  }
  return s;
}

EigenvalueFunction eigfun_from_seq(const EigenvalueSequence& s) {
  if (s.empty()) throw StructuralError("eigfun_from_seq: empty sequence");
  const double n = static_cast<double>(s.size());
  std::vector<double> bps(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) bps[j] = static_cast<double>(j) / n;
  return EigenvalueFunction(std::move(bps), s.values());
}

EigenvalueSequence coarsen(const EigenvalueFunction& w, std::size_t n) {
  if (n < 1) throw DomainError("coarsen: n must be at least 1");
  const double dn = static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = dn * w.integral(static_cast<double>(i) / dn, static_cast<double>(i + 1) / dn);
  // Averages of a nonincreasing function are nonincreasing up to rounding.
  for (std::size_t i = 1; i < n; ++i) out[i] = std::min(out[i], out[i - 1]);
  return EigenvalueSequence(std::move(out));
}

double sigma_integral(const EigenvalueFunction& u, const std::vector<int>& F, int N) {
  if (N < 1) throw DomainError("sigma_integral: N must be at least 1");
  const double dn = static_cast<double>(N);
  double s = 0.0;
  for (int i : F) {
    if (i < 1 || i > N) throw DomainError("sigma_integral: index " + std::to_string(i) + " outside 1.." + std::to_string(N));
    s += u.integral(static_cast<double>(i - 1) / dn, static_cast<double>(i) / dn);
  }
  return s;
}

int default_fuv_levels(const EigenvalueFunction& w) { return 4 * static_cast<int>(w.steps()); }

HornVerdict fuv_membership(const EigenvalueFunction& u, const EigenvalueFunction& v, const EigenvalueFunction& w,
                           int N_max, double tol) {
  if (N_max < 2) throw DomainError("fuv_membership: N_max must be at least 2");
  if (!(tol >= 0.0)) throw DomainError("fuv_membership: tolerance must be nonnegative");
  HornVerdict verdict;
  const double lhs = u.integral() + v.integral();
  const double rhs = w.integral();
  if (std::abs(lhs - rhs) > tol) {
    verdict.member = false;
    verdict.violation = HornCertificate{HornCertificate::Kind::Trace, std::nullopt, lhs, rhs, 0};
    return verdict;
  }
  for (int N = 2; N <= N_max; ++N) {
    for (const auto& t : horn_triples(N)->triples) {
      const double l = sigma_integral(u, t.I, N) + sigma_integral(v, t.J, N);
      const double r = sigma_integral(w, t.K, N);
      ++verdict.inequalities_checked;
      if (l < r - tol) {
        verdict.member = false;
        verdict.violation = HornCertificate{HornCertificate::Kind::Inequality, t, l, r, N};
        verdict.checked_up_to = N;
        return verdict;
      }
    }
    verdict.checked_up_to = N;
  }
  return verdict;
}

}  // namespace hornfree
