#include "hornfree/fluct.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hornfree/errors.hpp"
#include "hornfree/ncwords.hpp"
#include "hornfree/parallel.hpp"

namespace hornfree {

// ---------------------------------------------------------------- report

bool ExperimentReport::passed() const {
  return std::all_of(asserts.begin(), asserts.end(), [](const Assertion& a) { return a.pass; });
}

const Estimate* ExperimentReport::estimate(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return &e;
  return nullptr;
}

const Assertion* ExperimentReport::assertion(const std::string& name) const {
  for (const auto& a : asserts)
    if (a.name == name) return &a;
  return nullptr;
}

void ExperimentReport::add_estimate(std::string name, double value, double std_error) {
  estimates.push_back(Estimate{std::move(name), value, std_error});
}

void ExperimentReport::check(std::string name, double value, double lo, double hi) {
  asserts.push_back(Assertion{std::move(name), lo <= value && value <= hi, value, lo, hi});
}

// ---------------------------------------------------------------- statistics

MomentSummary summarize(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) throw DomainError("summarize: need at least two samples");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  const double var = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  MomentSummary s;
  s.mean = mean;
  s.mean_se = std::sqrt(var / n);
  s.variance = var;
  s.variance_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return s;
}

std::pair<double, double> covariance_with_se(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("covariance_with_se: need paired samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  std::vector<double> prod(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = (xs[i] - mx) * (ys[i] - my);
  const auto s = summarize(prod);
  return {s.mean * n / (n - 1.0), s.mean_se};
}

std::pair<double, double> proportion_with_se(std::size_t successes, std::size_t n) {
  if (n == 0) throw DomainError("proportion_with_se: no trials");
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  const double pt = (static_cast<double>(successes) + 2.0) / (static_cast<double>(n) + 4.0);
  return {p, std::sqrt(pt * (1.0 - pt) / static_cast<double>(n))};
}

// ---------------------------------------------------------------- traces

std::vector<double> power_traces(const HermitianMatrix& x, unsigned kmax) {
  const unsigned half = (kmax + 1) / 2;
  std::vector<Matrix> pw;  // pw[j] = X^{j+1}
  pw.reserve(half);
  if (half >= 1) pw.push_back(x.matrix());
  for (unsigned j = 1; j < half; ++j) pw.push_back(pw.back() * x.matrix());
  std::vector<double> out(kmax + 1);
  out[0] = static_cast<double>(x.dim());
  for (unsigned k = 1; k <= kmax; ++k) {
    const unsigned a = k / 2;
    const unsigned b = k - a;
    out[k] = a == 0 ? pw[b - 1].trace().real() : trace_of_product(pw[a - 1], pw[b - 1]).real();
  }
  return out;
}

double trace_poly_power_path(const Polynomial& p, const std::vector<double>& traces) {
  if (p.degree() >= static_cast<int>(traces.size())) throw DomainError("trace_poly_power_path: not enough power traces");
  double s = 0.0;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) s += p.coeffs()[k] * traces[k];
  return s;
}

double trace_chebyshev_recursion_path(const HermitianMatrix& x, unsigned n) {
  const std::size_t dim = x.dim();
  if (n == 0) return static_cast<double>(dim);
  Matrix prev = Matrix::identity(dim);
  Matrix cur = x.matrix();
  for (unsigned k = 1; k < n; ++k) {
    Matrix next = cur * x.matrix();
    const double c = k == 1 ? 2.0 : 1.0;  // T_2 = X T_1 − 2·T_0
    for (std::size_t i = 0; i < next.data().size(); ++i) next.data()[i] -= c * prev.data()[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur.trace().real();
}

double trace_chebyshev_eigen_path(const HermitianMatrix& x, unsigned n) {
  const Polynomial t = cheb(ChebKind::First, n);
  double s = 0.0;
  for (double l : eigenvalues(x)) s += t(l);
  return s;
}

// ---------------------------------------------------------------- Johansson CLT

ExperimentReport clt_johansson(std::size_t N, unsigned m, std::size_t samples, const RngState& rng) {
  if (m < 1 || m > 8) throw DomainError("clt_johansson: m must lie in 1..8");
  if (samples < 100) throw DomainError("clt_johansson: need at least 100 samples");
  if (N < 1) throw DomainError("clt_johansson: N must be at least 1");

  std::vector<Polynomial> ts;
  std::vector<double> alphas;
  for (unsigned n = 1; n <= m; ++n) {
    ts.push_back(cheb(ChebKind::First, n));
    alphas.push_back(alpha_coeff(n));
  }
  std::vector<std::vector<double>> z(m, std::vector<double>(samples));
  const double dN = static_cast<double>(N);
  parallel_for(samples, [&](std::size_t s) {
    Rng r(rng.substream(s));
    const auto traces = power_traces(sample_gue(N, r), m);
    for (unsigned n = 1; n <= m; ++n)
      z[n - 1][s] = (trace_poly_power_path(ts[n - 1], traces) - dN * alphas[n - 1]) / std::sqrt(static_cast<double>(n));
  });

  ExperimentReport rep{"clt", rng.seed, N, samples, {}, {}};
  for (unsigned n = 1; n <= m; ++n) {
    const auto s = summarize(z[n - 1]);
    const std::string tag = std::to_string(n);
    rep.add_estimate("mean_" + tag, s.mean, s.mean_se);
    rep.add_estimate("var_" + tag, s.variance, s.variance_se);
    rep.check("var_" + tag + "_in_band", s.variance, 0.8, 1.2);
    rep.check("mean_" + tag + "_small", s.mean, -0.15, 0.15);
  }
  for (unsigned a = 1; a <= m; ++a)
    for (unsigned b = a + 1; b <= m; ++b) {
      const auto [cov, se] = covariance_with_se(z[a - 1], z[b - 1]);
      const std::string tag = std::to_string(a) + "_" + std::to_string(b);
      rep.add_estimate("cov_" + tag, cov, se);
      rep.check("cov_" + tag + "_small", cov, -0.15, 0.15);
    }
  return rep;
}

// ---------------------------------------------------------------- second-order freeness

namespace {

constexpr double kCenteringTol = 1e-12;

void require_centered(const std::vector<Polynomial>& ps, const char* which) {
  for (const auto& p : ps)
    if (std::abs(semicircle_trace(p)) > kCenteringTol)
      throw PreconditionError(std::string("sof: polynomial in ") + which + " is not centred under the semicircle law");
}

// Powers X^0..X^kmax, built once per sample.
std::vector<Matrix> matrix_powers(const HermitianMatrix& x, int kmax) {
  std::vector<Matrix> out;
  out.push_back(Matrix::identity(x.dim()));
  if (kmax >= 1) out.push_back(x.matrix());
  for (int k = 2; k <= kmax; ++k) out.push_back(out.back() * x.matrix());
  return out;
}

Matrix combine(const Polynomial& p, const std::vector<Matrix>& powers) {
  const std::size_t n = powers[0].rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const double c = p.coeffs()[k];
    if (c == 0.0) continue;
    const auto src = powers[k].data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
  }
  return out;
}

// Tr(M_1 M_2 ⋯ M_r) with the last product folded into the trace.
Complex trace_chain(const std::vector<Matrix>& chain) {
  if (chain.size() == 1) return chain[0].trace();
  Matrix acc = chain[0];
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) acc = acc * chain[i];
  return trace_of_product(acc, chain.back());
}

int max_degree(const std::vector<Polynomial>& ps) {
  int d = 0;
  for (const auto& p : ps) d = std::max(d, p.degree());
  return d;
}

void check_within_se(ExperimentReport& rep, const std::string& name, const std::vector<double>& xs, double target) {
  const auto s = summarize(xs);
  rep.add_estimate(name, s.mean, s.mean_se);
  const double band = 3.0 * s.mean_se;
  rep.check(name + "_within_3se", s.mean, target - band, target + band);
}

}  // namespace

double sof_limit_formula(const std::vector<Polynomial>& ps, const std::vector<Polynomial>& qs,
                         const std::vector<Polynomial>& pts, const std::vector<Polynomial>& qts) {
  if (ps.empty() || ps.size() != qs.size()) throw StructuralError("sof_limit_formula: p and q lists must match");
  if (pts.empty() || pts.size() != qts.size())
    throw StructuralError("sof_limit_formula: p~ and q~ lists must match");
  require_centered(ps, "p");
  require_centered(qs, "q");
  require_centered(pts, "p~");
  require_centered(qts, "q~");
  if (ps.size() != pts.size()) return 0.0;
  const std::size_t m = ps.size();
  double total = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    double prod = 1.0;
    for (std::size_t j = 0; j < m; ++j)
      prod *= semicircle_trace(ps[j] * pts[(j + l) % m]) * semicircle_trace(qs[j] * qts[(j + l) % m]);
    total += prod;
  }
  return total;
}

ExperimentReport sof_experiment(const std::vector<Polynomial>& ps, const std::vector<Polynomial>& qs,
                                const std::vector<Polynomial>& pts, const std::vector<Polynomial>& qts,
                                std::size_t N, std::size_t samples, const RngState& rng, const Polynomial& r) {
  if (N < 50) throw DomainError("sof_experiment: N must be at least 50");
  if (samples < 2) throw DomainError("sof_experiment: need at least two samples");
  const double expected = sof_limit_formula(ps, qs, pts, qts);
  const int dx = std::max({max_degree(ps), max_degree(pts), r.degree()});
  const int dy = std::max({max_degree(qs), max_degree(qts), r.degree()});

  std::vector<double> second_re(samples), second_im(samples), first_re(samples), first_im(samples);
  std::vector<double> cross_x(samples), cross_y(samples);
  parallel_for(samples, [&](std::size_t s) {
    Rng rr(rng.substream(s));
    const auto x = sample_gue(N, rr);
    const auto y = sample_gue(N, rr);
    const auto px = matrix_powers(x, dx);
    const auto py = matrix_powers(y, dy);
    std::vector<Matrix> chain;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      chain.push_back(combine(ps[j], px));
      chain.push_back(combine(qs[j], py));
    }
    const Complex word = trace_chain(chain);
    chain.clear();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      chain.push_back(combine(pts[j], px));
      chain.push_back(combine(qts[j], py));
    }
    const Complex other = trace_chain(chain);
    const Complex prod = word * std::conj(other);
    second_re[s] = prod.real();
    second_im[s] = prod.imag();
    first_re[s] = word.real() / static_cast<double>(N);
    first_im[s] = word.imag() / static_cast<double>(N);
    cross_x[s] = (word * combine(r, px).trace()).real();
    cross_y[s] = (word * combine(r, py).trace()).real();
  });

  ExperimentReport rep{"sof", rng.seed, N, samples, {}, {}};
  rep.add_estimate("limit_formula", expected, 0.0);
  check_within_se(rep, "second_order_re", second_re, expected);
  check_within_se(rep, "second_order_im", second_im, 0.0);
  check_within_se(rep, "first_order_re", first_re, 0.0);
  check_within_se(rep, "first_order_im", first_im, 0.0);
  check_within_se(rep, "cross_r_X", cross_x, 0.0);
  check_within_se(rep, "cross_r_Y", cross_y, 0.0);
  return rep;
}

// ---------------------------------------------------------------- Ξ fluctuations

ExperimentReport xi_fluctuations(double u, double v, std::size_t max_degree, std::size_t N, std::size_t samples,
                                 const RngState& rng) {
  if (!(u < v)) throw DomainError("xi_fluctuations: requires u < v");
  if (max_degree < 1 || max_degree > 4) throw DomainError("xi_fluctuations: max_degree must lie in 1..4");
  if (N < 1 || samples < 2) throw DomainError("xi_fluctuations: need N ≥ 1 and at least two samples");

  auto basis = xi_basis(max_degree, u, v);
  basis.erase(basis.begin());  // drop the unit
  const std::size_t count = basis.size();
  const int deg = static_cast<int>(max_degree);

  std::vector<Polynomial> t_shift(max_degree + 1), u_shift(max_degree + 1);
  for (std::size_t a = 0; a <= max_degree; ++a) {
    t_shift[a] = shifted_cheb(ChebKind::First, static_cast<unsigned>(a), u, v);
    u_shift[a] = shifted_cheb(ChebKind::Second, static_cast<unsigned>(a), u, v);
  }
  std::vector<double> beta(count, 0.0);
  for (std::size_t i = 0; i < count; ++i)
    if (basis[i].label.kind == XiLabel::Kind::Power) beta[i] = alpha_coeff(basis[i].label.power.exponent);

  std::vector<std::vector<double>> z(count, std::vector<double>(samples));
  const double dN = static_cast<double>(N);
  parallel_for(samples, [&](std::size_t s) {
    Rng r(rng.substream(s));
    const HermitianMatrix mats[2] = {shifted_gue(N, u, v, r), shifted_gue(N, u, v, r)};
    const std::vector<Matrix> powers[2] = {matrix_powers(mats[0], deg), matrix_powers(mats[1], deg)};
    std::map<std::pair<int, unsigned>, Matrix> second_kind;  // (letter, e) → Ũ_e(x_letter)
    for (std::size_t i = 0; i < count; ++i) {
      const auto& label = basis[i].label;
      Complex tr;
      if (label.kind == XiLabel::Kind::Power) {
        const auto& pw = powers[label.power.letter - 1];
        tr = combine(t_shift[label.power.exponent], pw).trace();
      } else {
        std::vector<Matrix> chain;
        for (const auto& [letter, e] : label.sform.blocks) {
          auto key = std::make_pair(letter, e);
          auto it = second_kind.find(key);
          if (it == second_kind.end()) it = second_kind.emplace(key, combine(u_shift[e], powers[letter - 1])).first;
          chain.push_back(it->second);
        }
        tr = trace_chain(chain);
      }
      z[i][s] = tr.real() - dN * beta[i];
    }
  });

  ExperimentReport rep{"xi", rng.seed, N, samples, {}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    const auto s = summarize(z[i]);
    const std::string tag = basis[i].label.to_string();
    rep.add_estimate("mean_" + tag, s.mean, s.mean_se);
    rep.add_estimate("var_" + tag, s.variance, s.variance_se);
    rep.check("mean_" + tag + "_within_3se", s.mean, -3.0 * s.mean_se, 3.0 * s.mean_se);
    rep.check("var_" + tag + "_nontrivial", s.variance, 0.05, std::numeric_limits<double>::infinity());
  }
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      const auto [cov, se] = covariance_with_se(z[i], z[j]);
      const std::string tag = basis[i].label.to_string() + "|" + basis[j].label.to_string();
      rep.add_estimate("cov_" + tag, cov, se);
      rep.check("cov_" + tag + "_within_3se", cov, -3.0 * se, 3.0 * se);
    }
  return rep;
}

// ---------------------------------------------------------------- anti-concentration

double anticoncentration_w(double m1, double m2, double delta) {
  if (!(m1 > 0.0)) throw DomainError("anticoncentration_w: m1 must be positive");
  if (!(m2 >= m1 * m1)) throw DomainError("anticoncentration_w: m2 must be at least m1^2");
  if (!(delta >= 0.0 && delta < std::min(m2 / (2.0 * m1), m1)))
    throw DomainError("anticoncentration_w: delta must lie in [0, min(m2/(2 m1), m1))");
  if (delta == 0.0) return 1.0 - m1 * m1 / m2;
  const double disc = m2 * m2 - 4.0 * delta * m2 * (m1 - delta);
  return (-m2 + 2.0 * delta * m1 + std::sqrt(std::max(disc, 0.0))) / (2.0 * delta * delta);
}

std::string to_string(TestDistribution d) {
  switch (d) {
    case TestDistribution::Uniform:
      return "uniform";
    case TestDistribution::AbsGaussian:
      return "abs_gaussian";
    case TestDistribution::Exponential:
      return "exponential";
  }
  return "unknown";
}

ExperimentReport anticoncentration_experiment(TestDistribution dist, std::size_t samples, std::size_t grid,
                                              const RngState& rng) {
  if (samples < 2 || grid < 1) throw DomainError("anticoncentration_experiment: need samples ≥ 2 and grid ≥ 1");
  Rng r(rng);
  std::vector<double> ys(samples);
  for (auto& y : ys) {
    switch (dist) {
      case TestDistribution::Uniform:
        y = r.uniform();
        break;
      case TestDistribution::AbsGaussian:
        y = std::abs(r.normal());
        break;
      case TestDistribution::Exponential:
        y = -std::log1p(-r.uniform());
        break;
    }
  }
  double m1 = 0.0;
  double m2 = 0.0;
  for (double y : ys) {
    m1 += y;
    m2 += y * y;
  }
  m1 /= static_cast<double>(samples);
  m2 /= static_cast<double>(samples);
  const double delta_max = std::min(m2 / (2.0 * m1), m1);

  ExperimentReport rep{"anticonc_" + to_string(dist), rng.seed, 0, samples, {}, {}};
  rep.add_estimate("m1", m1, 0.0);
  rep.add_estimate("m2", m2, 0.0);
  std::sort(ys.begin(), ys.end());
  for (std::size_t j = 0; j < grid; ++j) {
    const double delta = delta_max * static_cast<double>(j) / static_cast<double>(grid);
    const auto below = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), delta) - ys.begin());
    const auto [p, se] = proportion_with_se(below, samples);
    const double w = anticoncentration_w(m1, m2, delta);
    const std::string tag = "delta_" + std::to_string(j);
    rep.add_estimate(tag + "_value", delta, 0.0);
    rep.add_estimate(tag + "_prob", p, se);
    rep.add_estimate(tag + "_w", w, 0.0);
    rep.check(tag + "_bound", p, 0.0, w + 2.0 * se);
  }
  return rep;
}

// ---------------------------------------------------------------- edge containment

namespace {

std::pair<double, double> containment_probability(std::size_t N, double u, double v, double margin,
                                                  std::size_t samples, const RngState& rng) {
  std::vector<char> inside(samples, 0);
  parallel_for(samples, [&](std::size_t s) {
    Rng r(rng.substream(s));
    inside[s] = spectrum_within(shifted_gue(N, u, v, r), u - margin, v + margin) ? 1 : 0;
  });
  const auto hits = static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1));
  return proportion_with_se(hits, samples);
}

}  // namespace

ExperimentReport edge_containment(std::size_t N, double u, double v, double margin, std::size_t samples,
                                  const RngState& rng) {
  if (!(margin > 0.0)) throw DomainError("edge_containment: margin must be positive");
  if (!(u < v)) throw DomainError("edge_containment: requires u < v");
  if (samples < 1 || N < 1) throw DomainError("edge_containment: need N ≥ 1 and samples ≥ 1");
  const auto [p, se] = containment_probability(N, u, v, margin, samples, rng);
  ExperimentReport rep{"edge", rng.seed, N, samples, {}, {}};
  rep.add_estimate("probability", p, se);
  return rep;
}

ExperimentReport edge_containment_scan(const std::vector<std::size_t>& dims, double u, double v, double margin,
                                       std::size_t samples, const RngState& rng) {
  if (dims.empty()) throw DomainError("edge_containment_scan: no dimensions given");
  ExperimentReport rep{"edge", rng.seed, dims.back(), samples, {}, {}};
  std::vector<std::pair<double, double>> ps;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    auto single = edge_containment(dims[i], u, v, margin, samples, rng.substream(dims[i]));
    const auto& e = single.estimates.front();
    rep.add_estimate("probability_N" + std::to_string(dims[i]), e.value, e.std_error);
    ps.emplace_back(e.value, e.std_error);
  }
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    const double band = 2.0 * std::hypot(ps[i].second, ps[i + 1].second);
    rep.check("nondecreasing_N" + std::to_string(dims[i]) + "_N" + std::to_string(dims[i + 1]),
              ps[i + 1].first - ps[i].first, -band, std::numeric_limits<double>::infinity());
  }
  return rep;
}

}  // namespace hornfree
