#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hornfree/chebyshev.hpp"
#include "hornfree/errors.hpp"
#include "hornfree/fluct.hpp"
#include "hornfree/horn.hpp"
#include "hornfree/linalg.hpp"
#include "hornfree/ncwords.hpp"
#include "hornfree/qhorn.hpp"
#include "hornfree/serialize.hpp"

namespace hornfree::cli {
namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- argument parsing

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& flag) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) throw UsageError(flag + ": '" + s + "' is not a number");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  if (text.empty()) throw UsageError(flag + ": empty list");
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item, flag));
  return out;
}

EigenvalueSequence parse_sequence(const std::string& text, const std::string& flag) {
  return EigenvalueSequence::from_unsorted(parse_list(text, flag));
}

// "1,4" is diag(1, 4); "1,2;2,5" lists the rows of a real symmetric matrix.
HermitianMatrix parse_matrix(const std::string& text, const std::string& flag) {
  const auto rows = split(text, ';');
  if (rows.size() == 1) return HermitianMatrix::diagonal(parse_list(text, flag));
  std::vector<double> values;
  for (const auto& r : rows) {
    const auto row = parse_list(r, flag);
    if (row.size() != rows.size()) throw UsageError(flag + ": matrix must be square");
    values.insert(values.end(), row.begin(), row.end());
  }
  try {
    return HermitianMatrix::from_real(rows.size(), values);
  } catch (const StructuralError&) {
    throw UsageError(flag + ": matrix must be symmetric");
  }
}

std::vector<Polynomial> parse_polys(const std::string& text, const std::string& flag) {
  std::vector<Polynomial> out;
  for (const auto& item : split(text, ';')) out.emplace_back(parse_list(item, flag));
  return out;
}

std::string read_poly_source(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw UsageError("--poly: cannot read " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- output

struct Output {
  std::string path;
  std::string format;
};

void emit(const std::string& text, const Output& o, std::ostream& out) {
  if (o.path.empty() || o.path == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw OutputError("cannot open " + o.path + " for writing");
  f << text;
  if (!f.flush()) throw OutputError("failed writing " + o.path);
}

void require_format(const Output& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (o.format == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageError("--format " + o.format + " is not available here (supported: " + list + ")");
}

ojson certificate_json(const HornCertificate& c) {
  ojson j;
  j["kind"] = c.kind == HornCertificate::Kind::Trace ? "trace" : "inequality";
  if (c.triple) j["triple"] = to_string(*c.triple);
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  if (c.level) j["level"] = c.level;
  return j;
}

ojson verdict_json(const HornVerdict& v) {
  ojson j;
  j["member"] = v.member;
  j["inequalities_checked"] = v.inequalities_checked;
  if (v.checked_up_to) j["checked_up_to"] = v.checked_up_to;
  if (v.violation) j["violation"] = certificate_json(*v.violation);
  return j;
}

ojson poly_json(const NCPoly& y) { return ojson::parse(to_json(y)); }

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

int report_exit(const ExperimentReport& r) { return r.passed() ? kExitOk : kExitGateFailed; }

// ---------------------------------------------------------------- command table

struct Common {
  std::uint64_t seed = kDefaultSeed;
  Output output{"", "json"};
};

struct Leaf {
  CLI::App* app = nullptr;
  std::function<int(std::ostream&)> action;
};

class Registry {
 public:
  explicit Registry(CLI::App& root) : root_(root) {}

  CLI::App* group(const std::string& name, const std::string& desc) {
    auto* g = root_.add_subcommand(name, desc);
    g->usage("Usage: hornfree " + name + " SUBCOMMAND");
    g->require_subcommand(1);
    return g;
  }

  // Adds a leaf with --out and --format (and --seed when `seeded`).
  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& desc, Common& common,
                 const std::vector<std::string>& formats, std::function<int(std::ostream&)> action,
                 bool seeded = false) {
    auto* app = parent->add_subcommand(name, desc);
    app->usage("Usage: hornfree " + parent->get_name() + " " + name + " [OPTIONS]");
    common.output.format = formats.front();
    if (seeded) app->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    app->add_option("--out", common.output.path, "Output file (default: standard output)");
    std::string joined;
    for (const auto& f : formats) joined += (joined.empty() ? "" : "|") + f;
    app->add_option("--format", common.output.format, "Output format: " + joined)
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    leaves_.push_back({app, std::move(action)});
    return app;
  }

  [[nodiscard]] const Leaf* selected() const {
    for (const auto& l : leaves_)
      if (l.app->parsed()) return &l;
    return nullptr;
  }

 private:
  CLI::App& root_;
  std::vector<Leaf> leaves_;
};

// Deepest subcommand reached by a (possibly failed) parse, for usage text.
const CLI::App* deepest(const CLI::App* app) {
  for (const auto* sub : app->get_subcommands())
    if (sub->parsed()) return deepest(sub);
  return app;
}

// ---------------------------------------------------------------- horn

struct HornArgs {
  Common gen, check, fuv;
  int n = 3;
  std::string alpha, beta, gamma, u, v, w;
  double tol = -1.0;
  int n_max = 0;
};

void add_horn(Registry& reg, HornArgs& a) {
  auto* g = reg.group("horn", "Horn triples and Horn body membership");

  auto* gen = reg.leaf(g, "gen", "Emit the Horn system T_n as JSON", a.gen, {"json"}, [&a](std::ostream& out) {
    require_format(a.gen.output, {"json"});
    if (a.n < 1) throw UsageError("--n must be at least 1");
    const char* dir = std::getenv("HORN_CACHE_DIR");
    const auto sys = dir && *dir ? horn_triples_cached(a.n, dir) : horn_triples(a.n);
    emit(to_json(*sys), a.gen.output, out);
    return kExitOk;
  });
  gen->add_option("--n", a.n, "Matrix size n")->capture_default_str();

  auto* check = reg.leaf(g, "check", "Test gamma against the Horn body of (alpha, beta)", a.check, {"json"},
                         [&a](std::ostream& out) {
                           require_format(a.check.output, {"json"});
                           const auto al = parse_sequence(a.alpha, "--alpha");
                           const auto be = parse_sequence(a.beta, "--beta");
                           const auto ga = parse_sequence(a.gamma, "--gamma");
                           const double tol = a.tol >= 0 ? a.tol : default_horn_tolerance(al, be, ga);
                           const auto v = horn_membership(al, be, ga, tol);
                           auto j = verdict_json(v);
                           j["tol"] = tol;
                           emit(dump(j), a.check.output, out);
                           return v.member ? kExitOk : kExitGateFailed;
                         });
  check->add_option("--alpha", a.alpha, "Comma-separated eigenvalues of A")->required();
  check->add_option("--beta", a.beta, "Comma-separated eigenvalues of B")->required();
  check->add_option("--gamma", a.gamma, "Comma-separated candidate eigenvalues of A + B")->required();
  check->add_option("--tol", a.tol, "Tolerance (default 1e-9 * (1 + max |entry|))");

  auto* fuv = reg.leaf(g, "fuv", "Necessary conditions for w in F_{u,v} up to grid size n-max", a.fuv, {"json"},
                       [&a](std::ostream& out) {
                         require_format(a.fuv.output, {"json"});
                         const auto u = eigfun_from_seq(parse_sequence(a.u, "--u"));
                         const auto v = eigfun_from_seq(parse_sequence(a.v, "--v"));
                         const auto w = eigfun_from_seq(parse_sequence(a.w, "--w"));
                         const int n_max = a.n_max > 0 ? a.n_max : default_fuv_levels(w);
                         if (n_max < 2) throw UsageError("--n-max must be at least 2");
                         const double tol = a.tol >= 0 ? a.tol : 1e-9;
                         const auto v_ = fuv_membership(u, v, w, n_max, tol);
                         auto j = verdict_json(v_);
                         j["n_max"] = n_max;
                         emit(dump(j), a.fuv.output, out);
                         return v_.member ? kExitOk : kExitGateFailed;
                       });
  fuv->add_option("--u", a.u, "Step values of u (equal-width steps)")->required();
  fuv->add_option("--v", a.v, "Step values of v (equal-width steps)")->required();
  fuv->add_option("--w", a.w, "Step values of w (equal-width steps)")->required();
  fuv->add_option("--n-max", a.n_max, "Largest grid size (default 4 * steps of w)");
  fuv->add_option("--tol", a.tol, "Tolerance (default 1e-9)");
}

// ---------------------------------------------------------------- qhorn

struct QhornArgs {
  Common sample, example, inclusion, blocks, micro;
  std::string a1 = "1", a2 = "1", alpha, beta;
  std::size_t d = 1;
  std::size_t samples = 100;
  std::size_t grid = 101;
  double tol = -1.0;
  bool allow_large = false;
  double K = 2.0;
  std::size_t block_count = 2;
  std::size_t block_dim = 2;
  std::size_t m = 2;
};

QuantumHornSpec make_spec(const QhornArgs& a) {
  QuantumHornSpec spec{parse_matrix(a.a1, "--a1"), parse_matrix(a.a2, "--a2"), parse_sequence(a.alpha, "--alpha"),
                       parse_sequence(a.beta, "--beta"), a.d};
  try {
    spec.validate();
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }
  return spec;
}

HermitianMatrix random_with_spectrum(std::size_t n, double lo, double hi, Rng& rng) {
  std::vector<double> d(n);
  for (auto& x : d) x = lo + (hi - lo) * rng.uniform();
  return conjugate(haar_unitary(n, rng), HermitianMatrix::diagonal(d));
}

void add_spec_options(CLI::App* app, QhornArgs& a) {
  app->add_option("--a1", a.a1, "a1: diagonal '1,4' or rows '1,2;2,5'")->capture_default_str();
  app->add_option("--a2", a.a2, "a2: diagonal '1,4' or rows '1,2;2,5'")->capture_default_str();
  app->add_option("--alpha", a.alpha, "Comma-separated alpha")->required();
  app->add_option("--beta", a.beta, "Comma-separated beta")->required();
  app->add_option("--d", a.d, "Multiplicity d")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--samples", a.samples, "Number of Haar samples")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_qhorn(Registry& reg, QhornArgs& a) {
  auto* g = reg.group("qhorn", "Quantum Horn bodies, the worked example and block scaling");

  auto* sample = reg.leaf(
      g, "sample", "Sample spectra of a1 (x) U(alpha (x) 1_d)U* + a2 (x) V(beta (x) 1_d)V* as JSON lines", a.sample,
      {"json"},
      [&a](std::ostream& out) {
        require_format(a.sample.output, {"json"});
        const auto cloud = qhorn_sample(make_spec(a), a.samples, RngState{a.sample.seed, 0});
        emit(to_jsonl(cloud), a.sample.output, out);
        return kExitOk;
      },
      true);
  add_spec_options(sample, a);

  auto* ex = reg.leaf(g, "example-k", "Eigenvalue curve of the worked 4x4 example on a t-grid", a.example, {"csv", "svg", "json"},
                      [&a](std::ostream& out) {
                        require_format(a.example.output, {"csv", "svg", "json"});
                        const auto curve = figure1_curve(a.grid);
                        double worst = 0.0;
                        for (const auto& p : curve) {
                          const auto numeric = example_k(p.t).numeric;
                          for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(numeric[i] - p.lambda[i]));
                        }
                        if (a.example.output.format == "csv") {
                          emit(figure1_csv(curve), a.example.output, out);
                        } else if (a.example.output.format == "svg") {
                          emit(figure1_svg(curve), a.example.output, out);
                        } else {
                          ojson j;
                          j["threshold"] = example_k_threshold();
                          j["max_analytic_numeric_gap"] = worst;
                          ojson pts = ojson::array();
                          for (const auto& p : curve) pts.push_back({{"t", p.t}, {"lambda", p.lambda}});
                          j["points"] = std::move(pts);
                          emit(dump(j), a.example.output, out);
                        }
                        return worst <= 1e-9 ? kExitOk : kExitGateFailed;
                      });
  ex->add_option("--grid", a.grid, "Number of t values in [0, 1]")->capture_default_str()->check(CLI::Range(2, 1000000));

  auto* inc = reg.leaf(
      g, "inclusion", "Check sampled spectra against the Horn body of (eig(a1) (x) alpha, eig(a2) (x) beta)",
      a.inclusion, {"json"},
      [&a](std::ostream& out) {
        require_format(a.inclusion.output, {"json"});
        const auto spec = make_spec(a);
        const auto cloud = qhorn_sample(spec, a.samples, RngState{a.inclusion.seed, 0});
        const double tol = a.tol >= 0 ? a.tol : 1e-9 * (1.0 + std::max(spec.a1.matrix().max_abs(), 1.0) *
                                                                   std::max(spec.alpha.max_abs(), spec.beta.max_abs()) *
                                                                   std::max(1.0, spec.a2.matrix().max_abs()));
        const auto v = inclusion_check(cloud, tol, a.allow_large);
        ojson j;
        j["passed"] = v.passed;
        j["checked"] = v.checked;
        j["tol"] = tol;
        j["a_side"] = v.a_side.values();
        j["b_side"] = v.b_side.values();
        if (v.failing_idx) j["failing_idx"] = *v.failing_idx;
        if (v.certificate) j["certificate"] = certificate_json(*v.certificate);
        emit(dump(j), a.inclusion.output, out);
        return v.passed ? kExitOk : kExitGateFailed;
      },
      true);
  add_spec_options(inc, a);
  inc->add_option("--tol", a.tol, "Membership tolerance");
  inc->add_flag("--allow-large", a.allow_large, "Lift the n*N*d <= 6 size guard");

  auto* blocks = reg.leaf(
      g, "blocks", "Block-scaling construction with random blocks and window recovery", a.blocks, {"json"},
      [&a](std::ostream& out) {
        require_format(a.blocks.output, {"json"});
        if (!(a.K > 1.0)) throw UsageError("--K must exceed 1");
        Rng rng(RngState{a.blocks.seed, 0});
        const double K = a.K;
        std::vector<BlockPair> parts;
        for (std::size_t i = 0; i < a.block_count; ++i)
          parts.push_back({random_with_spectrum(a.block_dim, K, K * K, rng), random_with_spectrum(a.block_dim, K, K * K, rng)});
        const auto x1 = random_with_spectrum(2, 1.0 / K, K, rng);
        const auto x2 = random_with_spectrum(2, 1.0 / K, K, rng);
        const auto big = block_scale_construction(parts, K);
        const auto h = kron(big.a1, x1) + kron(big.a2, x2);
        ExperimentReport r{"blocks", a.blocks.seed, h.dim(), 1, {}, {}};
        std::size_t recovered = 0;
        for (std::size_t i = 1; i <= a.block_count; ++i) {
          const auto [lo, hi] = block_window(K, static_cast<int>(i));
          const double s = std::pow(K, 4.0 * static_cast<double>(i));
          const auto expected = eigenvalues(kron(s * parts[i - 1].a1, x1) + kron(s * parts[i - 1].a2, x2));
          const auto cut = spectral_window_cut(h, lo, hi);
          double gap = cut.size() == expected.size() ? 0.0 : std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < std::min(cut.size(), expected.size()); ++k)
            gap = std::max(gap, std::abs(cut[k] - expected[k]) / std::max(1.0, std::abs(expected[0])));
          recovered += cut.size();
          const std::string tag = "block_" + std::to_string(i);
          r.add_estimate(tag + "_window_lo", lo, 0.0);
          r.add_estimate(tag + "_window_hi", hi, 0.0);
          r.check(tag + "_recovered", gap, 0.0, 1e-9);
          if (i + 1 <= a.block_count) r.check(tag + "_window_disjoint", block_window(K, static_cast<int>(i + 1)).first - hi, 0.0, std::numeric_limits<double>::infinity());
        }
        r.check("all_eigenvalues_in_windows", static_cast<double>(recovered), static_cast<double>(h.dim()), static_cast<double>(h.dim()));
        emit(to_json(r), a.blocks.output, out);
        return report_exit(r);
      },
      true);
  blocks->add_option("--K", a.K, "Scale K > 1")->capture_default_str();
  blocks->add_option("--m", a.block_count, "Number of blocks")->capture_default_str()->check(CLI::Range(1, 6));
  blocks->add_option("--n", a.block_dim, "Dimension of each block")->capture_default_str()->check(CLI::Range(1, 16));

  auto* micro = reg.leaf(
      g, "microstate", "Moment defect of Haar-rotated copies of (a1, a2) against their own moments", a.micro, {"json"},
      [&a](std::ostream& out) {
        require_format(a.micro.output, {"json"});
        const auto x1 = parse_matrix(a.a1, "--a1");
        const auto x2 = parse_matrix(a.a2, "--a2");
        if (x1.dim() != x2.dim()) throw UsageError("--a1 and --a2 must have the same size");
        const auto target = trace_moments(x1, x2, a.m);
        std::vector<double> defects(a.samples);
        const RngState root{a.micro.seed, 0};
        for (std::size_t s = 0; s < a.samples; ++s) {
          Rng rng(root.substream(s));
          defects[s] = microstate_defect(target, conjugate(haar_unitary(x1.dim(), rng), x1),
                                         conjugate(haar_unitary(x2.dim(), rng), x2), a.m);
        }
        ExperimentReport r{"microstate", a.micro.seed, x1.dim(), a.samples, {}, {}};
        r.add_estimate("self_defect", microstate_defect(target, x1, x2, a.m), 0.0);
        double worst = 0.0, mean = 0.0;
        for (double d : defects) {
          worst = std::max(worst, d);
          mean += d;
        }
        r.add_estimate("mean_rotated_defect", mean / static_cast<double>(a.samples), 0.0);
        r.add_estimate("max_rotated_defect", worst, 0.0);
        r.check("self_defect_zero", r.estimate("self_defect")->value, 0.0, 1e-12);
        emit(to_json(r), a.micro.output, out);
        return report_exit(r);
      },
      true);
  micro->add_option("--a1", a.a1, "Target a1: diagonal '1,0' or rows")->capture_default_str();
  micro->add_option("--a2", a.a2, "Target a2: diagonal '0,1' or rows")->capture_default_str();
  micro->add_option("--m", a.m, "Largest word length")->capture_default_str()->check(CLI::Range(1, 8));
  micro->add_option("--samples", a.samples, "Number of rotated candidates")->capture_default_str()->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------- words

struct WordsArgs {
  Common classes, decompose, separate, kernel;
  std::size_t p = 4;
  int k = 2;
  std::string poly;
  double u = 0.0, v = 1.0;
  double c = 0.0, d_bound = 1.0;
  std::size_t n_max = 4;
  std::size_t budget = 200;
  std::size_t N = 1;
  std::size_t trials = 0;
};

ojson label_json(const XiLabel& l) { return l.to_string(); }

void add_words(Registry& reg, WordsArgs& a) {
  auto* g = reg.group("words", "Words, cyclic classes and the commutator space");

  auto* classes = reg.leaf(g, "classes", "Cyclic classes of words of length p", a.classes, {"json"}, [&a](std::ostream& out) {
    require_format(a.classes.output, {"json"});
    ojson arr = ojson::array();
    for (const auto& c : cyclic_classes(a.k, a.p)) {
      ojson e;
      e["representative"] = c.representative.letters;
      e["word"] = c.representative.to_string();
      e["size"] = c.size;
      const auto f = canonical_s_form(c);
      if (const auto* pw = std::get_if<PowerTag>(&f)) {
        e["form"] = "power";
        e["letter"] = pw->letter;
        e["exponent"] = pw->exponent;
      } else {
        e["form"] = "alternating";
        ojson blocks = ojson::array();
        for (const auto& [letter, exp] : std::get<SForm>(f).blocks) blocks.push_back({letter, exp});
        e["blocks"] = std::move(blocks);
      }
      arr.push_back(std::move(e));
    }
    ojson j;
    j["k"] = a.k;
    j["p"] = a.p;
    j["classes"] = std::move(arr);
    emit(dump(j), a.classes.output, out);
    return kExitOk;
  });
  classes->add_option("--p", a.p, "Word length")->capture_default_str()->check(CLI::Range(1, 16));
  classes->add_option("--k", a.k, "Number of letters")->capture_default_str()->check(CLI::Range(1, 9));

  auto* dec = reg.leaf(g, "decompose", "Split a polynomial into commutator part and Xi coordinates", a.decompose, {"json"},
                       [&a](std::ostream& out) {
                         require_format(a.decompose.output, {"json"});
                         if (!(a.u < a.v)) throw UsageError("--u must be below --v");
                         const auto y = ncpoly_from_json(read_poly_source(a.poly));
                         const auto r = decompose_IJ(y, a.u, a.v, std::max(2, y.max_letter()));
                         ojson j;
                         j["is_commutator"] = is_commutator_element(y);
                         j["i_part"] = poly_json(r.i_part);
                         ojson coeffs = ojson::array();
                         for (const auto& [label, c] : r.j_coeffs)
                           coeffs.push_back({{"element", label_json(label)}, {"re", c.real()}, {"im", c.imag()}});
                         j["j_coeffs"] = std::move(coeffs);
                         emit(dump(j), a.decompose.output, out);
                         return kExitOk;
                       });
  dec->add_option("--poly", a.poly, "Polynomial as JSON, or @file")->required();
  dec->add_option("--u", a.u, "Left end of the interval")->capture_default_str();
  dec->add_option("--v", a.v, "Right end of the interval")->capture_default_str();

  auto* sep = reg.leaf(
      g, "separate", "Search random matrix pairs with spectra in [c, d] on which Tr y is nonzero", a.separate, {"json"},
      [&a](std::ostream& out) {
        require_format(a.separate.output, {"json"});
        const auto y = ncpoly_from_json(read_poly_source(a.poly));
        const auto pair = find_separating_pair(y, a.c, a.d_bound, a.n_max, a.budget, RngState{a.separate.seed, 0});
        ojson j;
        j["found"] = pair.has_value();
        if (pair) {
          j["dimension"] = pair->dimension;
          j["draws"] = pair->draws;
          j["trace_re"] = pair->trace_value.real();
          j["trace_im"] = pair->trace_value.imag();
          j["a1_eigenvalues"] = eigenvalues(pair->a1).values();
          j["a2_eigenvalues"] = eigenvalues(pair->a2).values();
        }
        emit(dump(j), a.separate.output, out);
        return pair ? kExitOk : kExitGateFailed;
      },
      true);
  sep->add_option("--poly", a.poly, "Polynomial as JSON, or @file")->required();
  sep->add_option("--c", a.c, "Lower spectral bound")->capture_default_str();
  sep->add_option("--d-bound", a.d_bound, "Upper spectral bound")->capture_default_str();
  sep->add_option("--n-max", a.n_max, "Largest matrix size tried")->capture_default_str()->check(CLI::Range(1, 64));
  sep->add_option("--budget", a.budget, "Total number of random draws")->capture_default_str()->check(CLI::PositiveNumber);

  auto* kr = reg.leaf(
      g, "kernel-rank", "Rank of trace evaluation on degree-p classes at N x N matrices", a.kernel, {"json"},
      [&a](std::ostream& out) {
        require_format(a.kernel.output, {"json"});
        const std::size_t classes = cyclic_classes(2, a.p).size();
        const std::size_t trials = a.trials ? a.trials : 2 * classes + 5;
        const auto r = kernel_rank(a.N, a.p, trials, RngState{a.kernel.seed, 0});
        ojson j;
        j["N"] = a.N;
        j["p"] = a.p;
        j["trials"] = trials;
        j["classes"] = r.classes;
        j["rank"] = r.rank;
        j["kernel_dim"] = r.kernel_dim;
        j["stabilized"] = r.stabilized;
        ojson kernel = ojson::array();
        for (const auto& y : r.kernel) kernel.push_back(poly_json(y));
        j["kernel"] = std::move(kernel);
        emit(dump(j), a.kernel.output, out);
        return r.stabilized ? kExitOk : kExitGateFailed;
      },
      true);
  kr->add_option("--N", a.N, "Matrix size")->capture_default_str()->check(CLI::Range(1, 32));
  kr->add_option("--p", a.p, "Word length")->capture_default_str()->check(CLI::Range(1, 12));
  kr->add_option("--samples", a.trials, "Random evaluation points (default 2 * classes + 5)");
}

// ---------------------------------------------------------------- cheb

struct ChebArgs {
  Common table, alpha;
  unsigned n = 6;
  std::string kind = "first";
};

void add_cheb(Registry& reg, ChebArgs& a) {
  auto* g = reg.group("cheb", "Monic Chebyshev polynomials on [-2, 2]");

  auto* table = reg.leaf(g, "table", "Coefficients of T_0..T_n or U_0..U_n", a.table, {"csv", "json"}, [&a](std::ostream& out) {
    require_format(a.table.output, {"csv", "json"});
    const auto kind = a.kind == "first" ? ChebKind::First : ChebKind::Second;
    if (a.table.output.format == "csv") {
      std::vector<std::string> header{"n"};
      for (unsigned k = 0; k <= a.n; ++k) header.push_back("c" + std::to_string(k));
      std::vector<std::vector<double>> rows;
      for (unsigned m = 0; m <= a.n; ++m) {
        std::vector<double> row{static_cast<double>(m)};
        const auto p = cheb(kind, m);
        for (unsigned k = 0; k <= a.n; ++k) row.push_back(p.coeff(k));
        rows.push_back(std::move(row));
      }
      emit(to_csv(header, rows), a.table.output, out);
    } else {
      ojson arr = ojson::array();
      for (unsigned m = 0; m <= a.n; ++m) arr.push_back({{"n", m}, {"coeffs", cheb(kind, m).coeffs()}});
      ojson j;
      j["kind"] = a.kind;
      j["polynomials"] = std::move(arr);
      emit(dump(j), a.table.output, out);
    }
    return kExitOk;
  });
  table->add_option("--n", a.n, "Largest degree")->capture_default_str()->check(CLI::Range(0, 60));
  table->add_option("--kind", a.kind, "first|second")->capture_default_str()->check(CLI::IsMember({"first", "second"}));

  auto* alpha = reg.leaf(g, "alpha", "Semicircle averages alpha_n of T_n, with a quadrature cross-check", a.alpha, {"csv", "json"},
                         [&a](std::ostream& out) {
                           require_format(a.alpha.output, {"csv", "json"});
                           if (a.n < 1) throw UsageError("--n must be at least 1");
                           std::vector<std::vector<double>> rows;
                           double worst = 0.0;
                           for (unsigned m = 1; m <= a.n; ++m) {
                             const double exact = alpha_coeff(m);
                             const double quad =
                                 inner_product(cheb(ChebKind::First, m), Polynomial({1.0}), ChebKind::Second) /
                                 (2.0 * std::numbers::pi);
                             worst = std::max(worst, std::abs(exact - quad));
                             rows.push_back({static_cast<double>(m), exact, quad});
                           }
                           if (a.alpha.output.format == "csv") {
                             emit(to_csv({"n", "alpha", "quadrature"}, rows), a.alpha.output, out);
                           } else {
                             ojson arr = ojson::array();
                             for (const auto& r : rows) arr.push_back({{"n", r[0]}, {"alpha", r[1]}, {"quadrature", r[2]}});
                             emit(dump(ojson{{"alpha", arr}}), a.alpha.output, out);
                           }
                           return worst <= 1e-10 ? kExitOk : kExitGateFailed;
                         });
  alpha->add_option("--n", a.n, "Largest index")->capture_default_str()->check(CLI::Range(1, 40));
}

// ---------------------------------------------------------------- fluct

struct FluctArgs {
  Common clt, sof, xi, anticonc, edge;
  std::size_t N = 200;
  std::size_t sof_N = 150;
  std::size_t xi_N = 100;
  std::vector<std::size_t> edge_N{50, 100, 200};
  unsigned m = 4;
  std::size_t xi_degree = 3;
  std::size_t samples = 1000;
  std::size_t sof_samples = 2000;
  std::size_t anticonc_samples = 10000;
  std::size_t edge_samples = 500;
  std::string p = "0,1", q = "0,1", pt = "0,1", qt = "0,1", r = "0,1";
  double u = 0.0, v = 1.0;
  double edge_u = -2.0, edge_v = 2.0, margin = 0.5;
  std::string dist = "all";
  std::size_t grid = 10;
};

void add_fluct(Registry& reg, FluctArgs& a) {
  auto* g = reg.group("fluct", "Monte Carlo checks of GUE trace fluctuations");

  auto* clt = reg.leaf(
      g, "clt", "Chebyshev trace fluctuations of GUE (unit-variance gates)", a.clt, {"json"},
      [&a](std::ostream& out) {
        require_format(a.clt.output, {"json"});
        const auto r = clt_johansson(a.N, a.m, a.samples, RngState{a.clt.seed, 0});
        emit(to_json(r), a.clt.output, out);
        return report_exit(r);
      },
      true);
  clt->add_option("--N", a.N, "Matrix size")->capture_default_str()->check(CLI::PositiveNumber);
  clt->add_option("--m", a.m, "Number of Chebyshev degrees (1..8)")->capture_default_str()->check(CLI::Range(1, 8));
  clt->add_option("--samples", a.samples, "Monte Carlo samples (>= 100)")->capture_default_str()->check(CLI::Range(100, 100000000));

  auto* sof = reg.leaf(
      g, "sof", "Second-order covariance of traces of alternating products of two GUE", a.sof, {"json"},
      [&a](std::ostream& out) {
        require_format(a.sof.output, {"json"});
        const auto r = sof_experiment(parse_polys(a.p, "--p"), parse_polys(a.q, "--q"), parse_polys(a.pt, "--pt"),
                                      parse_polys(a.qt, "--qt"), a.sof_N, a.sof_samples, RngState{a.sof.seed, 0},
                                      Polynomial(parse_list(a.r, "--r")));
        emit(to_json(r), a.sof.output, out);
        return report_exit(r);
      },
      true);
  sof->add_option("--N", a.sof_N, "Matrix size (>= 50)")->capture_default_str()->check(CLI::Range(50, 100000));
  sof->add_option("--samples", a.sof_samples, "Monte Carlo samples")->capture_default_str()->check(CLI::Range(2, 100000000));
  sof->add_option("--p", a.p, "Centred polynomials p_j as coefficient lists separated by ';'")->capture_default_str();
  sof->add_option("--q", a.q, "Centred polynomials q_j")->capture_default_str();
  sof->add_option("--pt", a.pt, "Centred polynomials p~_j")->capture_default_str();
  sof->add_option("--qt", a.qt, "Centred polynomials q~_j")->capture_default_str();
  sof->add_option("--r", a.r, "Polynomial r for the Tr r(X) cross term")->capture_default_str();

  auto* xi = reg.leaf(
      g, "xi", "Fluctuations of the Xi family on shifted GUE pairs", a.xi, {"json"},
      [&a](std::ostream& out) {
        require_format(a.xi.output, {"json"});
        if (!(a.u < a.v)) throw UsageError("--u must be below --v");
        const auto r = xi_fluctuations(a.u, a.v, a.xi_degree, a.xi_N, a.samples, RngState{a.xi.seed, 0});
        emit(to_json(r), a.xi.output, out);
        return report_exit(r);
      },
      true);
  xi->add_option("--N", a.xi_N, "Matrix size")->capture_default_str()->check(CLI::PositiveNumber);
  xi->add_option("--m", a.xi_degree, "Largest degree (1..4)")->capture_default_str()->check(CLI::Range(1, 4));
  xi->add_option("--samples", a.samples, "Monte Carlo samples")->capture_default_str()->check(CLI::Range(2, 100000000));
  xi->add_option("--u", a.u, "Left end of the shifted interval")->capture_default_str();
  xi->add_option("--v", a.v, "Right end of the shifted interval")->capture_default_str();

  auto* anti = reg.leaf(
      g, "anticonc", "Empirical check of the anti-concentration bound w(m1, m2, delta)", a.anticonc, {"json"},
      [&a](std::ostream& out) {
        require_format(a.anticonc.output, {"json"});
        std::vector<TestDistribution> dists;
        if (a.dist == "uniform" || a.dist == "all") dists.push_back(TestDistribution::Uniform);
        if (a.dist == "abs_gaussian" || a.dist == "all") dists.push_back(TestDistribution::AbsGaussian);
        if (a.dist == "exponential" || a.dist == "all") dists.push_back(TestDistribution::Exponential);
        ExperimentReport all{"anticonc", a.anticonc.seed, 0, a.anticonc_samples, {}, {}};
        for (std::size_t i = 0; i < dists.size(); ++i) {
          const auto r = anticoncentration_experiment(dists[i], a.anticonc_samples, a.grid,
                                                      RngState{a.anticonc.seed, 0}.substream(i));
          const std::string tag = to_string(dists[i]) + ".";
          for (const auto& e : r.estimates) all.add_estimate(tag + e.name, e.value, e.std_error);
          for (const auto& c : r.asserts) all.asserts.push_back(Assertion{tag + c.name, c.pass, c.value, c.lo, c.hi});
        }
        emit(to_json(all), a.anticonc.output, out);
        return report_exit(all);
      },
      true);
  anti->add_option("--dist", a.dist, "uniform|abs_gaussian|exponential|all")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "abs_gaussian", "exponential", "all"}));
  anti->add_option("--samples", a.anticonc_samples, "Samples per distribution")->capture_default_str()->check(CLI::Range(2, 100000000));
  anti->add_option("--grid", a.grid, "Number of delta values")->capture_default_str()->check(CLI::Range(1, 10000));

  auto* edge = reg.leaf(
      g, "edge", "Probability that shifted GUE spectra stay within [u - margin, v + margin]", a.edge, {"json"},
      [&a](std::ostream& out) {
        require_format(a.edge.output, {"json"});
        if (!(a.edge_u < a.edge_v)) throw UsageError("--u must be below --v");
        if (!(a.margin > 0)) throw UsageError("--margin must be positive");
        const auto r = edge_containment_scan(a.edge_N, a.edge_u, a.edge_v, a.margin, a.edge_samples,
                                             RngState{a.edge.seed, 0});
        emit(to_json(r), a.edge.output, out);
        return report_exit(r);
      },
      true);
  edge->add_option("--N", a.edge_N, "Comma-separated increasing matrix sizes")->delimiter(',')->capture_default_str();
  edge->add_option("--u", a.edge_u, "Left end")->capture_default_str();
  edge->add_option("--v", a.edge_v, "Right end")->capture_default_str();
  edge->add_option("--margin", a.margin, "Margin around [u, v]")->capture_default_str();
  edge->add_option("--samples", a.edge_samples, "Samples per size")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Horn inequalities, quantum Horn bodies and GUE fluctuation experiments", "hornfree"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hornfree 0.1.0");

  Registry reg(app);
  HornArgs horn;
  QhornArgs qhorn;
  WordsArgs words;
  ChebArgs chebs;
  FluctArgs fluct;
  add_horn(reg, horn);
  add_qhorn(reg, qhorn);
  add_words(reg, words);
  add_cheb(reg, chebs);
  add_fluct(reg, fluct);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << deepest(&app)->help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << deepest(&app)->help();
    return kExitUsage;
  }

  const Leaf* leaf = reg.selected();
  if (!leaf) {
    err << deepest(&app)->help();
    return kExitUsage;
  }
  try {
    return leaf->action(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << leaf->app->help();
    return kExitUsage;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hornfree::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hornfree::cli
