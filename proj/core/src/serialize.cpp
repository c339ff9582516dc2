#include "hornfree/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "hornfree/errors.hpp"

namespace hornfree {

using ojson = nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

ojson parse(const std::string& text, const char* what) {
  try {
    return ojson::parse(text);
  } catch (const ojson::exception& e) {
    throw StructuralError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

// Non-finite values have no JSON literal; they are written as strings.
ojson number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

// ---------------------------------------------------------------- Horn systems

std::string to_json(const HornSystem& sys) {
  ojson j;
  j["n"] = sys.n;
  ojson arr = ojson::array();
  for (const auto& t : sys.triples) {
    ojson e;
    e["r"] = t.r;
    e["I"] = t.I;
    e["J"] = t.J;
    e["K"] = t.K;
    arr.push_back(std::move(e));
  }
  j["triples"] = std::move(arr);
  return j.dump() + "\n";
}

HornSystem horn_system_from_json(const std::string& text) {
  const ojson j = parse(text, "horn_system_from_json");
  try {
    HornSystem sys;
    sys.n = j.at("n").get<int>();
    for (const auto& e : j.at("triples")) {
      HornTriple t;
      t.n = sys.n;
      t.r = e.at("r").get<int>();
      t.I = e.at("I").get<std::vector<int>>();
      t.J = e.at("J").get<std::vector<int>>();
      t.K = e.at("K").get<std::vector<int>>();
      const auto r = static_cast<std::size_t>(t.r);
      if (t.I.size() != r || t.J.size() != r || t.K.size() != r)
        throw StructuralError("horn_system_from_json: triple cardinality does not match r");
      sys.triples.push_back(std::move(t));
    }
    return sys;
  } catch (const ojson::exception& e) {
    throw StructuralError(std::string("horn_system_from_json: ") + e.what());
  }
}

// ---------------------------------------------------------------- polynomials

std::string to_json(const NCPoly& y) {
  ojson terms = ojson::array();
  for (const auto& [w, c] : y.terms()) {
    ojson e;
    e["word"] = w.letters;
    e["re"] = number(c.real());
    e["im"] = number(c.imag());
    terms.push_back(std::move(e));
  }
  ojson j;
  j["terms"] = std::move(terms);
  return j.dump() + "\n";
}

NCPoly ncpoly_from_json(const std::string& text) {
  const ojson j = parse(text, "ncpoly_from_json");
  try {
    NCPoly y;
    for (const auto& e : j.at("terms")) {
      auto letters = e.at("word").get<std::vector<int>>();
      if (std::any_of(letters.begin(), letters.end(), [](int l) { return l < 1; }))
        throw StructuralError("ncpoly_from_json: letters are 1-based");
      const double re = e.value("re", 0.0);
      const double im = e.value("im", 0.0);
      y.add(Word(std::move(letters)), Complex(re, im));
    }
    return y;
  } catch (const ojson::exception& e) {
    throw StructuralError(std::string("ncpoly_from_json: ") + e.what());
  }
}

// ---------------------------------------------------------------- sample clouds

std::string to_jsonl(const SampleCloud& cloud) {
  std::string out;
  for (const auto& s : cloud.samples) {
    ojson j;
    j["idx"] = s.idx;
    j["gamma"] = s.gamma.values();
    out += j.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- reports

std::string to_json(const ExperimentReport& report) {
  ojson j;
  j["experiment"] = report.experiment;
  j["seed"] = report.seed;
  j["N"] = report.N;
  j["samples"] = report.samples;
  ojson est = ojson::object();
  ojson se = ojson::object();
  for (const auto& e : report.estimates) {
    est[e.name] = number(e.value);
    se[e.name] = number(e.std_error);
  }
  j["estimates"] = std::move(est);
  j["stderr"] = std::move(se);
  ojson asserts = ojson::array();
  for (const auto& a : report.asserts) {
    ojson e;
    e["name"] = a.name;
    e["pass"] = a.pass;
    e["value"] = number(a.value);
    e["band"] = ojson::array({number(a.lo), number(a.hi)});
    asserts.push_back(std::move(e));
  }
  j["asserts"] = std::move(asserts);
  j["passed"] = report.passed();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- tables

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw StructuralError("to_csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string figure1_csv(const std::vector<CurvePoint>& curve) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.size());
  for (const auto& p : curve) {
    if (p.lambda.size() != 4) throw StructuralError("figure1_csv: each point needs four eigenvalues");
    rows.push_back({p.t, p.lambda[0], p.lambda[1], p.lambda[2], p.lambda[3]});
  }
  return to_csv({"t", "lam1", "lam2", "lam3", "lam4"}, rows);
}

std::string figure1_svg(const std::vector<CurvePoint>& curve) {
  if (curve.empty()) throw StructuralError("figure1_svg: empty curve");
  double xmin = curve[0].lambda.at(2), xmax = xmin;
  double ymin = curve[0].lambda.at(3), ymax = ymin;
  for (const auto& p : curve) {
    xmin = std::min(xmin, p.lambda.at(2));
    xmax = std::max(xmax, p.lambda.at(2));
    ymin = std::min(ymin, p.lambda.at(3));
    ymax = std::max(ymax, p.lambda.at(3));
  }
  const double pad = 0.05 * std::max({xmax - xmin, ymax - ymin, 1e-9});
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;
  // SVG's y axis points down; flip so that λ₄ increases upward.
  std::string pts;
  for (const auto& p : curve) {
    if (!pts.empty()) pts += ' ';
    pts += format_double(p.lambda[2]) + "," + format_double(ymax + ymin - p.lambda[3]);
  }
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
  out += format_double(xmin) + " " + format_double(ymin) + " " + format_double(xmax - xmin) + " " +
         format_double(ymax - ymin) + "\">\n";
  out += "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"" + format_double(pad / 10.0) + "\" points=\"" +
         pts + "\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace hornfree
