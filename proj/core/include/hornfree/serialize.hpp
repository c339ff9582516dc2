#pragma once

#include <string>
#include <vector>

#include "hornfree/fluct.hpp"
#include "hornfree/horn.hpp"
#include "hornfree/ncwords.hpp"
#include "hornfree/qhorn.hpp"

namespace hornfree {

/// 17 significant digits, '.' as the decimal point whatever the locale.
std::string format_double(double x);

/// {"n":3,"triples":[{"r":1,"I":[1],"J":[1],"K":[1]},…]}
std::string to_json(const HornSystem& sys);
HornSystem horn_system_from_json(const std::string& text);

/// {"terms":[{"word":[1,2,1],"re":…,"im":…}]}; the empty word is the unit.
std::string to_json(const NCPoly& y);
NCPoly ncpoly_from_json(const std::string& text);

/// One line {"idx":…,"gamma":[…]} per sample.
std::string to_jsonl(const SampleCloud& cloud);

/// {experiment, seed, N, samples, estimates, stderr, asserts:[{name, pass, value, band}]}
std::string to_json(const ExperimentReport& report);

/// Columns t,lam1,lam2,lam3,lam4.
std::string figure1_csv(const std::vector<CurvePoint>& curve);

/// Single polyline through (λ₃, λ₄), viewBox fitted to the data.
std::string figure1_svg(const std::vector<CurvePoint>& curve);

/// Comma-separated table with a header row; numbers via format_double.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace hornfree
