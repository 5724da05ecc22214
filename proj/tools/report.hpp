#pragma once

// Output rendering shared by the csv and json formats.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

namespace hydrolamb::report {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSignificantDigits = 12;

/// x rounded to 12 significant digits.  Integral values come back as
/// integers so that 0 prints as "0".
inline ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
  const double r = std::strtod(buf, nullptr);
  if (r == 0.0) return 0;
  if (r == std::trunc(r) && std::abs(r) < 1e15) return static_cast<long long>(r);
  return r;
}

/// The decimal text of number(x), identical to its json rendering.
inline std::string render(double x) { return number(x).dump(); }

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace hydrolamb::report
