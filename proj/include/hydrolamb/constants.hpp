#pragma once

/// Physical constants and unit conversions.
///
/// Everything past this header works in dimensionless variables; energies in
/// eV, frequencies in MHz and rates in 1/s only appear in the converters here.

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hydrolamb {

struct PhysicalConstants {
  double alpha0 = 7.2973525693e-3;  ///< fine-structure constant
  double mec2 = 510998.95000;       ///< electron rest energy [eV]
  double hbar = 6.582119569e-16;    ///< reduced Planck constant [eV s]

  /// Atomic energy unit mec2 (Z alpha0)^2 [eV].
  double atomic_energy(int Z) const {
    const double za = Z * alpha0;
    return mec2 * za * za;
  }

  /// mec2 alpha0 (Z alpha0)^4 / hbar [1/s], the natural unit of radiative rates.
  double rate_unit(int Z) const {
    const double za = Z * alpha0;
    return mec2 * alpha0 * za * za * za * za / hbar;
  }

  /// Energy in eV to the frequency E/h in units of 1e6 Hz.
  double to_MHz(double energy_eV) const {
    return energy_eV / (2.0 * std::numbers::pi * hbar) * 1e-6;
  }

  double from_MHz(double freq_MHz) const {
    return freq_MHz * 1e6 * (2.0 * std::numbers::pi * hbar);
  }

  /// Checks the values are in the physically sensible window.
  void validate() const {
    if (!(alpha0 > 7.29e-3 && alpha0 < 7.30e-3))
      throw std::invalid_argument("alpha0 outside (7.29e-3, 7.30e-3)");
    if (!(mec2 > 5.109e5 && mec2 < 5.110e5))
      throw std::invalid_argument("mec2 outside (5.109e5, 5.110e5) eV");
    if (!(hbar > 6.58e-16 && hbar < 6.59e-16))
      throw std::invalid_argument("hbar outside (6.58e-16, 6.59e-16) eV s");
  }
};

/// CODATA 2018.
inline PhysicalConstants default_constants() { return PhysicalConstants{}; }

/// Bound-state energy E_N = -mec2 (Z alpha0)^2 / (2 N^2) in eV.
inline double rydberg_energy(const PhysicalConstants& c, int Z, int N) {
  if (Z < 1) throw std::invalid_argument("rydberg_energy: Z must be >= 1");
  if (N < 1) throw std::invalid_argument("rydberg_energy: N must be >= 1");
  return -c.atomic_energy(Z) / (2.0 * N * N);
}

/// Reads a `key = value` constants file.  Keys: alpha0, mec2_eV, hbar_eVs.
/// Unknown keys are ignored, missing keys keep their CODATA 2018 value.
inline PhysicalConstants read_constants(std::istream& in) {
  PhysicalConstants c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::runtime_error("constants file line " + std::to_string(lineno) +
                                 ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto number = [&] {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != val.size() || val.empty())
        throw std::runtime_error("constants file line " + std::to_string(lineno) +
                                 ": bad number '" + val + "'");
      return v;
    };
    if (key == "alpha0")
      c.alpha0 = number();
    else if (key == "mec2_eV")
      c.mec2 = number();
    else if (key == "hbar_eVs")
      c.hbar = number();
  }
  c.validate();
  return c;
}

inline PhysicalConstants read_constants_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open constants file: " + path);
  return read_constants(in);
}

}  // namespace hydrolamb
