#pragma once

/// Lamb shifts and radiative decay rates of hydrogenic states |N L M>, with
/// and without the dipole approximation, Bethe logarithms, and the dipole
/// Lamb-shift formula including the relativistic constants.
///
///   dE = -K int dPhi w(Phi) [ int_0^inf dtau e^{nu tau} dQ~/dtau
///                             + PV sum_n n R_n(Phi) / (nu - n) ]
///   K  = 4 mec2 alpha (Z alpha)^2 / (3 pi N^2),  nu = N e^{-Phi}
///
///   Gamma_n = -(8 alpha / (3 N^2)) R_n(Phi_n) w(Phi_n) mec2 (Z alpha)^2 / hbar,
///   Phi_n = ln(N/n).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "constants.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

namespace hydrolamb {

struct QuantumState {
  int N = 1;
  int L = 0;
  std::optional<double> J;  ///< L +- 1/2, only used by the dipole formula
  int Z = 1;

  void validate() const {
    check_quantum_numbers(N, L);
    if (Z < 1) throw std::invalid_argument("nuclear charge Z must be >= 1");
    if (J) {
      const bool ok = (*J == L + 0.5) || (L >= 1 && *J == L - 0.5);
      if (!ok) throw std::invalid_argument("J must be L + 1/2 or L - 1/2 (and >= 1/2)");
    }
  }
};

struct DipoleOptions {
  bool enabled = false;
  double cutoff_x = 0.0;  ///< hbar omega_> / (2 mec2)

  /// e^{2 Phi_cut} = 1 + 4 x_> (N / (Z alpha))^2.
  double phi_cut(const QuantumState& s, const PhysicalConstants& c) const {
    const double r = s.N / (s.Z * c.alpha0);
    return 0.5 * std::log1p(4.0 * cutoff_x * r * r);
  }

  void validate() const {
    if (enabled && !(cutoff_x > 0.0 && std::isfinite(cutoff_x)))
      throw std::invalid_argument("dipole mode needs a finite positive cutoff_x");
  }
};

struct PartialRate {
  int n = 0;
  double rate = 0.0;  ///< 1e6 / s
};

struct ShiftDiagnostics {
  double tau_phi_error_MHz = 0.0;
  double pv_error_MHz = 0.0;
  long outer_evaluations = 0;
  long inner_evaluations = 0;
  int inner_unconverged = 0;
};

struct ShiftResult {
  double lamb_shift_MHz = 0.0;
  std::vector<PartialRate> partial_rates;
  double total_rate = 0.0;            ///< 1e6 / s
  double tau_phi_integral_term = 0.0;  ///< MHz
  double pv_term = 0.0;                ///< MHz
  double error_estimate_MHz = 0.0;
  bool converged = true;
  ShiftDiagnostics diagnostics;
};

struct BetheResult {
  double gamma_NL = 0.0;
  double mean_excitation_Ry = 0.0;  ///< exp(gamma_NL)
  std::vector<double> cutoffs_used;
  std::vector<double> estimates;  ///< gamma at each cutoff
  double extrapolation_residual = 0.0;
  bool converged = true;
};

// Weights

namespace detail {
inline double weight_k(const QuantumState& s, const PhysicalConstants& c) {
  const double r = s.Z * c.alpha0 / s.N;
  return r * r;
}
}  // namespace detail

/// (sqrt(1+q) - 1) / sqrt(1+q) with q = 2 (Z alpha/N)^2 e^Phi sinh(Phi).
inline double weight_nondipole(const QuantumState& s, double Phi, const PhysicalConstants& c = {}) {
  const double q = detail::weight_k(s, c) * std::expm1(2.0 * Phi);
  if (!(q < 1e300)) return 1.0;
  const double r = std::sqrt(1.0 + q);
  return q / (r * (1.0 + r));
}

/// 1/2 (Z alpha/N)^2 (e^{2 Phi} - 1).
inline double weight_dipole(const QuantumState& s, double Phi, const PhysicalConstants& c = {}) {
  return 0.5 * detail::weight_k(s, c) * std::expm1(2.0 * Phi);
}

inline double weight(const QuantumState& s, double Phi, const DipoleOptions& o, const PhysicalConstants& c) {
  return o.enabled ? weight_dipole(s, Phi, c) : weight_nondipole(s, Phi, c);
}

// Rates

/// Partial rates Gamma_n for max(1, L) <= n <= N-1 in 1e6 / s.
inline std::vector<PartialRate> decay_rates(const QuantumState& s, const DipoleOptions& o = {},
                                            const PhysicalConstants& c = {}) {
  s.validate();
  std::vector<PartialRate> out;
  const double za = s.Z * c.alpha0;
  const double unit = c.mec2 * za * za / c.hbar * 1e-6;
  for (int n = std::max(1, s.L); n <= s.N - 1; ++n) {
    const double phi0 = std::log(double(s.N) / n);
    const auto d = scaling_elements_sq(s.N, s.L, phi0, n);
    double R = series_coefficient(d, n);
    // closed channels (e.g. ns -> 1s) vanish only up to the rounding of the three terms
    const double scale = 0.5 * d[n] + 0.25 * d[n + 1] + (n >= 1 ? 0.25 * d[n - 1] : 0.0);
    if (std::abs(R) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) R = 0.0;
    const double w = weight(s, phi0, o, c);
    out.push_back({n, R == 0.0 ? 0.0 : -(8.0 * c.alpha0 / (3.0 * s.N * s.N)) * R * w * unit});
  }
  return out;
}

inline double total_rate(const std::vector<PartialRate>& rates) {
  CompensatedSum<double> t;
  for (const auto& r : rates) t.add(r.rate);
  return t.value();
}

/// Dipole rate of the circular state (N, L = N-1) in 1e6 / s.
inline double circular_rate_closed_form(int N, int Z = 1, const PhysicalConstants& c = {}) {
  if (N < 2) throw std::invalid_argument("circular_rate_closed_form: N must be >= 2");
  if (Z < 1) throw std::invalid_argument("circular_rate_closed_form: Z must be >= 1");
  const double n = N;
  const double g = (2.0 / 3.0) * (n - 0.5) / (n * n * n * n * (n - 1.0) * (n - 1.0)) *
                   std::pow(1.0 + 1.0 / (4.0 * n * (n - 1.0)), -2.0 * n);
  return g * c.rate_unit(Z) * 1e-6;
}

// Lamb shift

/// int_0^inf dtau e^{nu tau} dQ~/dtau at one Phi: adaptive quadrature on
/// geometric panels up to the split point, the tail series beyond it.
inline QuadratureResult tau_integral(const KernelExpansion& ex, const QuadratureSpec& inner) {
  const double nu = ex.N() * std::exp(-ex.Phi());
  const double ts = ex.tau_split();
  std::vector<double> pts{0.0};
  for (double h = std::min(ts, std::exp(-ex.Phi())); h < ts; h *= 2.0) pts.push_back(h);
  pts.push_back(ts);
  QuadratureResult r = integrate_breakpoints(
      [&](double t) { return std::exp(nu * t) * ex.remainder_dtau(t); }, pts, inner);
  r.value += ex.tail_laplace_dtau(nu, ts);
  return r;
}

inline QuadratureSpec inner_spec(const QuadratureSpec& outer) {
  QuadratureSpec s;
  s.rel_tol = std::min(1e-12, 1e-3 * outer.rel_tol);
  s.abs_tol = 1e-300;
  s.max_subdivisions = std::max(100, outer.max_subdivisions / 4);
  return s;
}

namespace detail {

struct ShiftPieces {
  QuadratureResult tau_phi;
  QuadratureResult pv;
  long inner_evaluations = 0;
  int inner_unconverged = 0;
};

inline ShiftPieces shift_integrals(const QuantumState& s, const DipoleOptions& o, const QuadratureSpec& spec,
                                   const PhysicalConstants& c) {
  ShiftPieces out;
  const QuadratureSpec inner = inner_spec(spec);
  const Integrand f1 = [&](double Phi) {
    const double w = weight(s, Phi, o, c);
    if (w == 0.0) return 0.0;
    KernelExpansion ex(s.N, s.L, Phi);
    QuadratureSpec local = inner;
    local.abs_tol = std::max(1e-300, 1e-6 * spec.abs_tol / w);
    const QuadratureResult t = tau_integral(ex, local);
    out.inner_evaluations += t.evaluations;
    if (!t.converged) ++out.inner_unconverged;
    return w * t.value;
  };
  if (o.enabled) {
    const double cut = o.phi_cut(s, c);
    std::vector<double> pts{0.0};
    for (double p = 0.5; p < cut; p *= 2.0) pts.push_back(p);
    pts.push_back(cut);
    out.tau_phi = integrate_breakpoints(f1, pts, spec);
  } else {
    out.tau_phi = integrate_semi_infinite(f1, spec, 0.0, 1.0);
  }

  const double upper = o.enabled ? o.phi_cut(s, c) : std::numeric_limits<double>::infinity();
  for (int n = std::max(1, s.L); n <= s.N - 1; ++n) {
    const double phi0 = std::log(double(s.N) / n);
    if (!(phi0 < upper)) continue;
    // n R_n / (nu - n) = g / (Phi - Phi0) with g = w R_n (Phi - Phi0) / expm1(-(Phi - Phi0))
    const Integrand g = [&, n, phi0](double Phi) {
      const double w = weight(s, Phi, o, c);
      const double R = residue_coeffs(s.N, s.L, Phi).R(n);
      const double d = Phi - phi0;
      const double ratio = d == 0.0 ? -1.0 : d / std::expm1(-d);
      return w * R * ratio;
    };
    out.pv += integrate_principal_value(g, phi0, 0.0, upper, spec);
  }
  return out;
}

}  // namespace detail

inline ShiftResult lamb_shift(const QuantumState& s, const DipoleOptions& o = {}, const QuadratureSpec& spec = {},
                              const PhysicalConstants& c = {}) {
  s.validate();
  o.validate();
  spec.validate();
  const double za = s.Z * c.alpha0;
  const double K = 4.0 * c.mec2 * c.alpha0 * za * za / (3.0 * std::numbers::pi * s.N * s.N);
  const double to_mhz = c.to_MHz(K);
  const auto pieces = detail::shift_integrals(s, o, spec, c);

  ShiftResult r;
  r.tau_phi_integral_term = -to_mhz * pieces.tau_phi.value;
  r.pv_term = -to_mhz * pieces.pv.value;
  r.lamb_shift_MHz = r.tau_phi_integral_term + r.pv_term;
  r.diagnostics.tau_phi_error_MHz = to_mhz * pieces.tau_phi.error_estimate;
  r.diagnostics.pv_error_MHz = to_mhz * pieces.pv.error_estimate;
  r.diagnostics.outer_evaluations = pieces.tau_phi.evaluations + pieces.pv.evaluations;
  r.diagnostics.inner_evaluations = pieces.inner_evaluations;
  r.diagnostics.inner_unconverged = pieces.inner_unconverged;
  r.error_estimate_MHz = r.diagnostics.tau_phi_error_MHz + r.diagnostics.pv_error_MHz;
  r.converged = pieces.tau_phi.converged && pieces.pv.converged;
  r.partial_rates = decay_rates(s, o, c);
  r.total_rate = total_rate(r.partial_rates);
  return r;
}

// Bethe logarithm

inline std::vector<double> default_bethe_cutoffs() { return {1e3, 3e3, 1e4, 3e4, 1e5}; }

/// Unit (8 alpha^3 Z^4 / (3 pi N^3)) mec2 alpha^2 / 2 of the dipole formula, in MHz.
inline double dipole_shift_unit_MHz(int N, int Z, const PhysicalConstants& c) {
  const double a = c.alpha0;
  const double z4 = double(Z) * Z * Z * Z;
  const double ry = 0.5 * c.mec2 * a * a;
  return c.to_MHz(8.0 * a * a * a * z4 / (3.0 * std::numbers::pi * N * N * N) * ry);
}

/// gamma at a finite cutoff from the dipole-approximation Lamb shift.
inline double bethe_estimate(const QuantumState& s, double cutoff_x, double dipole_shift_MHz,
                             const PhysicalConstants& c) {
  double g = -dipole_shift_MHz / dipole_shift_unit_MHz(s.N, s.Z, c);
  if (s.L == 0) g += std::log(4.0 * cutoff_x) - 2.0 * std::log(s.Z * c.alpha0);
  return g;
}

/// Polynomial extrapolation to h = 0 of values y_i sampled at h_i (Neville).
inline double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& y) {
  std::vector<double> p = y;
  const std::size_t m = h.size();
  for (std::size_t k = 1; k < m; ++k)
    for (std::size_t i = m - 1; i >= k; --i) {
      p[i] = (h[i - k] * p[i] - h[i] * p[i - 1]) / (h[i - k] - h[i]);
      if (i == k) break;
    }
  return p[m - 1];
}

inline BetheResult bethe_log(const QuantumState& s, std::vector<double> cutoffs = default_bethe_cutoffs(),
                             const QuadratureSpec& spec = {}, const PhysicalConstants& c = {}) {
  s.validate();
  if (cutoffs.size() < 3) throw std::invalid_argument("bethe_log: need at least three cutoffs");
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end()) ||
      std::adjacent_find(cutoffs.begin(), cutoffs.end()) != cutoffs.end())
    throw std::invalid_argument("bethe_log: cutoffs must be strictly ascending");
  BetheResult b;
  b.cutoffs_used = cutoffs;
  bool quad_ok = true;
  std::vector<double> h;
  for (double x : cutoffs) {
    const ShiftResult r = lamb_shift(s, DipoleOptions{true, x}, spec, c);
    quad_ok = quad_ok && r.converged;
    b.estimates.push_back(bethe_estimate(s, x, r.lamb_shift_MHz, c));
    h.push_back(1.0 / std::sqrt(x));
  }
  b.gamma_NL = extrapolate_to_zero(h, b.estimates);
  // residual: the same extrapolation without the smallest cutoff
  std::vector<double> h2(h.begin() + 1, h.end()), y2(b.estimates.begin() + 1, b.estimates.end());
  b.extrapolation_residual = std::abs(extrapolate_to_zero(h2, y2) - b.gamma_NL);
  b.mean_excitation_Ry = std::exp(b.gamma_NL);
  bool monotone = true;
  for (std::size_t i = 2; i < b.estimates.size(); ++i) {
    const double d1 = b.estimates[i - 1] - b.estimates[i - 2], d2 = b.estimates[i] - b.estimates[i - 1];
    if (d1 * d2 < 0.0) monotone = false;
  }
  b.converged = quad_ok && monotone && b.extrapolation_residual < 1e-4 * std::abs(b.gamma_NL) + 0.01;
  return b;
}

// Dipole Lamb shift with relativistic constants

/// dE_NLJ in MHz from the Bethe logarithm.  With include_relativistic =
/// false the 19/30 term (L = 0) or the c_LJ term (L >= 1) is dropped.
inline double dipole_lamb_full(const QuantumState& s, double gamma_NL, const PhysicalConstants& c = {},
                               bool include_relativistic = true) {
  s.validate();
  double bracket = -gamma_NL;
  if (s.L == 0) {
    bracket -= 2.0 * std::log(s.Z * c.alpha0);
    if (include_relativistic) bracket += 19.0 / 30.0;
  } else if (include_relativistic) {
    if (!s.J) throw std::invalid_argument("dipole_lamb_full: J is required for L >= 1");
    const double cLJ = *s.J > s.L ? 1.0 / (s.L + 1) : -1.0 / s.L;
    bracket += 3.0 * cLJ / (8.0 * (2 * s.L + 1));
  }
  return dipole_shift_unit_MHz(s.N, s.Z, c) * bracket;
}

}  // namespace hydrolamb
