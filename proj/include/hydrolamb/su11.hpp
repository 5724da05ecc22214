#pragma once

/// SU(1,1) in the (alpha, beta) chart and matrix elements of its discrete
/// series representations bounded from below.
///
/// The 2x2 matrix of an element is u(alpha, beta) = [[alpha*, -beta], [-beta*, alpha]].

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "special_functions.hpp"

namespace hydrolamb {

using cplx = std::complex<double>;

struct GroupElement {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};

  double determinant() const { return std::norm(alpha) - std::norm(beta); }

  static GroupElement identity() { return {}; }
};

struct BchCoordinates {
  double rho = 0.0;
  double chi = 0.0;
  double psi = 0.0;
};

struct RepLabel {
  int m0 = 1;

  int casimir() const { return m0 * (1 - m0); }
};

inline void check_group_element(const GroupElement& u, double tol = 1e-9) {
  const double scale = std::norm(u.alpha) + std::norm(u.beta);
  if (!(std::abs(u.determinant() - 1.0) <= tol * std::max(1.0, scale)))
    throw std::invalid_argument("SU(1,1) element violates |alpha|^2 - |beta|^2 = 1");
}

inline GroupElement inverse(const GroupElement& u) { return {std::conj(u.alpha), -u.beta}; }

/// Matrix product u1 u2 written back in (alpha, beta).
inline GroupElement compose(const GroupElement& u1, const GroupElement& u2) {
  check_group_element(u1);
  check_group_element(u2);
  // top row of u1 u2: [a1* a2* + b1 b2*, -a1* b2 - b1 a2]
  const cplx top_left = std::conj(u1.alpha) * std::conj(u2.alpha) + u1.beta * std::conj(u2.beta);
  const cplx top_right = -std::conj(u1.alpha) * u2.beta - u1.beta * u2.alpha;
  return {std::conj(top_left), -top_right};
}

/// Element generated by the effective time evolution at time T and scaling Phi.
inline GroupElement time_evolution_coords(double T, double Phi) {
  const double s = std::sin(0.5 * T), c = std::cos(0.5 * T);
  return {cplx(c, -s * std::cosh(Phi)), cplx(-s * std::sinh(Phi), 0.0)};
}

inline GroupElement scaling_coords(double Phi) {
  return {cplx(std::cosh(0.5 * Phi), 0.0), cplx(0.0, std::sinh(0.5 * Phi))};
}

namespace detail {
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}
}  // namespace detail

/// alpha = e^{i chi} cosh(rho), beta = e^{i psi} sinh(rho); psi = 0 when beta = 0.
inline BchCoordinates bch_decompose(const GroupElement& u) {
  check_group_element(u);
  BchCoordinates b;
  b.rho = std::asinh(std::abs(u.beta));  // better conditioned than acosh near rho = 0
  b.chi = detail::wrap_angle(std::arg(u.alpha));
  b.psi = u.beta == cplx(0.0, 0.0) ? 0.0 : detail::wrap_angle(std::arg(u.beta));
  return b;
}

inline GroupElement bch_compose(const BchCoordinates& b) {
  return {std::polar(std::cosh(b.rho), b.chi), std::polar(std::sinh(b.rho), b.psi)};
}

namespace detail {

/// The closed-form series for m_row <= m_col.  m0 may be any integer with
/// m_row >= max(m0, 1 - m0); the formula is symmetric under m0 -> 1 - m0.
inline cplx finitetrafo(int m0, int m_row, int m_col, const GroupElement& u) {
  const int d = m_col - m_row;
  const int s = m_col + m_row;
  const cplx ac = std::conj(u.alpha), bc = std::conj(u.beta);
  if (d > 0 && bc == cplx(0.0, 0.0)) return {0.0, 0.0};
  const int hi = std::max(m0, 1 - m0), lo = std::min(m0, 1 - m0);
  // sqrt(Gamma(m+m0) Gamma(m-m0+1) / (Gamma(m'+m0) Gamma(m'-m0+1))) / d!
  const double log_mag =
      0.5 * (ln_gamma_ratio(m_col + hi, m_row + hi) + ln_gamma_ratio(m_col + lo, m_row + lo)) -
      log_factorial(d);
  const double h = hyp2f1_terminating(m0 - m_row, 1 - m0 - m_row, d + 1, -std::norm(u.beta));
  if (h == 0.0) return {0.0, 0.0};
  cplx log_val = -double(s) * std::log(ac) + cplx(log_mag + std::log(std::abs(h)), 0.0);
  if (d > 0) log_val += double(d) * std::log(bc);
  cplx v = std::exp(log_val);
  return h < 0.0 ? -v : v;
}

}  // namespace detail

/// ( m_row | U(u) | m_col ) in the representation with lowest weight m0.
/// Indices below m0 label no state and give exactly 0.
inline cplx rep_matrix_element(const RepLabel& label, int m_row, int m_col, const GroupElement& u) {
  if (label.m0 < 1) throw std::invalid_argument("rep_matrix_element: m0 must be >= 1");
  if (m_row < label.m0 || m_col < label.m0) return {0.0, 0.0};
  check_group_element(u);
  if (m_row <= m_col) return detail::finitetrafo(label.m0, m_row, m_col, u);
  return std::conj(detail::finitetrafo(label.m0, m_col, m_row, inverse(u)));
}

/// |( m_row | U(u) | m_col )|^2, which only depends on |alpha| and |beta| and
/// is symmetric in the two indices.
inline double rep_matrix_element_sq(const RepLabel& label, int m_row, int m_col, const GroupElement& u) {
  return std::norm(rep_matrix_element(label, m_row, m_col, u));
}

/// The series evaluated at an arbitrary integer m0 (including the partner
/// label 1 - m0 of an equivalent representation).  Indices must satisfy
/// min(m_row, m_col) >= max(m0, 1 - m0).
inline cplx rep_matrix_element_raw(int m0, int m_row, int m_col, const GroupElement& u) {
  if (std::min(m_row, m_col) < std::max(m0, 1 - m0))
    throw std::invalid_argument("rep_matrix_element_raw: index below the tower");
  check_group_element(u);
  if (m_row <= m_col) return detail::finitetrafo(m0, m_row, m_col, u);
  return std::conj(detail::finitetrafo(m0, m_col, m_row, inverse(u)));
}

}  // namespace hydrolamb
