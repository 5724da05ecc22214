#pragma once

/// Brute-force reference evaluators for tests and the `verify` command.
/// Nothing on the primary result path depends on this header.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "energy_shift.hpp"

namespace hydrolamb::oracle {

struct Matrix2x2C {
  std::array<cplx, 4> m{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};  // row-major

  cplx& operator()(int i, int j) { return m[2 * i + j]; }
  const cplx& operator()(int i, int j) const { return m[2 * i + j]; }

  static Matrix2x2C identity() { return {}; }
  static Matrix2x2C zero() { return {{cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)}}; }

  friend Matrix2x2C operator*(const Matrix2x2C& a, const Matrix2x2C& b) {
    Matrix2x2C r = zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
  friend Matrix2x2C operator+(const Matrix2x2C& a, const Matrix2x2C& b) {
    Matrix2x2C r;
    for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] + b.m[k];
    return r;
  }
  friend Matrix2x2C operator*(cplx s, const Matrix2x2C& a) {
    Matrix2x2C r;
    for (int k = 0; k < 4; ++k) r.m[k] = s * a.m[k];
    return r;
  }

  cplx determinant() const { return m[0] * m[3] - m[1] * m[2]; }

  double max_abs_diff(const Matrix2x2C& o) const {
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(m[k] - o.m[k]));
    return d;
  }
};

/// [[alpha*, -beta], [-beta*, alpha]].
inline Matrix2x2C defining_matrix(const GroupElement& u) {
  return {{std::conj(u.alpha), -u.beta, -std::conj(u.beta), u.alpha}};
}

/// Scaling and squaring with a Taylor series.
inline Matrix2x2C expm(const Matrix2x2C& a) {
  double norm = 0.0;
  for (const auto& v : a.m) norm = std::max(norm, std::abs(v));
  int squarings = 0;
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix2x2C x = cplx(std::ldexp(1.0, -squarings)) * a;
  Matrix2x2C term = Matrix2x2C::identity(), sum = Matrix2x2C::identity();
  for (int k = 1; k <= 20; ++k) {
    term = cplx(1.0 / k) * (term * x);
    sum = sum + term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

struct Generators {
  Matrix2x2C j3, jp, jm;
};

/// j3 = sigma3/2, j1 = i sigma1/2, j2 = i sigma2/2, j+- = i sqrt(1/2) (j1 +- i j2).
inline Generators defining_generators() {
  const cplx I(0.0, 1.0);
  const Matrix2x2C s1{{cplx(0.0), cplx(1.0), cplx(1.0), cplx(0.0)}};
  const Matrix2x2C s2{{cplx(0.0), -I, I, cplx(0.0)}};
  const Matrix2x2C s3{{cplx(1.0), cplx(0.0), cplx(0.0), cplx(-1.0)}};
  const Matrix2x2C j1 = cplx(0.0, 0.5) * s1, j2 = cplx(0.0, 0.5) * s2;
  const cplx c = I * std::sqrt(0.5);
  return {cplx(0.5) * s3, c * (j1 + I * j2), c * (j1 + (-I) * j2)};
}

/// The disentangled product
/// exp(-sqrt2 e^{i(chi+psi)} tanh(rho) j+) (cosh rho)^{-2 j3} exp(-sqrt2 e^{-i(chi+psi)} tanh(rho) j-) exp(2 i chi j3)
/// in the defining representation.
inline Matrix2x2C bch_reconstruct_2x2(const BchCoordinates& b) {
  const auto g = defining_generators();
  const double t = std::tanh(b.rho);
  const cplx ph = std::polar(1.0, b.chi + b.psi);
  const Matrix2x2C f1 = expm(cplx(-std::sqrt(2.0) * t) * ph * g.jp);
  const Matrix2x2C f2 = expm(cplx(-2.0 * std::log(std::cosh(b.rho))) * g.j3);
  const Matrix2x2C f3 = expm(cplx(-std::sqrt(2.0) * t) * std::conj(ph) * g.jm);
  const Matrix2x2C f4 = expm(cplx(0.0, 2.0 * b.chi) * g.j3);
  return f1 * f2 * f3 * f4;
}

/// The disentangled product equals [[alpha, beta], [beta*, alpha*]], which is
/// the defining matrix of the inverse element.
inline Matrix2x2C disentangled_form(const GroupElement& u) { return defining_matrix(inverse(u)); }

/// ( m_row | U | m_col ) from the finite r-sum over the disentangled factors.
inline cplx rep_element_via_bch_sum(int m0, int m_row, int m_col, const GroupElement& u) {
  if (m_row < m0 || m_col < m0) return {0.0, 0.0};
  const BchCoordinates b = bch_decompose(u);
  const double t = std::tanh(b.rho), lc = std::log(std::cosh(b.rho));
  const cplx e = std::polar(1.0, b.chi + b.psi);
  auto lg = [](int k) { return std::lgamma(double(k)); };
  const double lnum = 0.5 * (lg(m_row + m0) + lg(m_row - m0 + 1) + lg(m_col - m0 + 1) + lg(m_col + m0));
  cplx sum(0.0, 0.0);
  for (int r = m0; r <= std::min(m_row, m_col); ++r) {
    const int p = m_row - r, q = m_col - r;
    const double lmag = lnum - lg(r + m0) - lg(r - m0 + 1) - lg(p + 1) - lg(q + 1) - 2.0 * r * lc;
    if (t == 0.0 && (p > 0 || q > 0)) continue;
    const double ltan = (p + q) > 0 ? (p + q) * std::log(t) : 0.0;
    cplx term = std::exp(lmag + ltan) * std::pow(-e, p) * std::pow(std::conj(e), q);
    sum += term;
  }
  return sum * std::polar(1.0, 2.0 * b.chi * m_col);
}

struct SeriesValue {
  cplx value{};
  double last_term = 0.0;  ///< magnitude of the final summand, a truncation indicator
};

/// sin^2(T/2) sum_{n=L+1}^{n_max} |D_{N n}(scaling Phi)|^2 e^{-i n T}, with T = -i tau
/// on the imaginary-time contour.
inline SeriesValue kernel_via_spectral_series(int N, int L, Contour contour, double t, double Phi, int n_max) {
  check_quantum_numbers(N, L);
  const GroupElement u = scaling_coords(Phi);
  SeriesValue out;
  cplx sum(0.0, 0.0);
  for (int n = n_max; n >= L + 1; --n) {
    const double d = std::norm(rep_element_via_bch_sum(L + 1, N, n, u));
    const cplx ph = contour == Contour::real_time ? std::polar(1.0, -n * t) : cplx(std::exp(-n * t), 0.0);
    sum += d * ph;
    if (n == n_max) out.last_term = std::abs(d * ph);
  }
  if (contour == Contour::real_time) {
    const double s = std::sin(0.5 * t);
    out.value = s * s * sum;
  } else {
    const double s = std::sinh(0.5 * t);
    out.value = -s * s * sum;
    out.last_term *= s * s;
  }
  return out;
}

/// Tail sum_{n >= N} c_n e^{-n tau} of the imaginary-time series, with
/// c_n = d_n/2 - d_{n+1}/4 - d_{n-1}/4 from the r-sum matrix elements.
inline SeriesValue remainder_via_spectral_series(int N, int L, double tau, double Phi, int n_max) {
  check_quantum_numbers(N, L);
  const GroupElement u = scaling_coords(Phi);
  std::vector<double> d(std::size_t(n_max) + 2, 0.0);
  for (int n = L + 1; n <= n_max + 1; ++n) d[n] = std::norm(rep_element_via_bch_sum(L + 1, N, n, u));
  SeriesValue out;
  double sum = 0.0;
  for (int n = n_max; n >= N; --n) {
    const double c = 0.5 * d[n] - 0.25 * d[n + 1] - 0.25 * d[n - 1];
    const double term = c * std::exp(-n * tau);
    if (n == n_max) out.last_term = std::abs(term);
    sum += term;
  }
  out.value = sum;
  return out;
}

struct EpsShift {
  cplx shift_MHz{};  ///< real part: Lamb shift; imaginary part: -Gamma/(4 pi) in 1e6 / s
  bool converged = true;
};

/// Partial rate in 1e6 / s from the imaginary part of a complex shift in MHz.
inline double rate_from_imaginary_part(double im_MHz) { return -4.0 * std::numbers::pi * im_MHz; }

/// Complex shift from the un-rotated real-time representation with
/// nu -> nu + i eps, truncated at the last whole period of Q below T_max:
/// dE = K int dPhi w(Phi) i lambda int_0^{T_max} e^{i lambda T} Q(T, Phi) dT.
inline EpsShift shift_via_eps_real_axis(const QuantumState& s, double eps, double T_max,
                                        const QuadratureSpec& spec = {1e-8, 1e-13, 4000},
                                        const PhysicalConstants& c = {}) {
  s.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("shift_via_eps_real_axis: eps must be > 0");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int periods = std::max(1, int(std::floor(T_max / two_pi)));
  const double za = s.Z * c.alpha0;
  const double K = 4.0 * c.mec2 * c.alpha0 * za * za / (3.0 * std::numbers::pi * s.N * s.N);
  bool converged = true;

  QuadratureSpec tspec{1e-10, 1e-16, 2000};
  // i lambda int_0^{2 pi P} e^{i lambda T} Q dT via one period and a geometric sum
  auto inner = [&](double Phi) -> cplx {
    const double nu = s.N * std::exp(-Phi);
    const cplx lambda(nu, eps);
    std::vector<double> pts{0.0};
    const double h = std::min(1.0, 4.0 * std::exp(-Phi));
    for (double x = h; x < std::numbers::pi; x *= 2.0) pts.push_back(x);
    const std::size_t half = pts.size();
    pts.push_back(std::numbers::pi);
    for (std::size_t k = half; k-- > 1;) pts.push_back(two_pi - pts[k]);
    pts.push_back(two_pi);
    auto part = [&](bool imag) {
      return integrate_breakpoints(
          [&](double T) {
            const cplx v = std::exp(cplx(0.0, 1.0) * lambda * T) * kernel_q(s.N, s.L, T, Phi);
            return imag ? v.imag() : v.real();
          },
          pts, tspec);
    };
    const QuadratureResult re = part(false), im = part(true);
    converged = converged && re.converged && im.converged;
    const cplx q = std::exp(cplx(0.0, 1.0) * lambda * two_pi);
    const cplx geom = (1.0 - std::pow(q, periods)) / (1.0 - q);
    return cplx(0.0, 1.0) * lambda * cplx(re.value, im.value) * geom;
  };

  // breakpoints clustered around the near-resonances nu = n
  std::vector<double> pts{0.0};
  const DipoleOptions none{};
  for (int n = s.N; n >= 1; --n) {
    const double p = std::log(double(s.N) / n);
    for (double k : {-16.0, -8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double x = p + k * eps / n;
      if (x > 0.0) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double last = pts.back();
  auto integrand = [&](double Phi, bool imag) {
    const cplx v = weight(s, Phi, none, c) * inner(Phi);
    return imag ? v.imag() : v.real();
  };
  cplx total(0.0, 0.0);
  for (bool imag : {false, true}) {
    QuadratureResult r = integrate_breakpoints([&](double Phi) { return integrand(Phi, imag); }, pts, spec);
    r += integrate_semi_infinite([&](double Phi) { return integrand(Phi, imag); }, spec, last, 1.0);
    converged = converged && r.converged;
    (imag ? total.imag(r.value) : total.real(r.value));
  }
  return {c.to_MHz(K) * total, converged};
}

/// Value at eps = 0 of the model a + b eps + c eps ln(eps) + d eps^2 through
/// four samples.  The eps ln(eps) term comes from the resonance nu = N at
/// Phi = 0, where the weight vanishes linearly.
inline double extrapolate_eps_log(const std::array<double, 4>& eps, const std::array<double, 4>& y) {
  std::array<std::array<double, 5>, 4> a{};
  for (int i = 0; i < 4; ++i) a[i] = {1.0, eps[i], eps[i] * std::log(eps[i]), eps[i] * eps[i], y[i]};
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int k = col; k < 5; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::array<double, 4> x{};
  for (int i = 3; i >= 0; --i) {
    double v = a[i][4];
    for (int k = i + 1; k < 4; ++k) v -= a[i][k] * x[k];
    x[i] = v / a[i][i];
  }
  return x[0];
}

/// eps -> 0 limit from eps0, eps0/2, eps0/4, eps0/8 with T_max = 40/eps.
inline EpsShift shift_via_eps_extrapolated(const QuantumState& s, double eps0 = 0.02,
                                           const QuadratureSpec& spec = {1e-8, 1e-13, 4000},
                                           const PhysicalConstants& c = {}) {
  std::array<double, 4> h{}, re{}, im{};
  bool ok = true;
  for (int k = 0; k < 4; ++k) {
    const double eps = eps0 / (1 << k);
    const EpsShift r = shift_via_eps_real_axis(s, eps, 40.0 / eps, spec, c);
    ok = ok && r.converged;
    h[k] = eps;
    re[k] = r.shift_MHz.real();
    im[k] = r.shift_MHz.imag();
  }
  return {{extrapolate_eps_log(h, re), extrapolate_eps_log(h, im)}, ok};
}

}  // namespace hydrolamb::oracle
