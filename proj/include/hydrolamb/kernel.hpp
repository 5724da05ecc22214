#pragma once

/// The effective-time kernel Q_NL(T, Phi), its exponential-series
/// coefficients and the decaying remainder on the imaginary-time contour.
///
/// Real time:       Q = sin^2(T/2) f^{-2N} 2F1(L+1-N, -L-N; 1; z),
///                  f = cos(T/2) + i sin(T/2) cosh(Phi),  z = 1 - |f|^2.
/// Imaginary time:  T = -i tau, f = cosh(tau/2) + sinh(tau/2) cosh(Phi),
///                  z = sinh^2(tau/2) sinh^2(Phi), sin^2(T/2) -> -sinh^2(tau/2).
/// Series:          Q(-i tau) = sum_{n >= L} c_n e^{-n tau}, with
///                  c_n = |D_Nn|^2/2 - |D_N,n+1|^2/4 - |D_N,n-1|^2/4 and
///                  D the matrix of the scaling element in the m0 = L+1 tower.
///                  The residues R_n are the coefficients with n < N.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "su11.hpp"

namespace hydrolamb {

enum class Contour { real_time, imaginary_time };

struct KernelPoint {
  Contour contour = Contour::imaginary_time;
  double t = 0.0;  ///< T on the real axis, tau on the imaginary axis
  double Phi = 0.0;
  cplx f{1.0, 0.0};
  double z = 0.0;
  double chi = 0.0;  ///< arg f
  double nu = 0.0;   ///< N e^{-Phi}
};

struct ResidueEntry {
  int n = 0;
  double R = 0.0;
  double Phi0 = std::numeric_limits<double>::quiet_NaN();  ///< ln(N/n), NaN for n = 0
};

struct ResidueTable {
  int N = 1;
  int L = 0;
  double Phi = 0.0;
  std::vector<ResidueEntry> entries;  ///< n = L, ..., N-1

  double R(int n) const {
    for (const auto& e : entries)
      if (e.n == n) return e.R;
    return 0.0;
  }
};

inline void check_quantum_numbers(int N, int L) {
  if (N < 1) throw std::invalid_argument("principal quantum number N must be >= 1");
  if (L < 0 || L > N - 1) throw std::invalid_argument("angular momentum L must satisfy 0 <= L <= N-1");
}

inline KernelPoint make_kernel_point(int N, Contour contour, double t, double Phi) {
  KernelPoint p;
  p.contour = contour;
  p.t = t;
  p.Phi = Phi;
  p.nu = N * std::exp(-Phi);
  const double C = std::cosh(Phi), S = std::sinh(Phi);
  if (contour == Contour::real_time) {
    const double s = std::sin(0.5 * t), c = std::cos(0.5 * t);
    p.f = {c, s * C};
    p.z = -s * s * S * S;
    p.chi = std::arg(p.f);
  } else {
    const double sh = std::sinh(0.5 * t), ch = std::cosh(0.5 * t);
    p.f = {ch + sh * C, 0.0};
    p.z = sh * sh * S * S;
    p.chi = 0.0;
  }
  return p;
}

namespace detail {

/// x^n 2F1(-n, b; c; y/x) = sum_k t_k y^k x^{n-k} for x > 0, y >= 0.  Used on
/// the imaginary-time contour where z = y/x grows like e^{2 Phi} but f^{-2N}
/// shrinks faster; all terms share one sign there.
inline double hyp2f1_homogeneous(int n, int b, int c, double x, double y) {
  double term = std::pow(x, n);
  CompensatedSum<double> sum;
  sum.add(term);
  const double r = y / x;
  for (int k = 0; k < n; ++k) {
    term *= (double(k - n) * double(b + k)) / (double(c + k) * double(k + 1)) * r;
    sum.add(term);
    if (term == 0.0) break;
  }
  return sum.value();
}

/// f^{-2N} 2F1(L+1-N, -L-N; 1; z) and f^{-2N} d/dz 2F1 on the imaginary-time contour.
struct RotatedPieces {
  double value = 0.0;
  double dz = 0.0;
};

inline RotatedPieces rotated_pieces(int N, int L, double f, double z) {
  const int n = N - L - 1;
  const double x = 1.0 / (f * f);
  const double y = z * x;
  RotatedPieces out;
  out.value = std::pow(x, L + 1) * hyp2f1_homogeneous(n, -L - N, 1, x, y);
  if (n > 0) {
    // d/dz 2F1(a, b; 1; z) = a b 2F1(a+1, b+1; 2; z)
    const double ab = double(-n) * double(-L - N);
    out.dz = ab * std::pow(x, L + 2) * hyp2f1_homogeneous(n - 1, -L - N + 1, 2, x, y);
  }
  return out;
}

}  // namespace detail

/// Q(T, Phi) on the real axis from the terminating 2F1 (the first closed form).
inline cplx kernel_q_hypergeometric(int N, int L, double T, double Phi) {
  check_quantum_numbers(N, L);
  const KernelPoint p = make_kernel_point(N, Contour::real_time, T, Phi);
  const double s = std::sin(0.5 * T);
  if (s == 0.0) return {0.0, 0.0};
  const double F = hyp2f1_terminating(L + 1 - N, -L - N, 1, p.z);
  if (F == 0.0) return {0.0, 0.0};
  const double mag = std::exp(2.0 * std::log(std::abs(s)) + std::log(std::abs(F)) - N * std::log1p(-p.z));
  return (F < 0.0 ? -mag : mag) * std::polar(1.0, -2.0 * N * p.chi);
}

/// Q(T, Phi) on the real axis via the Jacobi form
/// sin^2(T/2) e^{-2iN chi} (1-z)^L P_{N+L}^{(0,-1-2L)}((1+z)/(1-z)).
inline cplx kernel_q_jacobi(int N, int L, double T, double Phi) {
  check_quantum_numbers(N, L);
  const KernelPoint p = make_kernel_point(N, Contour::real_time, T, Phi);
  const double s = std::sin(0.5 * T);
  const double omz = 1.0 - p.z;  // |f|^2 >= 1
  const double w = (1.0 + p.z) / omz;
  const double P = jacobi_p({N + L, 0, -1 - 2 * L, w});
  return s * s * std::pow(omz, L) * P * std::polar(1.0, -2.0 * N * p.chi);
}

/// Q(T, Phi) on the real time axis.  The Jacobi form is used for |z| <= 1;
/// beyond, its argument approaches the (2L+1)-fold zero at w = -1 and the
/// 2F1 form, dominated there by its leading power of z, is used instead.
inline cplx kernel_q(int N, int L, double T, double Phi) {
  check_quantum_numbers(N, L);
  if (Phi < 0.0) throw std::invalid_argument("kernel_q: Phi must be >= 0");
  const double s = std::sin(0.5 * T), S = std::sinh(Phi);
  const double z = -s * s * S * S;
  return z >= -1.0 ? kernel_q_jacobi(N, L, T, Phi) : kernel_q_hypergeometric(N, L, T, Phi);
}

/// Q(-i tau, Phi), real.
inline double kernel_q_rotated(int N, int L, double tau, double Phi) {
  check_quantum_numbers(N, L);
  if (Phi < 0.0) throw std::invalid_argument("kernel_q_rotated: Phi must be >= 0");
  const KernelPoint p = make_kernel_point(N, Contour::imaginary_time, tau, Phi);
  const double sh = std::sinh(0.5 * tau);
  return -sh * sh * detail::rotated_pieces(N, L, p.f.real(), p.z).value;
}

/// d/dtau Q(-i tau, Phi) by the chain rule through f(tau) and z(tau).
inline double kernel_q_rotated_dtau(int N, int L, double tau, double Phi) {
  check_quantum_numbers(N, L);
  const double C = std::cosh(Phi), S = std::sinh(Phi);
  const double sh = std::sinh(0.5 * tau), ch = std::cosh(0.5 * tau);
  const double f = ch + sh * C;
  const double fp = 0.5 * (sh + ch * C);
  const double z = sh * sh * S * S;
  const double zp = sh * ch * S * S;
  const auto pc = detail::rotated_pieces(N, L, f, z);
  return -sh * ch * pc.value + sh * sh * 2.0 * N * (fp / f) * pc.value - sh * sh * pc.dz * zp;
}

/// Squared matrix elements |D_{N n}|^2 of the scaling element for n = 0..n_max+1.
inline std::vector<double> scaling_elements_sq(int N, int L, double Phi, int n_max) {
  const RepLabel label{L + 1};
  const GroupElement u = scaling_coords(Phi);
  std::vector<double> d(std::size_t(n_max) + 2, 0.0);
  for (int n = L + 1; n <= n_max + 1; ++n) d[n] = rep_matrix_element_sq(label, N, n, u);
  return d;
}

inline double series_coefficient(const std::vector<double>& d, int n) {
  const double up = std::size_t(n + 1) < d.size() ? d[n + 1] : 0.0;
  const double down = n >= 1 ? d[n - 1] : 0.0;
  return 0.5 * d[n] - 0.25 * up - 0.25 * down;
}

inline ResidueTable residue_coeffs(int N, int L, double Phi) {
  check_quantum_numbers(N, L);
  if (Phi < 0.0) throw std::invalid_argument("residue_coeffs: Phi must be >= 0");
  const auto d = scaling_elements_sq(N, L, Phi, N);
  ResidueTable t{N, L, Phi, {}};
  for (int n = L; n <= N - 1; ++n) {
    ResidueEntry e;
    e.n = n;
    e.R = series_coefficient(d, n);
    if (n >= 1) e.Phi0 = std::log(double(N) / n);
    t.entries.push_back(e);
  }
  return t;
}

/// Residues plus the tail coefficients c_n (n >= N) at one Phi, with the
/// remainder Q - sum_{n<N} R_n e^{-n tau} evaluated from the closed form for
/// tau <= tau_split and from the tail series beyond, where the subtraction
/// would cancel.
class KernelExpansion {
 public:
  KernelExpansion(int N, int L, double Phi, double tail_tol = 1e-18, int n_cap = 4000)
      : N_(N), L_(L), Phi_(Phi) {
    check_quantum_numbers(N, L);
    if (Phi < 0.0) throw std::invalid_argument("KernelExpansion: Phi must be >= 0");
    tau_split_ = std::clamp(8.0 / (N - L), 0.25, 2.0);
    const RepLabel label{L + 1};
    const GroupElement u = scaling_coords(Phi);
    auto dsq = [&](int n) { return n < L + 1 ? 0.0 : rep_matrix_element_sq(label, N, n, u); };
    double d_prev = dsq(L - 1);
    double d_cur = dsq(L);
    double d_next = dsq(L + 1);
    for (int n = L;; ++n) {
      const double c = 0.5 * d_cur - 0.25 * d_next - 0.25 * d_prev;
      coeffs_.push_back(c);
      if (n >= N + 2) {
        // |D_Nn|^2 falls off like tanh^{2n}(Phi/2) n^{2N}; stop once the
        // next few terms are negligible at tau_split
        const double scale = std::exp(-(n - N) * tau_split_);
        if ((d_cur + d_next) * scale < tail_tol * max_coeff_) break;
      }
      max_coeff_ = std::max(max_coeff_, std::abs(c));
      if (n >= n_cap) {
        truncated_ = true;
        break;
      }
      d_prev = d_cur;
      d_cur = d_next;
      d_next = dsq(n + 2);
    }
  }

  int N() const { return N_; }
  int L() const { return L_; }
  double Phi() const { return Phi_; }
  double tau_split() const { return tau_split_; }
  bool truncated() const { return truncated_; }

  /// c_n for n >= L; zero beyond the stored range.
  double coefficient(int n) const {
    const int i = n - L_;
    return i >= 0 && std::size_t(i) < coeffs_.size() ? coeffs_[i] : 0.0;
  }
  int n_last() const { return L_ + int(coeffs_.size()) - 1; }

  double residue(int n) const { return n < N_ ? coefficient(n) : 0.0; }

  ResidueTable residues() const {
    ResidueTable t{N_, L_, Phi_, {}};
    for (int n = L_; n < N_; ++n) {
      ResidueEntry e{n, coefficient(n)};
      if (n >= 1) e.Phi0 = std::log(double(N_) / n);
      t.entries.push_back(e);
    }
    return t;
  }

  double remainder(double tau) const {
    if (tau <= tau_split_) {
      CompensatedSum<double> s;
      s.add(kernel_q_rotated(N_, L_, tau, Phi_));
      for (int n = L_; n < N_; ++n) s.add(-coefficient(n) * std::exp(-n * tau));
      return s.value();
    }
    return tail_sum(tau, false);
  }

  double remainder_dtau(double tau) const {
    if (tau <= tau_split_) {
      CompensatedSum<double> s;
      s.add(kernel_q_rotated_dtau(N_, L_, tau, Phi_));
      for (int n = L_; n < N_; ++n) s.add(n * coefficient(n) * std::exp(-n * tau));
      return s.value();
    }
    return tail_sum(tau, true);
  }

  /// Tail series sum_{n>=N} c_n e^{-n tau} (or its tau-derivative).
  double tail_sum(double tau, bool derivative) const {
    CompensatedSum<double> s;
    for (int n = n_last(); n >= N_; --n) {
      const double t = coefficient(n) * std::exp(-n * tau);
      s.add(derivative ? -n * t : t);
    }
    return s.value();
  }

  /// int_{a}^{inf} e^{nu tau} dQ~/dtau dtau from the tail series, for nu < N.
  double tail_laplace_dtau(double nu, double a) const {
    CompensatedSum<double> s;
    for (int n = n_last(); n >= N_; --n)
      s.add(-n * coefficient(n) * std::exp(-(n - nu) * a) / (n - nu));
    return s.value();
  }

 private:
  int N_, L_;
  double Phi_;
  double tau_split_ = 2.0;
  double max_coeff_ = 0.0;
  bool truncated_ = false;
  std::vector<double> coeffs_;
};

inline double kernel_remainder(int N, int L, double tau, double Phi) {
  if (tau < 0.0) throw std::invalid_argument("kernel_remainder: tau must be >= 0");
  return KernelExpansion(N, L, Phi).remainder(tau);
}

inline double kernel_remainder_dtau(int N, int L, double tau, double Phi) {
  if (tau < 0.0) throw std::invalid_argument("kernel_remainder_dtau: tau must be >= 0");
  return KernelExpansion(N, L, Phi).remainder_dtau(tau);
}

}  // namespace hydrolamb
