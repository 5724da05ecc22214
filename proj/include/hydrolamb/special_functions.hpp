#pragma once

/// Terminating Gauss hypergeometric sums, Jacobi polynomials with integer
/// parameters and log-space ratios of gamma functions at integer arguments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "compensated.hpp"

namespace hydrolamb {

template <typename T>
struct HypergeometricTerminating {
  int a = 0;  ///< nonpositive: the series stops after |a| + 1 terms
  int b = 0;
  int c = 1;  ///< positive
  T z{};
};

struct JacobiParams {
  int degree = 0;
  int alpha = 0;
  int beta = 0;
  double w = 0.0;
};

/// Sums whose ratio of sum-of-magnitudes to |result| exceeds this are
/// re-evaluated in double-double arithmetic.  Rounding in the terms
/// themselves costs about k eps |term|, so the double result is only
/// trusted to 1e-13 for small condition numbers.
inline constexpr double kCancellationThreshold = 16.0;

template <typename T>
struct HypergeometricValue {
  T value{};
  double condition = 1.0;  ///< sum |terms| / |result|
  bool used_fallback = false;
};

namespace detail {

inline void check_terminating(int& a, int& b, int c) {
  if (a > 0 && b <= 0) std::swap(a, b);
  if (a > 0)
    throw std::invalid_argument("hyp2f1_terminating: need a nonpositive integer numerator parameter");
  if (c < 1) throw std::invalid_argument("hyp2f1_terminating: c must be a positive integer");
}

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

struct DDComplex {
  DoubleDouble re, im;
};

inline double hyp2f1_dd(int a, int b, int c, double z) {
  DoubleDouble term(1.0);
  DoubleDouble sum(1.0);
  const DoubleDouble zz(z);
  for (int k = 0; k < -a; ++k) {
    const double num = double(a + k) * double(b + k);  // exact for |a|,|b| < 2^26
    const double den = double(c + k) * double(k + 1);
    term = term * DoubleDouble(num) / DoubleDouble(den) * zz;
    sum = sum + term;
  }
  return sum.to_double();
}

inline std::complex<double> hyp2f1_dd(int a, int b, int c, std::complex<double> z) {
  DDComplex term{DoubleDouble(1.0), DoubleDouble(0.0)};
  DDComplex sum = term;
  const DoubleDouble zr(z.real()), zi(z.imag());
  for (int k = 0; k < -a; ++k) {
    const DoubleDouble ratio =
        DoubleDouble(double(a + k) * double(b + k)) / DoubleDouble(double(c + k) * double(k + 1));
    const DoubleDouble tr = term.re * ratio, ti = term.im * ratio;
    term.re = tr * zr - ti * zi;
    term.im = tr * zi + ti * zr;
    sum.re = sum.re + term.re;
    sum.im = sum.im + term.im;
  }
  return {sum.re.to_double(), sum.im.to_double()};
}

}  // namespace detail

/// Evaluates the finite sum sum_k (a)_k (b)_k / ((c)_k k!) z^k lowest order first
/// with compensated accumulation, falling back to double-double arithmetic
/// when the alternating terms cancel badly.
template <typename T>
HypergeometricValue<T> hyp2f1_terminating_detail(HypergeometricTerminating<T> p) {
  detail::check_terminating(p.a, p.b, p.c);
  const int a = p.a, b = p.b, c = p.c;
  CompensatedSum<T> sum;
  double abs_sum = 1.0;
  T term = T(1.0);
  sum.add(term);
  for (int k = 0; k < -a; ++k) {
    term *= (double(a + k) * double(b + k)) / (double(c + k) * double(k + 1));
    term *= p.z;
    sum.add(term);
    abs_sum += detail::magnitude(term);
    if (term == T(0.0)) break;  // b reached zero first
  }
  HypergeometricValue<T> out;
  out.value = sum.value();
  const double mag = detail::magnitude(out.value);
  out.condition = mag > 0.0 ? abs_sum / mag : (abs_sum > 0.0 ? INFINITY : 1.0);
  if (out.condition > kCancellationThreshold && std::isfinite(abs_sum)) {
    out.value = detail::hyp2f1_dd(a, b, c, p.z);
    out.used_fallback = true;
  }
  return out;
}

template <typename T>
T hyp2f1_terminating(const HypergeometricTerminating<T>& p) {
  return hyp2f1_terminating_detail(p).value;
}

inline double hyp2f1_terminating(int a, int b, int c, double z) {
  return hyp2f1_terminating(HypergeometricTerminating<double>{a, b, c, z});
}

/// d/dz 2F1(a, b; c; z) = (a b / c) 2F1(a+1, b+1; c+1; z).
inline double hyp2f1_terminating_dz(int a, int b, int c, double z) {
  detail::check_terminating(a, b, c);
  if (a == 0 || b == 0) return 0.0;
  return double(a) * double(b) / double(c) * hyp2f1_terminating(a + 1, b + 1, c + 1, z);
}

/// ln(Gamma(num) / Gamma(den)) for positive integers, from summed logarithms.
inline double ln_gamma_ratio(int num, int den);

namespace detail {

/// ln((n)!) for n >= 0 from a lazily built table of compensated log sums.
inline double log_factorial(int n) {
  constexpr int kTable = 4096;
  static const std::vector<double> table = [] {
    std::vector<double> t(kTable + 1);
    CompensatedSum<double> s;
    t[0] = 0.0;
    for (int k = 1; k <= kTable; ++k) {
      s.add(std::log(double(k)));
      t[k] = s.value();
    }
    return t;
  }();
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (n <= kTable) return table[n];
  CompensatedSum<double> s;
  s.add(table[kTable]);
  for (int k = kTable + 1; k <= n; ++k) s.add(std::log(double(k)));
  return s.value();
}

}  // namespace detail

inline double ln_gamma_ratio(int num, int den) {
  if (num < 1 || den < 1)
    throw std::invalid_argument("ln_gamma_ratio: arguments must be positive integers");
  if (num == den) return 0.0;
  const int lo = std::min(num, den), hi = std::max(num, den);
  double r;
  if (hi - lo < 64) {
    CompensatedSum<double> s;
    for (int k = lo; k < hi; ++k) s.add(std::log(double(k)));
    r = s.value();
  } else {
    r = detail::log_factorial(hi - 1) - detail::log_factorial(lo - 1);
  }
  return num > den ? r : -r;
}

/// Jacobi polynomial P_n^(alpha, beta)(w) by the three-term recurrence in the
/// degree.  Integer parameters with alpha >= 0; the recurrence's leading
/// coefficient vanishes at n = -(alpha + beta) (e.g. n = 2L + 1 for
/// alpha = 0, beta = -1 - 2L), where the degree-n value is taken from the
/// hypergeometric representation instead.
inline double jacobi_p(const JacobiParams& p) {
  const int n = p.degree, a = p.alpha, b = p.beta;
  if (n < 0) throw std::invalid_argument("jacobi_p: negative degree");
  if (a < 0) throw std::invalid_argument("jacobi_p: alpha must be >= 0");
  const double x = p.w;
  // (alpha+1)_n / n! * 2F1(-n, n + alpha + beta + 1; alpha + 1; (1 - x)/2)
  auto explicit_value = [&](int deg) {
    double pref = 0.0;
    if (a > 0) pref = ln_gamma_ratio(a + deg + 1, a + 1) - detail::log_factorial(deg);
    return std::exp(pref) * hyp2f1_terminating(-deg, deg + a + b + 1, a + 1, 0.5 * (1.0 - x));
  };
  if (n == 0) return 1.0;
  const int apb = a + b;
  double pm2 = 1.0;
  double pm1 = 0.5 * ((apb + 2) * x + (a - b));
  for (int q = 2; q <= n; ++q) {
    const double qapbq = double(q) * double(q + apb);
    const double s = 2.0 * q + apb;
    if (qapbq == 0.0 || s - 2.0 == 0.0) {
      const double pq = explicit_value(q);
      pm2 = pm1;
      pm1 = pq;
      continue;
    }
    const double aq = s * (s - 1.0) / (2.0 * qapbq);
    const double bq = (s - 1.0) * (double(b) * b - double(a) * a) / (2.0 * qapbq * (s - 2.0));
    const double cq = s * double(a + q - 1) * double(b + q - 1) / (qapbq * (s - 2.0));
    const double pq = (aq * x - bq) * pm1 - cq * pm2;
    pm2 = pm1;
    pm1 = pq;
  }
  return pm1;
}

}  // namespace hydrolamb
