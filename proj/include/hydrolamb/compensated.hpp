#pragma once

/// Error-free transformations, Neumaier summation and a minimal double-double
/// type used as the high-precision fallback for cancellation-prone sums.

#include <cmath>
#include <complex>
#include <type_traits>

namespace hydrolamb {

/// a + b = s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

/// a * b = p + e exactly (requires a correctly rounded fma).
inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

/// Neumaier's variant of Kahan summation; robust when an addend is larger
/// than the running sum.
template <typename Value>
struct CompensatedSum {
  Value sum{};
  Value compensation{};

  void add(Value v) {
    if constexpr (std::is_floating_point_v<Value>) {
      const Value t = sum + v;
      if (std::abs(sum) >= std::abs(v))
        compensation += (sum - t) + v;
      else
        compensation += (v - t) + sum;
      sum = t;
    } else {
      // complex: component-wise
      CompensatedSum<typename Value::value_type> re{sum.real(), compensation.real()};
      CompensatedSum<typename Value::value_type> im{sum.imag(), compensation.imag()};
      re.add(v.real());
      im.add(v.imag());
      sum = {re.sum, im.sum};
      compensation = {re.compensation, im.compensation};
    }
  }

  CompensatedSum& operator+=(Value v) {
    add(v);
    return *this;
  }

  Value value() const { return sum + compensation; }
};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.  Only the operations the
/// hypergeometric fallback needs are provided.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  static DoubleDouble normalized(double h, double l) {
    DoubleDouble r;
    two_sum(h, l, r.hi, r.lo);
    return r;
  }

  double to_double() const { return hi + lo; }

  friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    double s, e;
    two_sum(a.hi, b.hi, s, e);
    double t, f;
    two_sum(a.lo, b.lo, t, f);
    e += t;
    DoubleDouble r = normalized(s, e);
    return normalized(r.hi, r.lo + f);
  }

  friend DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }
  friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) {
    return a + (-b);
  }

  friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    double p, e;
    two_prod(a.hi, b.hi, p, e);
    e += a.hi * b.lo + a.lo * b.hi;
    return normalized(p, e);
  }

  friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi / b.hi;
    return normalized(q1, q2) + DoubleDouble(q3);
  }
};

}  // namespace hydrolamb
