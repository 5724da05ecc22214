#pragma once

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature: finite intervals,
/// dyadically extended semi-infinite intervals and Cauchy principal values
/// with one simple pole.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <stdexcept>
#include <vector>

#include "compensated.hpp"

namespace hydrolamb {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  /// Semi-infinite panels stop once a panel contributes less than this;
  /// negative means "use abs_tol".
  double tail_cut = -1.0;

  double tail_threshold() const { return tail_cut >= 0.0 ? tail_cut : abs_tol; }
  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

namespace gk {

// Kronrod abscissae (odd indices are the Gauss-7 nodes) and weights.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace gk

using Integrand = std::function<double(double)>;

struct Panel {
  double a = 0.0, b = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::size_t index = 0;  ///< creation order, for a deterministic reduction
};

inline double checked_eval(const Integrand& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw std::domain_error("integrand returned a non-finite value at x = " + std::to_string(x));
  return v;
}

/// One 15-point Kronrod evaluation with the embedded Gauss-7 error |K - G|.
inline Panel gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = checked_eval(f, c);
  double resk = fc * gk::wgk[7];
  double resg = fc * gk::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * gk::xgk[j];
    const double fsum = checked_eval(f, c - dx) + checked_eval(f, c + dx);
    resk += gk::wgk[j] * fsum;
    if (j % 2 == 1) resg += gk::wg[j / 2] * fsum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * h;
  p.error = std::abs((resk - resg) * h);
  return p;
}

inline constexpr long kEvalsPerPanel = 15;

namespace detail {

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.index > y.index;
  }
};

inline QuadratureResult sum_panels(std::vector<Panel> panels, long evals, bool converged) {
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  CompensatedSum<double> v, e;
  for (const auto& p : panels) {
    v.add(p.value);
    e.add(p.error);
  }
  return {v.value(), e.value(), evals, converged};
}

/// Bisects the worst panel until the summed error meets the tolerance.
inline QuadratureResult refine(const Integrand& f, std::vector<Panel> start, const QuadratureSpec& spec,
                               long evals) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::size_t next_index = 0;
  CompensatedSum<double> total, err;
  for (auto& p : start) {
    p.index = next_index++;
    total.add(p.value);
    err.add(p.error);
    heap.push(p);
  }
  int subdivisions = int(start.size());
  bool converged = false;
  for (;;) {
    const double tol = std::max(spec.rel_tol * std::abs(total.value()), spec.abs_tol);
    if (err.value() <= tol) {
      converged = true;
      break;
    }
    if (subdivisions >= spec.max_subdivisions || heap.empty()) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    evals += 2 * kEvalsPerPanel;
    left.index = next_index++;
    right.index = next_index++;
    total.add(left.value + right.value - worst.value);
    err.add(left.error + right.error - worst.error);
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  return sum_panels(std::move(all), evals, converged);
}

}  // namespace detail

/// Adaptive integral over [a, b] starting from the panels between the sorted breakpoints.
inline QuadratureResult integrate_breakpoints(const Integrand& f, const std::vector<double>& points,
                                              const QuadratureSpec& spec = {}) {
  spec.validate();
  if (points.size() < 2) throw std::invalid_argument("integrate_breakpoints: need at least two points");
  std::vector<Panel> panels;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    panels.push_back(gk15(f, points[i], points[i + 1]));
    evals += kEvalsPerPanel;
  }
  if (panels.empty()) return {};
  return detail::refine(f, std::move(panels), spec, evals);
}

inline QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, spec);
    r.value = -r.value;
    return r;
  }
  return integrate_breakpoints(f, {a, b}, spec);
}

/// Integral over [a, inf): panels [a, a+w], [a+w, a+2w], [a+2w, a+4w], ...
/// are added until two consecutive panels contribute less than the tail
/// threshold, then all panels are refined together.  An integrand that
/// fails further out first gives an unconverged result.
inline QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec = {},
                                                double a = 0.0, double first_width = 1.0) {
  spec.validate();
  std::vector<Panel> panels;
  long evals = 0;
  double lo = a, width = first_width;
  int small_in_a_row = 0;
  const double cut = spec.tail_threshold();
  for (int k = 0; k < 200; ++k) {
    const double hi = lo + width;
    Panel p;
    try {
      p = gk15(f, lo, hi);
    } catch (const std::exception&) {
      if (panels.empty()) throw;
      break;  // integrand broke down before the tail fell below the threshold
    }
    evals += kEvalsPerPanel;
    const double mag = std::abs(p.value) + p.error;
    panels.push_back(p);
    small_in_a_row = mag < cut ? small_in_a_row + 1 : 0;
    if (small_in_a_row >= 2) break;
    lo = hi;
    if (k > 0) width *= 2.0;
  }
  QuadratureResult r = detail::refine(f, std::move(panels), spec, evals);
  if (small_in_a_row < 2) r.converged = false;
  return r;
}

/// PV of int_a^b g(x) / (x - pole) dx, with b possibly +inf.  Inside
/// [pole - d, pole + d] the integrand is folded onto
/// int_0^d [g(pole + s) - g(pole - s)] / s ds, which is regular at s = 0.
inline QuadratureResult integrate_principal_value(const Integrand& g, double pole, double a, double b,
                                                  const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(pole > a) || !(pole < b))
    throw std::invalid_argument("integrate_principal_value: pole must lie inside (a, b)");
  double d = 0.5;
  d = std::min(d, 0.5 * (pole - a));
  if (std::isfinite(b)) d = std::min(d, 0.5 * (b - pole));
  const Integrand folded = [&](double s) { return (g(pole + s) - g(pole - s)) / s; };
  const Integrand h = [&](double x) { return g(x) / (x - pole); };
  QuadratureResult r = integrate(folded, 0.0, d, spec);
  r += integrate(h, a, pole - d, spec);
  if (std::isfinite(b))
    r += integrate(h, pole + d, b, spec);
  else
    r += integrate_semi_infinite(h, spec, pole + d, std::max(d, 0.5));
  return r;
}

inline QuadratureResult integrate_principal_value(const Integrand& g, double pole,
                                                  const QuadratureSpec& spec = {}) {
  if (!(pole > 0.0)) throw std::invalid_argument("integrate_principal_value: pole must be > 0");
  return integrate_principal_value(g, pole, 0.0, std::numeric_limits<double>::infinity(), spec);
}

}  // namespace hydrolamb
