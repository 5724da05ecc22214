#include <gtest/gtest.h>

#include <cmath>

#include "hydrolamb/energy_shift.hpp"
#include "hydrolamb/oracle.hpp"

using namespace hydrolamb;
using namespace hydrolamb::oracle;

TEST(Matrix2x2, ExponentialOfGenerators) {
  const auto g = defining_generators();
  const Matrix2x2C e = expm(cplx(0.0, 2.0 * 0.3) * g.j3);
  EXPECT_NEAR(std::abs(e.determinant() - cplx(1.0)), 0.0, 1e-15);
  Matrix2x2C d = Matrix2x2C::zero();
  d(0, 0) = std::polar(1.0, 0.3);
  d(1, 1) = std::polar(1.0, -0.3);
  EXPECT_LT(e.max_abs_diff(d), 1e-15);
  const Matrix2x2C big = expm(cplx(3.0) * (g.jp + g.jm));
  EXPECT_NEAR(std::abs(big.determinant() - cplx(1.0)), 0.0, 1e-10);
}

TEST(BchReconstruct, Identity) {
  EXPECT_LT(bch_reconstruct_2x2({0.0, 0.0, 0.0}).max_abs_diff(Matrix2x2C::identity()), 1e-15);
}

TEST(BchReconstruct, RealBoost) {
  const double r = 0.9;
  const Matrix2x2C m = bch_reconstruct_2x2({r, 0.0, 0.0});
  const GroupElement u{cplx(std::cosh(r)), cplx(std::sinh(r))};
  EXPECT_LT(m.max_abs_diff(disentangled_form(u)), 1e-14);
  EXPECT_NEAR(std::abs(m(0, 0) - std::cosh(r)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(m(0, 1) - std::sinh(r)), 0.0, 1e-14);
}

TEST(BchReconstruct, TimeEvolutionElement) {
  const GroupElement u = time_evolution_coords(1.1, 0.6);
  const Matrix2x2C m = bch_reconstruct_2x2(bch_decompose(u));
  EXPECT_LT(m.max_abs_diff(disentangled_form(u)), 1e-12);
  EXPECT_NEAR(std::abs(m.determinant() - cplx(1.0)), 0.0, 1e-12);
}

TEST(SpectralSeries, TrivialCases) {
  for (int N = 1; N <= 4; ++N) {
    const double T = 0.9;
    const auto v = kernel_via_spectral_series(N, 0, Contour::real_time, T, 0.0, N + 10);
    const double s = std::sin(0.5 * T);
    EXPECT_LT(std::abs(v.value - s * s * std::polar(1.0, -N * T)), 1e-15);
    EXPECT_EQ(std::abs(kernel_via_spectral_series(N, 0, Contour::real_time, 0.0, 0.8, N + 10).value), 0.0);
  }
}

TEST(SpectralSeries, TruncationMonotone) {
  const int N = 3;
  double prev = INFINITY;
  for (int n_max = 2 * N; n_max <= 120; n_max += 6) {
    const auto v = kernel_via_spectral_series(N, 1, Contour::imaginary_time, 0.1, 1.0, n_max);
    EXPECT_LE(v.last_term, prev);
    prev = v.last_term;
  }
}

TEST(SpectralSeries, TwoSDeep) {
  const auto o = kernel_via_spectral_series(2, 0, Contour::imaginary_time, 1.0, 0.5, 200);
  EXPECT_NEAR(o.value.real(), kernel_q_rotated(2, 0, 1.0, 0.5), 1e-10 * std::abs(o.value.real()));
}

TEST(EpsFit, ExactOnBasis) {
  const std::array<double, 4> eps{0.02, 0.01, 0.005, 0.0025};
  std::array<double, 4> y{};
  for (int i = 0; i < 4; ++i) y[i] = 3.0 + 2.0 * eps[i] - 5.0 * eps[i] * std::log(eps[i]) + 7.0 * eps[i] * eps[i];
  EXPECT_NEAR(extrapolate_eps_log(eps, y), 3.0, 1e-10);
}

TEST(EpsShift, RejectsBadEpsilon) {
  EXPECT_THROW(shift_via_eps_real_axis({1, 0}, 0.0, 100.0), std::invalid_argument);
}

TEST(EpsShift, AgreesWithRotatedContour) {
  for (auto [N, L] : {std::pair{1, 0}, {2, 0}, {2, 1}}) {
    const double primary = lamb_shift({N, L}).lamb_shift_MHz;
    const EpsShift e = shift_via_eps_extrapolated({N, L});
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.shift_MHz.real() / primary, 1.0, 1e-3) << N << " " << L;
  }
}

TEST(EpsShift, ImaginaryPartGivesRate) {
  const EpsShift e = shift_via_eps_extrapolated({2, 1});
  EXPECT_NEAR(rate_from_imaginary_part(e.shift_MHz.imag()) / 626.813, 1.0, 1e-2);
  const EpsShift g = shift_via_eps_extrapolated({1, 0});
  EXPECT_LT(std::abs(g.shift_MHz.imag()), 1e-5 * std::abs(g.shift_MHz.real()));
}

TEST(EpsShift, GroundStateImaginaryPartShrinks) {
  const double a = std::abs(shift_via_eps_real_axis({1, 0}, 0.02, 2000.0).shift_MHz.imag());
  const double b = std::abs(shift_via_eps_real_axis({1, 0}, 0.005, 8000.0).shift_MHz.imag());
  EXPECT_LT(b, a);
}
