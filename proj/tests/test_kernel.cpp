#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hydrolamb/kernel.hpp"
#include "hydrolamb/oracle.hpp"
#include "hydrolamb/quadrature.hpp"

using namespace hydrolamb;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST(KernelPoint, Geometry) {
  const auto p = make_kernel_point(3, Contour::real_time, 1.1, 0.6);
  EXPECT_NEAR(p.z, 1.0 - std::norm(p.f), 1e-15);
  EXPECT_LE(p.z, 0.0);
  EXPECT_NEAR(p.nu, 3.0 * std::exp(-0.6), 1e-15);
  const auto q = make_kernel_point(3, Contour::imaginary_time, 0.8, 0.6);
  EXPECT_GE(q.f.real(), 1.0);
  EXPECT_EQ(q.f.imag(), 0.0);
  EXPECT_EQ(q.chi, 0.0);
  EXPECT_GE(q.z, 0.0);
}

TEST(KernelQ, VanishesAtZeroTime) {
  for (int N = 1; N <= 5; ++N)
    for (int L = 0; L < N; ++L) EXPECT_EQ(std::abs(kernel_q(N, L, 0.0, 0.9)), 0.0);
}

TEST(KernelQ, NoScaling) {
  for (int N = 1; N <= 5; ++N)
    for (double T : {0.4, 2.2, 5.0}) {
      const double s = std::sin(0.5 * T);
      EXPECT_LT(std::abs(kernel_q(N, N - 1, T, 0.0) - s * s * std::polar(1.0, -N * T)), 1e-15);
    }
}

TEST(KernelQ, HighPrecisionValue) {
  // mpmath, tests/oracle/freeze_values.py
  const cplx ref(-0.0045403668559731988602, 0.032070112342096582373);
  EXPECT_LT(rel(kernel_q(3, 1, 1.3, 0.7), ref), 1e-13);
  EXPECT_LT(rel(kernel_q_rotated(2, 0, 1.0, 0.5), -0.035998884136374752158), 1e-13);
}

TEST(KernelQ, MatchesSpectralSeries) {
  const auto o = oracle::kernel_via_spectral_series(3, 1, Contour::real_time, 1.3, 0.7, 200);
  EXPECT_LT(rel(kernel_q(3, 1, 1.3, 0.7), o.value), 1e-10);
  const auto r = oracle::kernel_via_spectral_series(2, 0, Contour::imaginary_time, 1.0, 0.5, 200);
  EXPECT_LT(rel(kernel_q_rotated(2, 0, 1.0, 0.5), r.value.real()), 1e-10);
}

TEST(KernelQ, RandomPointsBothContours) {
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<int> Nd(1, 6);
  std::uniform_real_distribution<double> td(0.05, 3.0), pd(0.02, 2.0);
  for (int k = 0; k < 64; ++k) {
    const int N = Nd(rng);
    const int L = std::uniform_int_distribution<int>(0, N - 1)(rng);
    const double t = td(rng), Phi = pd(rng);
    if (k % 2 == 0) {
      const auto o = oracle::kernel_via_spectral_series(N, L, Contour::real_time, t, Phi, 800);
      EXPECT_LT(rel(kernel_q(N, L, t, Phi), o.value), 1e-10) << N << " " << L << " " << t << " " << Phi;
    } else {
      const auto o = oracle::kernel_via_spectral_series(N, L, Contour::imaginary_time, t, Phi, 800);
      EXPECT_LT(rel(kernel_q_rotated(N, L, t, Phi), o.value.real()), 1e-10) << N << " " << L << " " << t << " " << Phi;
    }
  }
}

TEST(KernelQ, TwoClosedFormsAgree) {
  for (int N = 1; N <= 8; ++N)
    for (int L = 0; L < N; ++L)
      for (double T : {0.3, 1.7, 3.0, 4.4})
        for (double Phi : {0.1, 0.6, 1.2}) {
          const cplx a = kernel_q_hypergeometric(N, L, T, Phi), b = kernel_q_jacobi(N, L, T, Phi);
          EXPECT_LT(std::abs(a - b), 1e-10 * std::abs(a) + 1e-300) << N << " " << L << " " << T << " " << Phi;
        }
}

TEST(KernelQ, ContinuousAcrossRouteSwitch) {
  // the switch sits at z = -1: sin^2(T/2) sinh^2(Phi) = 1
  const double Phi = 1.2;
  const double T = 2.0 * std::asin(1.0 / std::sinh(Phi));
  for (int N : {2, 5, 9}) {
    const cplx lo = kernel_q(N, 1, T * (1 - 1e-12), Phi), hi = kernel_q(N, 1, T * (1 + 1e-12), Phi);
    EXPECT_LT(std::abs(lo - hi), 1e-9 * std::abs(lo));
  }
}

TEST(KernelQ, RejectsInvalidQuantumNumbers) {
  EXPECT_THROW(kernel_q(0, 0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(kernel_q(2, 2, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(kernel_q(2, -1, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(residue_coeffs(3, 3, 0.5), std::invalid_argument);
  EXPECT_THROW(kernel_remainder(1, 1, 0.5, 0.5), std::invalid_argument);
}

TEST(Residues, CircularClosedForm) {
  const double Phi = std::acosh(1.25);
  const auto t = residue_coeffs(2, 1, Phi);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.entries[0].n, 1);
  EXPECT_NEAR(t.R(1), -1024.0 / 6561.0, 1e-15);
  EXPECT_NEAR(t.entries[0].Phi0, std::log(2.0), 1e-15);
  for (int N = 2; N <= 12; ++N)
    for (double p : {0.3, 1.0, 2.5})
      EXPECT_NEAR(residue_coeffs(N, N - 1, p).R(N - 1), -0.25 / std::pow(std::cosh(0.5 * p), 4 * N), 1e-15);
}

TEST(Residues, NoScaling) {
  for (int N = 1; N <= 6; ++N)
    for (int L = 0; L < N; ++L) {
      const auto t = residue_coeffs(N, L, 0.0);
      for (const auto& e : t.entries) EXPECT_EQ(e.R, e.n == N - 1 ? -0.25 : 0.0) << N << " " << L << " " << e.n;
    }
}

TEST(Residues, GroundState) {
  for (double p : {0.0, 0.4, 3.0}) {
    const auto t = residue_coeffs(1, 0, p);
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_EQ(t.entries[0].n, 0);
    EXPECT_TRUE(std::isnan(t.entries[0].Phi0));
    EXPECT_NEAR(t.R(0), -0.25 * std::pow(std::cosh(0.5 * p), -4), 1e-16);
  }
}

TEST(Residues, CompletenessAtZeroTime) {
  for (int N = 1; N <= 6; ++N)
    for (int L = 0; L < N; ++L)
      for (double Phi : {0.3, 1.0, 2.0, 3.0}) {
        const auto d = scaling_elements_sq(N, L, Phi, 400);
        double s = 0.0;
        for (int n = L; n <= 400; ++n) s += series_coefficient(d, n);
        const double bound = d[400] + d[401] + 1e-15;
        EXPECT_LT(std::abs(s), bound) << N << " " << L << " " << Phi;
      }
}

TEST(Remainder, NoScaling) {
  for (int N = 1; N <= 5; ++N)
    for (double tau : {0.1, 1.0, 3.0}) {
      const double expect = 0.5 * std::exp(-N * tau) - 0.25 * std::exp(-(N + 1) * tau);
      EXPECT_NEAR(kernel_remainder(N, N - 1, tau, 0.0), expect, 1e-15 * std::max(1.0, std::abs(expect)));
      const double dexpect = -0.5 * N * std::exp(-N * tau) + 0.25 * (N + 1) * std::exp(-(N + 1) * tau);
      EXPECT_NEAR(kernel_remainder_dtau(N, N - 1, tau, 0.0), dexpect, 1e-14);
    }
}

TEST(Remainder, AtZeroTime) {
  for (int N = 1; N <= 5; ++N)
    for (int L = 0; L < N; ++L) {
      const auto t = residue_coeffs(N, L, 0.8);
      double s = 0.0;
      for (const auto& e : t.entries) s -= e.R;
      EXPECT_NEAR(kernel_remainder(N, L, 0.0, 0.8), s, 1e-14);
    }
}

TEST(Remainder, HighPrecisionValue) {
  // mpmath, tests/oracle/freeze_values.py
  EXPECT_LT(rel(kernel_remainder(4, 0, 0.9, 1.1), 0.001176888869854635113), 1e-11);
  const auto o = oracle::remainder_via_spectral_series(4, 0, 0.9, 1.1, 300);
  EXPECT_LT(rel(kernel_remainder(4, 0, 0.9, 1.1), o.value), 1e-10);
}

TEST(Remainder, ContinuousAtSplit) {
  for (int N : {1, 2, 4, 7})
    for (double Phi : {0.2, 1.0, 3.0}) {
      const KernelExpansion ex(N, 0, Phi);
      const double ts = ex.tau_split();
      const double a = ex.remainder(ts), b = ex.tail_sum(ts, false);
      EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(ex.remainder(0.0)) + 1e-15) << N << " " << Phi;
      const double da = ex.remainder_dtau(ts), db = ex.tail_sum(ts, true);
      EXPECT_LT(std::abs(da - db), 1e-11 * std::abs(ex.remainder_dtau(0.0)) + 1e-14) << N << " " << Phi;
    }
}

TEST(Remainder, DerivativeFiniteDifference) {
  const double tau = 0.5, Phi = 0.8, h = 1e-5;
  const double fd = (kernel_remainder(2, 1, tau + h, Phi) - kernel_remainder(2, 1, tau - h, Phi)) / (2 * h);
  EXPECT_LT(rel(kernel_remainder_dtau(2, 1, tau, Phi), fd), 1e-6);
}

TEST(Remainder, DecaysLikeExpMinusN) {
  for (int N : {1, 3, 5}) {
    const KernelExpansion ex(N, 0, 0.9);
    const double c0 = std::abs(ex.remainder(4.0)) * std::exp(N * 4.0);
    for (double tau : {6.0, 10.0, 20.0}) {
      EXPECT_LE(std::abs(ex.remainder(tau)), 1.01 * c0 * std::exp(-N * tau));
      EXPECT_LE(std::abs(ex.remainder_dtau(tau)), 1.01 * (N + 1) * c0 * std::exp(-N * tau));
    }
  }
}

TEST(Remainder, TailLaplaceMatchesQuadrature) {
  const KernelExpansion ex(3, 1, 0.7);
  const double nu = 3.0 * std::exp(-0.7), a = ex.tau_split();
  QuadratureSpec spec{1e-13, 1e-20, 2000};
  const auto q = integrate_semi_infinite([&](double t) { return std::exp(nu * t) * ex.tail_sum(t, true); }, spec, a, 1.0);
  EXPECT_LT(rel(ex.tail_laplace_dtau(nu, a), q.value), 1e-10);
}

TEST(KernelExpansion, ResiduesMatchTable) {
  const KernelExpansion ex(5, 1, 1.3);
  const auto t = residue_coeffs(5, 1, 1.3);
  const auto r = ex.residues();
  ASSERT_EQ(r.entries.size(), t.entries.size());
  for (std::size_t i = 0; i < r.entries.size(); ++i) EXPECT_NEAR(r.entries[i].R, t.entries[i].R, 1e-16);
  EXPECT_FALSE(ex.truncated());
}
