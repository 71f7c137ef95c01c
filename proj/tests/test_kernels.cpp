#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "greenvol/kernels.hpp"

using namespace greenvol;

namespace {

// Plain 30-term ascending series for J0, independent of the library's summation.
double j0_series30(double x) {
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 30; ++m) {
    term *= -(x * x / 4.0) / (static_cast<double>(m) * m);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(Wavenumber, Validation) {
  EXPECT_THROW(Wavenumber(-1.0), std::invalid_argument);
  EXPECT_THROW(Wavenumber(std::nan("")), std::invalid_argument);
  EXPECT_TRUE(Wavenumber(0.0).is_laplace());
  EXPECT_FALSE(Wavenumber(0.5).is_laplace());
}

TEST(Bessel, SmallArgumentLimit) {
  const BesselValues b = bessel_j0y0j1y1(1e-12);
  EXPECT_NEAR(b.j0, 1.0, 1e-15);
  EXPECT_NEAR(b.j1, 0.5e-12, 1e-20);
  EXPECT_THROW(bessel_j0y0j1y1(0.0), std::domain_error);
  EXPECT_THROW(bessel_j0y0j1y1(-2.0), std::domain_error);
}

TEST(Bessel, AgreesWithStandardLibrary) {
  double worst = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    const double x = 0.05 * i;
    const BesselValues b = bessel_j0y0j1y1(x);
    worst = std::max({worst, std::abs(b.j0 - std::cyl_bessel_j(0.0, x)),
                      std::abs(b.j1 - std::cyl_bessel_j(1.0, x)),
                      std::abs(b.y0 - std::cyl_neumann(0.0, x)),
                      std::abs(b.y1 - std::cyl_neumann(1.0, x))});
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Bessel, FirstZeroOfJ0) {
  double lo = 2.0, hi = 3.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0y0j1y1(mid).j0 > 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 2.4048255577, 1e-10);
  EXPECT_NEAR(j0_series30(lo), 0.0, 1e-12);
}

TEST(Bessel, WronskianIdentity) {
  for (double x : {0.5, 1.0, 5.0, 20.0}) {
    const BesselValues b = bessel_j0y0j1y1(x);
    EXPECT_NEAR(b.j1 * b.y0 - b.j0 * b.y1, 2.0 / (kPi * x), 1e-9) << x;
  }
  for (double lx = -2.0; lx <= 2.0; lx += 0.05) {
    const double x = std::pow(10.0, lx);
    const BesselValues b = bessel_j0y0j1y1(x);
    EXPECT_NEAR((b.j1 * b.y0 - b.j0 * b.y1) * kPi * x / 2.0, 1.0, 1e-9) << x;
  }
}

TEST(Green, LaplaceValues) {
  const Wavenumber k0(0.0);
  EXPECT_NEAR(std::abs(green(k0, {0, 0}, {1, 0})), 0.0, 1e-16);
  EXPECT_NEAR(green(k0, {0, 0}, {0, std::exp(1.0)}).real(), -1.0 / (2.0 * kPi), 1e-15);
  EXPECT_THROW(green(k0, {0.3, 0.2}, {0.3, 0.2}), std::domain_error);
}

TEST(Green, HelmholtzValue) {
  const cplx g = green(Wavenumber(1.0), {0, 0}, {1, 0});
  const cplx expect = cplx(0.0, 0.25) * cplx(0.7651976866, 0.0882569642);
  EXPECT_NEAR(std::abs(g - expect), 0.0, 1e-10);
}

TEST(Green, Symmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double k : {0.0, 1.0, 7.5}) {
    for (int i = 0; i < 50; ++i) {
      const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
      EXPECT_EQ(green(Wavenumber(k), a, b), green(Wavenumber(k), b, a));
    }
  }
}

TEST(GreenNormalDerivative, LaplaceExamples) {
  const Wavenumber k0(0.0);
  EXPECT_NEAR(green_normal_derivative(k0, {0, 0}, {1, 0}, {1, 0}).real(), -1.0 / (2.0 * kPi), 1e-15);
  EXPECT_NEAR(std::abs(green_normal_derivative(k0, {0, 0}, {1, 0}, {0, 1})), 0.0, 1e-16);
  EXPECT_THROW(green_normal_derivative(k0, {1, 0}, {1, 0}, {1, 0}), std::domain_error);
}

TEST(GreenNormalDerivative, MatchesFiniteDifference) {
  const double h = 1e-5;
  for (double k : {0.0, 1.0, 3.0}) {
    const Wavenumber kw(k);
    const Vec2 r{0.2, -0.1};
    for (double ang : {0.0, 1.0, 2.5}) {
      const Vec2 rp = r + Vec2{std::cos(ang), std::sin(ang)};
      const Vec2 n{std::cos(ang + 0.4), std::sin(ang + 0.4)};
      const cplx fd = (green(kw, r, rp + n * h) - green(kw, r, rp - n * h)) / (2.0 * h);
      EXPECT_NEAR(std::abs(green_normal_derivative(kw, r, rp, n) - fd), 0.0, 1e-6);
      const KernelPair kp = green_and_normal_derivative(kw, r, rp, n);
      EXPECT_NEAR(std::abs(kp.single_layer - green(kw, r, rp)), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(kp.double_layer - green_normal_derivative(kw, r, rp, n)), 0.0, 1e-15);
    }
  }
}

TEST(GreenNormalDerivative, HelmholtzTendsToLaplaceAsKVanishes) {
  const Vec2 r{0.0, 0.0}, rp{0.6, 0.8}, n{0.6, 0.8};
  const cplx lap = green_normal_derivative(Wavenumber(0.0), r, rp, n);
  const cplx helm = green_normal_derivative(Wavenumber(1e-4), r, rp, n);
  EXPECT_NEAR(std::abs(lap - helm), 0.0, 1e-7);
}

TEST(Green, HelmholtzPdeResidual) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-4;
  const double k = 2.0;
  const Wavenumber kw(k);
  for (int i = 0; i < 100; ++i) {
    const Vec2 rp{u(rng), u(rng)};
    Vec2 r{u(rng) + 2.5, u(rng)};
    const cplx c = green(kw, r, rp);
    const cplx lap = (green(kw, r + Vec2{h, 0}, rp) + green(kw, r - Vec2{h, 0}, rp) +
                      green(kw, r + Vec2{0, h}, rp) + green(kw, r - Vec2{0, h}, rp) - 4.0 * c) /
                     (h * h);
    EXPECT_LT(std::abs(lap + k * k * c), 1e-4 * std::abs(k * k * c));
  }
}
