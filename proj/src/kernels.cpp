#include "greenvol/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace greenvol {

namespace {

constexpr double kSeriesLimit = 12.0;

BesselValues bessel_series(double x) {
  const double q = 0.25 * x * x;
  double j0 = 0.0, j1 = 0.0, y0_sum = 0.0, y1_sum = 0.0;
  // a_k = (-q)^k/(k!)^2, b_k = (-q)^k/(k!(k+1)!)
  double a = 1.0;
  double b = 1.0;
  double harmonic = 0.0;  // H_k
  for (int k = 0; k < 200; ++k) {
    const double dk = static_cast<double>(k);
    if (k > 0) {
      a *= -q / (dk * dk);
      b *= -q / (dk * (dk + 1.0));
      harmonic += 1.0 / dk;
    }
    j0 += a;
    j1 += b;
    y0_sum -= a * harmonic;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    y1_sum += b * (-2.0 * kEulerGamma + 2.0 * harmonic + 1.0 / (dk + 1.0));
    if (k > 4 && std::abs(a) < 1e-19 && std::abs(b) < 1e-19) break;
  }
  j1 *= 0.5 * x;
  const double log_term = std::log(0.5 * x);
  BesselValues v{};
  v.j0 = j0;
  v.j1 = j1;
  v.y0 = 2.0 / kPi * (log_term + kEulerGamma) * j0 + 2.0 / kPi * y0_sum;
  v.y1 = 2.0 / kPi * j1 * log_term - 2.0 / (kPi * x) - 0.5 * x / kPi * y1_sum;
  return v;
}

// Hankel's expansion, summed until the terms stop decreasing.
void bessel_asymptotic(double x, double nu, double& j, double& y) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double qsum = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
    if (std::abs(next) >= last) break;
    term = next;
    last = std::abs(term);
    // k = 1,2,3,4,... contributes to Q(+), P(-), Q(-), P(+), ...
    switch (k % 4) {
      case 1:
        qsum += term;
        break;
      case 2:
        p -= term;
        break;
      case 3:
        qsum -= term;
        break;
      case 0:
        p += term;
        break;
    }
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double s = std::sqrt(2.0 / (kPi * x));
  j = s * (p * std::cos(chi) - qsum * std::sin(chi));
  y = s * (p * std::sin(chi) + qsum * std::cos(chi));
}

}  // namespace

Wavenumber::Wavenumber(double k) : k_(k) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("wavenumber must be a finite nonnegative real");
  }
}

BesselValues bessel_j0y0j1y1(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j0y0j1y1: argument must be positive");
  if (x <= kSeriesLimit) return bessel_series(x);
  BesselValues v{};
  bessel_asymptotic(x, 0.0, v.j0, v.y0);
  bessel_asymptotic(x, 1.0, v.j1, v.y1);
  return v;
}

HankelValues hankel01(double x) {
  const BesselValues b = bessel_j0y0j1y1(x);
  return {{b.j0, b.y0}, {b.j1, b.y1}};
}

cplx green(Wavenumber k, const Vec2& r, const Vec2& rp) {
  const double rho = norm(r - rp);
  if (rho == 0.0) throw std::domain_error("green: coincident points");
  if (k.is_laplace()) return {-std::log(rho) / (2.0 * kPi), 0.0};
  const BesselValues b = bessel_j0y0j1y1(k.value() * rho);
  return 0.25 * cplx(-b.y0, b.j0);
}

cplx green_normal_derivative(Wavenumber k, const Vec2& r, const Vec2& rp, const Vec2& normal) {
  return green_and_normal_derivative(k, r, rp, normal).double_layer;
}

KernelPair green_and_normal_derivative(Wavenumber k, const Vec2& r, const Vec2& rp,
                                       const Vec2& normal) {
  const Vec2 d = r - rp;
  const double rho2 = norm2(d);
  if (rho2 == 0.0) throw std::domain_error("green: coincident points");
  const double proj = dot(d, normal);
  if (k.is_laplace()) {
    return {{-0.25 * std::log(rho2) / kPi, 0.0}, {proj / (2.0 * kPi * rho2), 0.0}};
  }
  const double rho = std::sqrt(rho2);
  const BesselValues b = bessel_j0y0j1y1(k.value() * rho);
  // (ik/4) H1(k rho) (r - r').n / rho
  const cplx h1(b.j1, b.y1);
  return {0.25 * cplx(-b.y0, b.j0), cplx(0.0, 0.25 * k.value()) * h1 * (proj / rho)};
}

}  // namespace greenvol
