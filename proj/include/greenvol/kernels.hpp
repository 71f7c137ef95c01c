#pragma once

#include "greenvol/types.hpp"

namespace greenvol {

/// Nonnegative wavenumber; zero selects the Laplace kernel.
class Wavenumber {
 public:
  explicit Wavenumber(double k);
  double value() const { return k_; }
  bool is_laplace() const { return k_ == 0.0; }

 private:
  double k_;
};

struct BesselValues {
  double j0, y0, j1, y1;
};

/// J0, Y0, J1, Y1 for x > 0. Power series up to x = 12, Hankel asymptotics beyond.
BesselValues bessel_j0y0j1y1(double x);

/// H0^(1)(x) and H1^(1)(x).
struct HankelValues {
  cplx h0, h1;
};
HankelValues hankel01(double x);

/// Free-space Green function: -log|r-r'|/(2pi) for k = 0, (i/4) H0^(1)(k|r-r'|) otherwise.
cplx green(Wavenumber k, const Vec2& r, const Vec2& rp);

/// d/dn(r') of green(k, r, r') for the unit normal `normal` at r'.
cplx green_normal_derivative(Wavenumber k, const Vec2& r, const Vec2& rp, const Vec2& normal);

/// Green function and its rp-normal derivative from one Bessel evaluation.
struct KernelPair {
  cplx single_layer;
  cplx double_layer;
};
KernelPair green_and_normal_derivative(Wavenumber k, const Vec2& r, const Vec2& rp,
                                       const Vec2& normal);

}  // namespace greenvol
