#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace greenvol {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }

/// Outward unit normal of a counterclockwise curve with tangent `t`.
inline Vec2 outward_normal(const Vec2& t) {
  const double s = norm(t);
  return {t.y / s, -t.x / s};
}

/// 2x2 real matrix; columns are the parametric derivatives d/dxi1, d/dxi2.
struct Mat2 {
  double a11{0.0}, a12{0.0};
  double a21{0.0}, a22{0.0};

  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Vec2 apply(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("singular 2x2 matrix");
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
  constexpr Mat2 scaled(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
};

/// Point of the parameter square [-1,1]^2.
class ParamPoint {
 public:
  constexpr ParamPoint() = default;
  ParamPoint(double xi1, double xi2) : xi1_(xi1), xi2_(xi2) {
    constexpr double slack = 1e-13;
    if (!(std::abs(xi1) <= 1.0 + slack && std::abs(xi2) <= 1.0 + slack)) {
      throw std::out_of_range("parameter point outside [-1,1]^2");
    }
  }
  constexpr double xi1() const { return xi1_; }
  constexpr double xi2() const { return xi2_; }

 private:
  double xi1_{0.0};
  double xi2_{0.0};
};

}  // namespace greenvol
