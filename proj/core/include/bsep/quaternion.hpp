#pragma once

#include <cmath>
#include <complex>

namespace bsep {

/// Real quaternion w + x·i + y·j + z·k.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}
  constexpr explicit Quaternion(double real) : w(real) {}

  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }

  /// Symplectic split q = a + b·j with a = w + x·i and b = y + z·i.
  constexpr std::complex<double> a() const { return {w, x}; }
  constexpr std::complex<double> b() const { return {y, z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w;
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s;
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

/// Hamilton product.
constexpr Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return quat_mul(p, q);
}

}  // namespace bsep
