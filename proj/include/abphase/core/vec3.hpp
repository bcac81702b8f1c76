#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace abphase {

/// Cartesian 3-vector with value semantics. The solenoid axis is always +z.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Distance from the z-axis.
inline double cyl_radius(const Vec3& p) { return std::hypot(p.x, p.y); }

/// Azimuth in (-pi, pi].
inline double azimuth(const Vec3& p) { return std::atan2(p.y, p.x); }

/// Unit azimuthal vector at p. Undefined on the axis; callers must check.
inline Vec3 e_phi(const Vec3& p) {
  const double rho = cyl_radius(p);
  return {-p.y / rho, p.x / rho, 0.0};
}

inline Vec3 e_rho(const Vec3& p) {
  const double rho = cyl_radius(p);
  return {p.x / rho, p.y / rho, 0.0};
}

inline Vec3 from_cylindrical(double rho, double phi, double z) {
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Quadrature error control works on magnitudes of the integrand's value type.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vec3& v) { return norm(v); }

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

}  // namespace abphase
