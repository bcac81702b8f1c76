#pragma once

#include <array>

#include "abphase/core/vec3.hpp"

namespace abphase::numerics {

/// Central-difference curl, O(h^2). The field must be finite within h of p.
template <class Field>
Vec3 curl_fd(Field&& field, const Vec3& p, double h) {
  const Vec3 dx{h, 0.0, 0.0};
  const Vec3 dy{0.0, h, 0.0};
  const Vec3 dz{0.0, 0.0, h};
  const Vec3 fxp = field(p + dx), fxm = field(p - dx);
  const Vec3 fyp = field(p + dy), fym = field(p - dy);
  const Vec3 fzp = field(p + dz), fzm = field(p - dz);
  const double inv = 1.0 / (2.0 * h);
  // d/dx, d/dy, d/dz of the whole vector
  const Vec3 ddx = (fxp - fxm) * inv;
  const Vec3 ddy = (fyp - fym) * inv;
  const Vec3 ddz = (fzp - fzm) * inv;
  return {ddy.z - ddz.y, ddz.x - ddx.z, ddx.y - ddy.x};
}

/// Central-difference divergence, O(h^2).
template <class Field>
double divergence_fd(Field&& field, const Vec3& p, double h) {
  const double inv = 1.0 / (2.0 * h);
  const double dxx = (field(p + Vec3{h, 0, 0}).x - field(p - Vec3{h, 0, 0}).x) * inv;
  const double dyy = (field(p + Vec3{0, h, 0}).y - field(p - Vec3{0, h, 0}).y) * inv;
  const double dzz = (field(p + Vec3{0, 0, h}).z - field(p - Vec3{0, 0, h}).z) * inv;
  return dxx + dyy + dzz;
}

/// Central-difference gradient of a scalar field, O(h^2).
template <class Scalar>
Vec3 gradient_fd(Scalar&& f, const Vec3& p, double h) {
  const double inv = 1.0 / (2.0 * h);
  return {(f(p + Vec3{h, 0, 0}) - f(p - Vec3{h, 0, 0})) * inv,
          (f(p + Vec3{0, h, 0}) - f(p - Vec3{0, h, 0})) * inv,
          (f(p + Vec3{0, 0, h}) - f(p - Vec3{0, 0, h})) * inv};
}

/// The six stencil points used by curl_fd / divergence_fd, in a fixed order.
inline std::array<Vec3, 6> fd_stencil(const Vec3& p, double h) {
  return {p + Vec3{h, 0, 0}, p - Vec3{h, 0, 0}, p + Vec3{0, h, 0},
          p - Vec3{0, h, 0}, p + Vec3{0, 0, h}, p - Vec3{0, 0, h}};
}

}  // namespace abphase::numerics
