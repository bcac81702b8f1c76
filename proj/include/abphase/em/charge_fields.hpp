#pragma once

#include <numbers>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"
#include "abphase/em/solenoid.hpp"

namespace abphase::em {

namespace detail {
inline Vec3 separation_from_charge(const ChargeState& charge, const Vec3& point,
                                   const char* who) {
  const Vec3 d = point - charge.position;
  if (norm(d) == 0.0) {
    throw GeometryError(std::string(who) + ": field point coincides with the charge");
  }
  return d;
}
}  // namespace detail

/// Coulomb potential e / (4 pi |x - q|).
inline double moving_charge_scalar_potential(const ChargeState& charge, const Vec3& point) {
  const Vec3 d = detail::separation_from_charge(charge, point, "moving_charge_scalar_potential");
  return charge.charge / (4.0 * std::numbers::pi * norm(d));
}

/// E = (e / 4 pi) (x - q) / |x - q|^3.
inline Vec3 moving_charge_e(const ChargeState& charge, const Vec3& point) {
  const Vec3 d = detail::separation_from_charge(charge, point, "moving_charge_e");
  const double r = norm(d);
  return d * (charge.charge / (4.0 * std::numbers::pi * r * r * r));
}

/// B = v x E for a charge in uniform nonrelativistic motion.
inline Vec3 moving_charge_b(const ChargeState& charge, const Vec3& point) {
  return cross(charge.velocity, moving_charge_e(charge, point));
}

/// Coulomb-gauge vector potential (e / 4 pi) v / |x - q|; its curl is
/// moving_charge_b.
inline Vec3 moving_charge_a(const ChargeState& charge, const Vec3& point) {
  const Vec3 d = detail::separation_from_charge(charge, point, "moving_charge_a");
  return charge.velocity * (charge.charge / (4.0 * std::numbers::pi * norm(d)));
}

}  // namespace abphase::em
