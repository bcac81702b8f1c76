#pragma once

#include <string_view>

// Names for the normalization repairs applied where the printed formulas are
// dimensionally or internally inconsistent. Every output produced through a
// repaired formula carries the corresponding flag.

namespace abphase::em::repair {

/// Elliptic modulus k^2 = 4 rho R / ((rho + R)^2 + z^2).
inline constexpr std::string_view elliptic_modulus = "elliptic_modulus_corrected";
/// Interior ideal potential Phi rho / (2 pi R^2), giving total flux exactly Phi.
inline constexpr std::string_view interior_flux_consistent = "interior_potential_flux_consistent";
/// Exterior ideal potential +Phi / (2 pi rho) (positive circulation).
inline constexpr std::string_view exterior_sign = "exterior_potential_sign_positive";
/// Coulomb field (e / 4 pi)(x - q) / |x - q|^3.
inline constexpr std::string_view coulomb_normalization = "coulomb_field_normalized";
/// String gauge chi = -(Phi_s / 2 pi) atan2(y, x).
inline constexpr std::string_view singular_gauge_normalization = "singular_gauge_2pi_normalized";
/// Sheet current density Phi / (pi R^2) per unit length.
inline constexpr std::string_view surface_current = "surface_current_from_flux";

}  // namespace abphase::em::repair
