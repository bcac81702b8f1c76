#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"

// Heaviside-Lorentz natural units throughout: c = hbar = 1, Coulomb and
// Biot-Savart kernels carry an explicit 1/(4 pi).

namespace abphase::em {

/// A solenoid on the z-axis, centred at the origin.
struct SolenoidSpec {
  double radius = 1.0;
  /// Half-length L; std::nullopt for an infinitely long solenoid.
  std::optional<double> half_length;
  /// Total flux through the cross-section. May be negative.
  double flux = 1.0;

  static SolenoidSpec infinite(double radius, double flux) { return {radius, std::nullopt, flux}; }
  static SolenoidSpec finite(double radius, double half_length, double flux) {
    return {radius, half_length, flux};
  }

  bool is_finite() const { return half_length.has_value(); }
  double length_or_inf() const {
    return half_length ? *half_length : std::numeric_limits<double>::infinity();
  }

  /// Uniform interior field B = flux / (pi R^2) along +z.
  double interior_field() const { return flux / (std::numbers::pi * radius * radius); }

  /// Azimuthal sheet current per unit length; equals the interior field.
  double surface_current_density() const { return interior_field(); }

  void validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw ContractError("SolenoidSpec: radius must be finite and > 0");
    }
    if (half_length && !(*half_length > 0.0 && std::isfinite(*half_length))) {
      throw ContractError("SolenoidSpec: half_length must be finite and > 0 when given");
    }
    if (!std::isfinite(flux)) throw ContractError("SolenoidSpec: flux must be finite");
  }

  /// True if p lies on the winding surface (within a relative 1e-12).
  bool on_surface(const Vec3& p) const {
    return std::abs(cyl_radius(p) - radius) <= 1e-12 * radius &&
           std::abs(p.z) <= length_or_inf();
  }
};

/// Nonrelativistic test charge moving with constant velocity.
struct ChargeState {
  double charge = 1.0;
  double mass = 1.0;
  Vec3 position{};
  Vec3 velocity{};

  static constexpr double kNonrelativisticSpeed = 0.1;

  void validate() const {
    if (!(mass > 0.0)) throw ContractError("ChargeState: mass must be > 0");
    if (!std::isfinite(charge) || !is_finite(position) || !is_finite(velocity)) {
      throw ContractError("ChargeState: non-finite charge, position or velocity");
    }
    if (norm(velocity) >= 1.0) throw ContractError("ChargeState: |v| must be < 1 (c = 1)");
  }

  /// Soft diagnostics; the constant-velocity fields assume |v| << 1.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (norm(velocity) >= kNonrelativisticSpeed) {
      out.emplace_back("speed |v| >= 0.1: nonrelativistic field formulas are approximate");
    }
    return out;
  }

  Vec3 momentum() const { return velocity * mass; }
};

}  // namespace abphase::em
