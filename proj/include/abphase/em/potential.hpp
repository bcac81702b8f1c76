#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"
#include "abphase/em/gauge.hpp"
#include "abphase/em/repair_flags.hpp"
#include "abphase/em/solenoid.hpp"
#include "abphase/numerics/elliptic.hpp"
#include "abphase/numerics/quadrature.hpp"
#include "abphase/numerics/vector_calculus.hpp"

namespace abphase::em {

enum class PotentialBase { ideal_infinite, finite_closed_form, finite_elliptic, biot_savart };

inline const char* to_string(PotentialBase b) {
  switch (b) {
    case PotentialBase::ideal_infinite: return "ideal_infinite";
    case PotentialBase::finite_closed_form: return "finite_closed_form";
    case PotentialBase::finite_elliptic: return "finite_elliptic";
    case PotentialBase::biot_savart: return "biot_savart";
  }
  return "?";
}

/// A vector-potential realisation for a solenoid plus an attached gauge term.
/// Immutable once built; copies are cheap apart from the gauge closures.
struct PotentialModel {
  PotentialBase base = PotentialBase::ideal_infinite;
  SolenoidSpec solenoid;
  GaugeSpec gauge;
  QuadOptions quad;

  std::string provenance() const {
    return std::string(to_string(base)) + "+gauge:" + gauge.describe();
  }

  /// Normalization repairs that every evaluation of this model relies on.
  std::vector<std::string> repair_flags() const {
    std::vector<std::string> f;
    switch (base) {
      case PotentialBase::ideal_infinite:
        f.emplace_back(repair::interior_flux_consistent);
        f.emplace_back(repair::exterior_sign);
        break;
      case PotentialBase::finite_closed_form:
        f.emplace_back(repair::interior_flux_consistent);
        break;
      case PotentialBase::finite_elliptic:
        f.emplace_back(repair::elliptic_modulus);
        break;
      case PotentialBase::biot_savart:
        f.emplace_back(repair::surface_current);
        break;
    }
    if (gauge.kind() == GaugeKind::singular) f.emplace_back(repair::singular_gauge_normalization);
    return f;
  }
};

inline PotentialModel make_model(PotentialBase base, SolenoidSpec solenoid,
                                 std::optional<QuadOptions> quad = std::nullopt) {
  solenoid.validate();
  PotentialModel m;
  m.base = base;
  m.quad = quad ? *quad : QuadOptions::for_length_scale(solenoid.radius);
  m.quad.validate();
  m.solenoid = solenoid;
  return m;
}

/// A potential value with the quadrature error behind it (zero for closed forms).
struct PotentialValue {
  Vec3 A;
  double error_estimate = 0.0;
  bool converged = true;
  long evaluations = 0;
};

using QuadResult3 = BasicQuadResult<Vec3>;

// ---------------------------------------------------------------------------
// Individual realisations. Each a_* adds the model's gauge term.

namespace detail {

inline void require_base(const PotentialModel& m, PotentialBase b, const char* who) {
  if (m.base != b) {
    throw ContractError(std::string(who) + ": model base is " + to_string(m.base));
  }
}

/// Ungauged ideal infinite-solenoid potential:
/// A_phi = Phi rho / (2 pi R^2) inside, Phi / (2 pi rho) outside.
inline Vec3 ideal_base(const SolenoidSpec& s, const Vec3& p) {
  const double rho = cyl_radius(p);
  if (rho == 0.0) return {};
  const double a_phi = rho < s.radius
                           ? s.flux * rho / (2.0 * std::numbers::pi * s.radius * s.radius)
                           : s.flux / (2.0 * std::numbers::pi * rho);
  return e_phi(p) * a_phi;
}

}  // namespace detail

/// Infinite ideal solenoid, closed form, plus gauge.
inline Vec3 a_ideal_infinite(const PotentialModel& model, const Vec3& point) {
  detail::require_base(model, PotentialBase::ideal_infinite, "a_ideal_infinite");
  return detail::ideal_base(model.solenoid, point) + model.gauge.gradient(point);
}

enum class ClosedFormRegime { exterior, interior };

/// Output of the finite-length closed-form approximation.
struct ClosedFormSample {
  Vec3 A;
  ClosedFormRegime regime = ClosedFormRegime::exterior;
  double length_factor = 1.0;  ///< L / sqrt(rho^2 + L^2) or L / sqrt(R^2 + L^2)
  /// Interior value with the printed normalization Phi rho / (pi R^2);
  /// reported next to the flux-consistent value, never used downstream.
  std::optional<Vec3> interior_as_printed;
};

/// Regime bounds for the closed-form finite-solenoid approximation.
inline constexpr double kClosedFormFarRatio = 10.0;   // rho >= 10 R
inline constexpr double kClosedFormNearRatio = 0.1;   // rho <= R / 10

/// Finite-length midplane approximation valid for rho >> R or rho << R.
inline ClosedFormSample a_finite_closed_form(const PotentialModel& model, const Vec3& point) {
  detail::require_base(model, PotentialBase::finite_closed_form, "a_finite_closed_form");
  const SolenoidSpec& s = model.solenoid;
  if (std::abs(point.z) > 1e-12 * std::max(s.radius, cyl_radius(point))) {
    throw ContractError("a_finite_closed_form: point must lie in the z = 0 midplane");
  }
  const double rho = cyl_radius(point);
  const double R = s.radius;
  const double L = s.length_or_inf();
  const double pi = std::numbers::pi;
  ClosedFormSample out;
  if (rho >= kClosedFormFarRatio * R) {
    out.regime = ClosedFormRegime::exterior;
    out.length_factor = std::isinf(L) ? 1.0 : L / std::hypot(rho, L);
    out.A = e_phi(point) * (s.flux / (2.0 * pi * rho) * out.length_factor);
  } else if (rho <= kClosedFormNearRatio * R) {
    out.regime = ClosedFormRegime::interior;
    out.length_factor = std::isinf(L) ? 1.0 : L / std::hypot(R, L);
    if (rho == 0.0) {
      out.A = {};
      out.interior_as_printed = Vec3{};
    } else {
      out.A = e_phi(point) * (s.flux * rho / (2.0 * pi * R * R) * out.length_factor);
      out.interior_as_printed = e_phi(point) * (s.flux * rho / (pi * R * R) * out.length_factor);
    }
  } else {
    throw RegimeError("a_finite_closed_form: rho/R = " + std::to_string(rho / R) +
                      " is outside the rho >> R / rho << R regimes; use finite_elliptic");
  }
  if (rho > 0.0) out.A += model.gauge.gradient(point);
  return out;
}

/// Finite solenoid from the elliptic-integral current-loop superposition:
///   A_phi(rho, z) = Phi / (pi^2 R) int_{-L}^{L} G(rho, z - z') dz',
///   G = [(2 - k^2) K(k) - 2 E(k)] / (k^2 sqrt((rho + R)^2 + zeta^2)),
///   k^2 = 4 rho R / ((rho + R)^2 + zeta^2).
/// In the midplane this is (2 Phi / (pi^2 R)) int_0^L G dz.
inline QuadResult3 a_finite_elliptic(const PotentialModel& model, const Vec3& point) {
  detail::require_base(model, PotentialBase::finite_elliptic, "a_finite_elliptic");
  const SolenoidSpec& s = model.solenoid;
  if (!s.is_finite()) throw ContractError("a_finite_elliptic: solenoid must have finite length");
  const double R = s.radius;
  const double L = *s.half_length;
  const double rho = cyl_radius(point);
  if (std::abs(rho - R) <= 1e-12 * R && std::abs(point.z) <= L) {
    throw SingularIntegrandError("a_finite_elliptic: point lies on the winding (rho = R)");
  }
  QuadResult3 out;
  if (rho == 0.0) {
    out.value = model.gauge.gradient(point);
    return out;
  }
  const double sum2 = (rho + R) * (rho + R);
  auto kernel = [&](double zeta) {
    const double d2 = sum2 + zeta * zeta;
    const double m = std::min(4.0 * rho * R / d2, std::nextafter(1.0, 0.0));
    return numerics::loop_kernel(m) / std::sqrt(d2);
  };
  const double pi = std::numbers::pi;
  QuadResult q;
  double prefactor;
  const double gap = std::max(std::abs(rho - R), 1e-6 * R);
  if (point.z == 0.0) {
    const double breaks[] = {gap, 4 * gap, 16 * gap, 64 * gap};
    q = numerics::integrate_1d(kernel, 0.0, L, model.quad, breaks, 2);
    prefactor = 2.0 * s.flux / (pi * pi * R);
  } else {
    const double z = point.z;
    auto shifted = [&](double zp) { return kernel(z - zp); };
    std::vector<double> breaks{z};
    for (double f : {1.0, 4.0, 16.0, 64.0}) {
      breaks.push_back(z - f * gap);
      breaks.push_back(z + f * gap);
    }
    q = numerics::integrate_1d(shifted, -L, L, model.quad, breaks, 2);
    prefactor = s.flux / (pi * pi * R);
  }
  out.value = e_phi(point) * (prefactor * q.value) + model.gauge.gradient(point);
  out.error_estimate = std::abs(prefactor) * q.error_estimate;
  out.evaluations = q.evaluations;
  out.converged = q.converged;
  return out;
}

/// Direct surface-current convolution
///   A(x) = (1 / 4 pi) int K e_phi' / |x - x'| dS',  K = Phi / (pi R^2),
/// over the sheet rho' = R, |z'| <= L.
inline QuadResult3 a_biot_savart(const PotentialModel& model, const Vec3& point) {
  detail::require_base(model, PotentialBase::biot_savart, "a_biot_savart");
  const SolenoidSpec& s = model.solenoid;
  if (!s.is_finite()) throw ContractError("a_biot_savart: solenoid must have finite length");
  const double K = s.surface_current_density();
  auto integrand = [&](const Vec3& src) -> Vec3 {
    const Vec3 d = point - src;
    return Vec3{-src.y, src.x, 0.0} * (1.0 / (s.radius * norm(d)));
  };
  auto q = numerics::integrate_surface_cylinder(integrand, s.radius, *s.half_length, model.quad,
                                                point);
  const double scale = K / (4.0 * std::numbers::pi);
  QuadResult3 out;
  out.value = q.value * scale + model.gauge.gradient(point);
  out.error_estimate = q.error_estimate * std::abs(scale);
  out.evaluations = q.evaluations;
  out.converged = q.converged;
  return out;
}

/// Returns a copy of `model` whose evaluations add grad chi.
inline PotentialModel apply_gauge(const PotentialModel& model, GaugeSpec gauge) {
  if (!model.gauge.is_none()) {
    throw ContractError("apply_gauge: model already carries a gauge term; compose chi instead");
  }
  PotentialModel out = model;
  out.gauge = std::move(gauge);
  return out;
}

/// The model with its gauge term removed.
inline PotentialModel ungauged(const PotentialModel& model) {
  PotentialModel out = model;
  out.gauge = GaugeSpec::none();
  return out;
}

/// Evaluate the full (gauged) potential of any base.
inline PotentialValue potential(const PotentialModel& model, const Vec3& point) {
  switch (model.base) {
    case PotentialBase::ideal_infinite: return {a_ideal_infinite(model, point)};
    case PotentialBase::finite_closed_form: return {a_finite_closed_form(model, point).A};
    case PotentialBase::finite_elliptic: {
      auto q = a_finite_elliptic(model, point);
      return {q.value, q.error_estimate, q.converged, q.evaluations};
    }
    case PotentialBase::biot_savart: {
      auto q = a_biot_savart(model, point);
      return {q.value, q.error_estimate, q.converged, q.evaluations};
    }
  }
  throw ContractError("potential: unknown base");
}

/// Evaluate the model's potential without its gauge term.
inline PotentialValue base_potential(const PotentialModel& model, const Vec3& point) {
  if (model.gauge.is_none()) return potential(model, point);
  return potential(ungauged(model), point);
}

/// Magnetic field. Closed form for the ungauged ideal model; otherwise the
/// central-difference curl of the full potential with step opts.fd_step.
inline Vec3 b_field(const PotentialModel& model, const Vec3& point, const QuadOptions& opts) {
  const SolenoidSpec& s = model.solenoid;
  if (model.base == PotentialBase::ideal_infinite && model.gauge.is_none()) {
    if (s.on_surface(point)) {
      throw GeometryError("b_field: point lies on the solenoid surface (field discontinuity)");
    }
    return cyl_radius(point) < s.radius ? Vec3{0.0, 0.0, s.interior_field()} : Vec3{};
  }
  const double h = opts.fd_step;
  const double rho = cyl_radius(point);
  if (std::abs(rho - s.radius) <= h && std::abs(point.z) <= s.length_or_inf() + h) {
    throw GeometryError("b_field: finite-difference stencil straddles the solenoid surface");
  }
  if (model.gauge.kind() == GaugeKind::singular && rho <= h) {
    throw GeometryError("b_field: finite-difference stencil touches the singular string");
  }
  auto field = [&](const Vec3& p) { return potential(model, p).A; };
  return numerics::curl_fd(field, point, h);
}

/// A potential and field sample with the model that produced it.
struct FieldSample {
  Vec3 point;
  Vec3 A;
  Vec3 B;
  std::string provenance;
};

inline FieldSample sample_point(const PotentialModel& model, const Vec3& point,
                                const QuadOptions& opts) {
  return {point, potential(model, point).A, b_field(model, point, opts), model.provenance()};
}

}  // namespace abphase::em
