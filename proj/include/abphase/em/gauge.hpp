#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"

namespace abphase::em {

enum class GaugeKind { none, regular, singular };

inline const char* to_string(GaugeKind k) {
  switch (k) {
    case GaugeKind::none: return "none";
    case GaugeKind::regular: return "regular";
    case GaugeKind::singular: return "singular";
  }
  return "?";
}

/// Smooth single-valued gauge function with its analytic gradient.
struct RegularGauge {
  std::string name;
  std::map<std::string, double> parameters;
  std::function<double(const Vec3&)> chi;
  std::function<Vec3(const Vec3&)> gradient;
};

/// A gauge term added to a base vector potential: A' = A + grad chi.
///
/// The singular kind is the multi-valued string gauge
///   chi = -(flux / 2 pi) atan2(y, x),  grad chi = -(flux / (2 pi rho)) e_phi,
/// which is undefined on the z-axis.
class GaugeSpec {
 public:
  GaugeSpec() = default;

  static GaugeSpec none() { return {}; }

  static GaugeSpec regular(RegularGauge g) {
    if (!g.chi || !g.gradient) throw ContractError("GaugeSpec: regular gauge needs chi and gradient");
    GaugeSpec s;
    s.kind_ = GaugeKind::regular;
    s.regular_ = std::move(g);
    return s;
  }

  static GaugeSpec singular(double string_flux) {
    if (!std::isfinite(string_flux)) throw ContractError("GaugeSpec: string flux must be finite");
    GaugeSpec s;
    s.kind_ = GaugeKind::singular;
    s.string_flux_ = string_flux;
    return s;
  }

  GaugeKind kind() const { return kind_; }
  bool is_none() const { return kind_ == GaugeKind::none; }
  double string_flux() const { return string_flux_; }
  const RegularGauge& regular_gauge() const { return regular_; }

  std::string describe() const {
    switch (kind_) {
      case GaugeKind::none: return "none";
      case GaugeKind::regular: return "regular:" + regular_.name;
      case GaugeKind::singular: return "singular";
    }
    return "?";
  }

  /// chi(p). For the singular kind this is the principal branch, with the cut
  /// along the negative x-axis.
  double chi(const Vec3& p) const {
    switch (kind_) {
      case GaugeKind::none: return 0.0;
      case GaugeKind::regular: return regular_.chi(p);
      case GaugeKind::singular:
        require_off_axis(p);
        return -string_flux_ / (2.0 * std::numbers::pi) * azimuth(p);
    }
    return 0.0;
  }

  Vec3 gradient(const Vec3& p) const {
    switch (kind_) {
      case GaugeKind::none: return {};
      case GaugeKind::regular: return regular_.gradient(p);
      case GaugeKind::singular: {
        require_off_axis(p);
        const double rho2 = p.x * p.x + p.y * p.y;
        const double c = -string_flux_ / (2.0 * std::numbers::pi * rho2);
        return {-p.y * c, p.x * c, 0.0};
      }
    }
    return {};
  }

 private:
  static void require_off_axis(const Vec3& p) {
    if (cyl_radius(p) == 0.0) {
      throw GeometryError("singular gauge evaluated on the z-axis (string location)");
    }
  }

  GaugeKind kind_ = GaugeKind::none;
  RegularGauge regular_;
  double string_flux_ = 0.0;
};

/// Named regular gauge families used by scenarios and tests.
namespace gauges {

/// chi = c . x
inline RegularGauge linear(Vec3 c) {
  return {"linear",
          {{"cx", c.x}, {"cy", c.y}, {"cz", c.z}},
          [c](const Vec3& p) { return dot(c, p); },
          [c](const Vec3&) { return c; }};
}

/// chi = a x^2 + b y^2 + c z^2
inline RegularGauge quadratic(double a, double b, double c) {
  return {"quadratic",
          {{"a", a}, {"b", b}, {"c", c}},
          [=](const Vec3& p) { return a * p.x * p.x + b * p.y * p.y + c * p.z * p.z; },
          [=](const Vec3& p) { return Vec3{2 * a * p.x, 2 * b * p.y, 2 * c * p.z}; }};
}

/// chi = a (x^2 - y^2) + b x y z; satisfies Laplace's equation.
inline RegularGauge harmonic(double a, double b) {
  return {"harmonic",
          {{"a", a}, {"b", b}},
          [=](const Vec3& p) { return a * (p.x * p.x - p.y * p.y) + b * p.x * p.y * p.z; },
          [=](const Vec3& p) {
            return Vec3{2 * a * p.x + b * p.y * p.z, -2 * a * p.y + b * p.x * p.z,
                        b * p.x * p.y};
          }};
}

/// Compactly supported C-infinity bump:
/// chi = A exp(1 - 1 / (1 - s)), s = |x - c|^2 / w^2, zero for s >= 1.
inline RegularGauge bump(Vec3 center, double width, double amplitude) {
  if (!(width > 0.0)) throw ContractError("bump gauge: width must be > 0");
  auto value = [=](const Vec3& p) {
    const Vec3 d = p - center;
    const double s = dot(d, d) / (width * width);
    return s < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
  };
  return {"bump",
          {{"cx", center.x}, {"cy", center.y}, {"cz", center.z}, {"width", width},
           {"amplitude", amplitude}},
          value,
          [=](const Vec3& p) {
            const Vec3 d = p - center;
            const double s = dot(d, d) / (width * width);
            if (s >= 1.0) return Vec3{};
            const double one_minus = 1.0 - s;
            const double chi = amplitude * std::exp(1.0 - 1.0 / one_minus);
            return d * (-chi / (one_minus * one_minus) * 2.0 / (width * width));
          }};
}

/// chi = A sin(k . x + phase)
inline RegularGauge oscillatory(double amplitude, Vec3 k, double phase) {
  return {"oscillatory",
          {{"amplitude", amplitude}, {"kx", k.x}, {"ky", k.y}, {"kz", k.z}, {"phase", phase}},
          [=](const Vec3& p) { return amplitude * std::sin(dot(k, p) + phase); },
          [=](const Vec3& p) { return k * (amplitude * std::cos(dot(k, p) + phase)); }};
}

}  // namespace gauges

}  // namespace abphase::em
