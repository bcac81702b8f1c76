#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"
#include "abphase/em/gauge.hpp"
#include "abphase/em/potential.hpp"
#include "abphase/numerics/quadrature.hpp"
#include "abphase/phase/path.hpp"

namespace abphase::phase {

/// Phase acquired along a path, split into the part from the ungauged
/// potential and the part from the gauge term. phase == base_part + gauge_part.
struct PhaseResult {
  double phase = 0.0;
  double base_part = 0.0;
  double gauge_part = 0.0;
  QuadResult quadrature;  ///< line integral of the ungauged potential (times e)
};

namespace detail {

/// Parameters t in (0, 1) where segment a + t (b - a) crosses rho = R.
inline std::vector<double> radius_crossings(const Vec3& a, const Vec3& b, double R) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double qa = dx * dx + dy * dy;
  const double qb = 2.0 * (a.x * dx + a.y * dy);
  const double qc = a.x * a.x + a.y * a.y - R * R;
  std::vector<double> out;
  if (qa == 0.0) return out;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
    if (t > 0.0 && t < 1.0) out.push_back(t);
  }
  return out;
}

inline bool segment_touches_winding(const Vec3& a, const Vec3& b, const em::SolenoidSpec& s) {
  const double L = s.length_or_inf();
  auto on = [&](const Vec3& p) {
    return std::abs(cyl_radius(p) - s.radius) <= 1e-9 * s.radius && std::abs(p.z) <= L;
  };
  if (on(a) || on(b)) return true;
  for (double t : radius_crossings(a, b, s.radius)) {
    if (std::abs(a.z + t * (b.z - a.z)) <= L) return true;
  }
  return false;
}

/// Signed azimuthal angle swept by the segment a -> b, which must not meet the axis.
inline double segment_sweep(const Vec3& a, const Vec3& b) {
  const double cross_z = a.x * b.y - a.y * b.x;
  const double dot_xy = a.x * b.x + a.y * b.y;
  return std::atan2(cross_z, dot_xy);
}

}  // namespace detail

/// Total signed azimuthal advance of the path about the z-axis, tracked
/// segment by segment so no branch cut is ever crossed discontinuously.
inline double accumulated_azimuth(const PathSpec& path) {
  if (!(path.min_axis_distance() > 0.0)) {
    throw GeometryError("accumulated_azimuth: path meets the z-axis");
  }
  double total = 0.0;
  const auto& v = path.vertices();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) total += detail::segment_sweep(v[i], v[i + 1]);
  return total;
}

/// Signed number of revolutions of a closed path about the z-axis.
inline int winding_number(const PathSpec& path) {
  if (!path.closed()) throw ContractError("winding_number: path is open");
  const double turns = accumulated_azimuth(path) / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) {
    throw GeometryError("winding_number: angle accumulation is not an integer multiple of 2 pi");
  }
  return static_cast<int>(rounded);
}

/// Line integral of a vector field along the polyline, one adaptive
/// quadrature per segment. `field` returns an em::PotentialValue; its own
/// error estimate is integrated along with the value. `kinks` lists radii at
/// which the field is only continuous, so segments get split there.
template <class Field>
QuadResult line_integral(Field&& field, const PathSpec& path, const QuadOptions& opts,
                         std::vector<double> kinks = {}) {
  QuadResult total;
  const auto& v = path.vertices();
  const std::size_t n = v.size() - 1;
  QuadOptions seg_opts = opts;
  seg_opts.abs_tol = opts.abs_tol / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = v[i];
    const Vec3 d = v[i + 1] - v[i];
    if (norm(d) == 0.0) continue;
    bool field_ok = true;
    auto integrand = [&](double t) -> numerics::Carried<double> {
      const em::PotentialValue pv = field(a + d * t);
      field_ok = field_ok && pv.converged;
      return {dot(pv.A, d), pv.error_estimate * norm(d)};
    };
    std::vector<double> breaks;
    for (double R : kinks) {
      auto c = detail::radius_crossings(a, v[i + 1], R);
      breaks.insert(breaks.end(), c.begin(), c.end());
    }
    auto r = numerics::integrate_1d(integrand, 0.0, 1.0, seg_opts, breaks);
    total.value += r.value.value;
    total.error_estimate += r.error_estimate + std::abs(r.value.inner_error);
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged && field_ok;
  }
  return total;
}

/// Overload-free helper: line integral of the model's potential, with or
/// without the gauge term.
inline QuadResult potential_line_integral(const em::PotentialModel& model, const PathSpec& path,
                                          const QuadOptions& opts, bool include_gauge) {
  std::vector<double> kinks;
  if (model.base == em::PotentialBase::ideal_infinite) kinks.push_back(model.solenoid.radius);
  if (include_gauge) {
    return line_integral([&](const Vec3& p) { return em::potential(model, p); }, path, opts,
                         kinks);
  }
  const em::PotentialModel bare = em::ungauged(model);
  return line_integral([&](const Vec3& p) { return em::potential(bare, p); }, path, opts, kinks);
}

/// e times the line integral of grad chi along the path. Regular gauges use
/// the exact endpoint difference; the singular gauge uses branch-continuous
/// angle tracking, -(e Phi_s / 2 pi) * (total swept azimuth).
inline double gauge_shift(const em::GaugeSpec& gauge, const PathSpec& path, double e) {
  switch (gauge.kind()) {
    case em::GaugeKind::none: return 0.0;
    case em::GaugeKind::regular:
      return e * (gauge.chi(path.end()) - gauge.chi(path.start()));
    case em::GaugeKind::singular:
      if (!(path.min_axis_distance() > 0.0)) {
        throw GeometryError("gauge_shift: path meets the singular string on the z-axis");
      }
      return -e * gauge.string_flux() / (2.0 * std::numbers::pi) * accumulated_azimuth(path);
  }
  return 0.0;
}

inline void check_path_geometry(const em::PotentialModel& model, const PathSpec& path,
                                const char* who) {
  if (model.gauge.kind() == em::GaugeKind::singular && !(path.min_axis_distance() > 0.0)) {
    throw GeometryError(std::string(who) + ": path meets the z-axis under a singular gauge");
  }
  if (model.base == em::PotentialBase::biot_savart ||
      model.base == em::PotentialBase::finite_elliptic) {
    const auto& v = path.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (detail::segment_touches_winding(v[i], v[i + 1], model.solenoid)) {
        throw GeometryError(std::string(who) + ": segment " + std::to_string(i) +
                            " touches the solenoid winding");
      }
    }
  }
}

/// e times the line integral of the full potential A + grad chi along the path.
inline PhaseResult ab_phase(const em::PotentialModel& model, const PathSpec& path, double e,
                            const QuadOptions& opts) {
  check_path_geometry(model, path, "ab_phase");
  PhaseResult out;
  const QuadResult base = potential_line_integral(model, path, opts, /*include_gauge=*/false);
  out.quadrature = base;
  out.quadrature.value = e * base.value;
  out.quadrature.error_estimate = std::abs(e) * base.error_estimate;
  out.base_part = e * base.value;
  out.gauge_part = gauge_shift(model.gauge, path, e);
  out.phase = out.base_part + out.gauge_part;
  return out;
}

/// Phase around a closed loop.
inline PhaseResult closed_loop_phase(const em::PotentialModel& model, const PathSpec& loop,
                                     double e, const QuadOptions& opts) {
  if (!loop.closed()) throw ContractError("closed_loop_phase: path is not closed");
  return ab_phase(model, loop, e, opts);
}

struct TwoPathResult {
  double difference = 0.0;
  PhaseResult a;
  PhaseResult b;
};

/// ab_phase(a) - ab_phase(b) for two paths with common endpoints.
inline TwoPathResult two_path_difference(const em::PotentialModel& model, const PathSpec& path_a,
                                         const PathSpec& path_b, double e,
                                         const QuadOptions& opts) {
  auto close = [](const Vec3& p, const Vec3& q) {
    const double scale = std::max({1.0, norm(p), norm(q)});
    return norm(p - q) <= 1e-12 * scale;
  };
  if (!close(path_a.start(), path_b.start()) || !close(path_a.end(), path_b.end())) {
    throw ContractError("two_path_difference: paths do not share both endpoints");
  }
  TwoPathResult out;
  out.a = ab_phase(model, path_a, e, opts);
  out.b = ab_phase(model, path_b, e, opts);
  out.difference = out.a.phase - out.b.phase;
  return out;
}

}  // namespace abphase::phase
