#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"

namespace abphase::phase {

/// Oriented polyline in 3-space. Parametric curves are sampled into vertices.
class PathSpec {
 public:
  PathSpec() = default;

  /// closed requires vertices.front() == vertices.back() exactly.
  PathSpec(std::vector<Vec3> vertices, bool closed) : vertices_(std::move(vertices)), closed_(closed) {
    if (vertices_.size() < 2) throw ContractError("PathSpec: need at least 2 vertices");
    for (const auto& v : vertices_) {
      if (!is_finite(v)) throw ContractError("PathSpec: non-finite vertex");
    }
    if (closed_ && !(vertices_.front() == vertices_.back())) {
      throw ContractError("PathSpec: closed path must end exactly at its first vertex");
    }
  }

  /// Sample curve(t), t in [0, 1], at `segments` + 1 equally spaced parameters.
  /// A closed curve reuses the first sample as the last vertex.
  static PathSpec sampled(const std::function<Vec3(double)>& curve, int segments, bool closed) {
    if (segments < 1) throw ContractError("PathSpec::sampled: need >= 1 segment");
    std::vector<Vec3> v;
    v.reserve(segments + 1);
    for (int i = 0; i <= segments; ++i) v.push_back(curve(static_cast<double>(i) / segments));
    if (closed) v.back() = v.front();
    return PathSpec(std::move(v), closed);
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  std::size_t segment_count() const { return vertices_.size() - 1; }
  const Vec3& start() const { return vertices_.front(); }
  const Vec3& end() const { return vertices_.back(); }

  /// Closest approach of the path to the z-axis.
  double min_axis_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
      best = std::min(best, segment_axis_distance(vertices_[i], vertices_[i + 1]));
    }
    return best;
  }

  /// Same geometry traversed backwards.
  PathSpec reversed() const {
    std::vector<Vec3> v(vertices_.rbegin(), vertices_.rend());
    return PathSpec(std::move(v), closed_);
  }

  /// Each segment split into `factor` equal pieces.
  PathSpec refined(int factor) const {
    if (factor < 1) throw ContractError("PathSpec::refined: factor must be >= 1");
    std::vector<Vec3> v{vertices_.front()};
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
      for (int j = 1; j <= factor; ++j) {
        v.push_back(j == factor ? vertices_[i + 1]
                                : vertices_[i] + (vertices_[i + 1] - vertices_[i]) *
                                                     (static_cast<double>(j) / factor));
      }
    }
    return PathSpec(std::move(v), closed_);
  }

  /// distance from segment [a, b] to the z-axis (planar point-segment distance)
  static double segment_axis_distance(const Vec3& a, const Vec3& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(-(a.x * dx + a.y * dy) / len2, 0.0, 1.0);
    return std::hypot(a.x + t * dx, a.y + t * dy);
  }

 private:
  std::vector<Vec3> vertices_;
  bool closed_ = false;
};

/// Concatenate paths end to start. The joint vertices must coincide.
inline PathSpec concatenate(const std::vector<PathSpec>& parts) {
  if (parts.empty()) throw ContractError("concatenate: no paths");
  std::vector<Vec3> v = parts.front().vertices();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!(parts[i].start() == v.back())) {
      throw ContractError("concatenate: path " + std::to_string(i) +
                          " does not start where the previous one ends");
    }
    v.insert(v.end(), parts[i].vertices().begin() + 1, parts[i].vertices().end());
  }
  const bool closed = v.front() == v.back();
  return PathSpec(std::move(v), closed);
}

// Named generators.

/// Circle of radius r about (cx, cy) at height z, `turns` revolutions
/// (negative = clockwise), `segments_per_turn` chords per revolution.
inline PathSpec circle(double r, int turns = 1, int segments_per_turn = 64, double cx = 0.0,
                       double cy = 0.0, double z = 0.0) {
  if (!(r > 0.0)) throw ContractError("circle: radius must be > 0");
  if (turns == 0) throw ContractError("circle: turns must be non-zero");
  const int segments = std::abs(turns) * segments_per_turn;
  const double total = 2.0 * std::numbers::pi * turns;
  return PathSpec::sampled(
      [=](double t) {
        return Vec3{cx + r * std::cos(total * t), cy + r * std::sin(total * t), z};
      },
      segments, true);
}

/// Arc about the z-axis at radius r from angle phi0 to phi1.
inline PathSpec arc(double r, double phi0, double phi1, int segments = 64, double z = 0.0) {
  if (!(r > 0.0)) throw ContractError("arc: radius must be > 0");
  return PathSpec::sampled(
      [=](double t) { return from_cylindrical(r, phi0 + (phi1 - phi0) * t, z); }, segments,
      false);
}

/// Straight radial segment at fixed azimuth and height.
inline PathSpec radial(double phi, double rho_from, double rho_to, double z = 0.0) {
  return PathSpec({from_cylindrical(rho_from, phi, z), from_cylindrical(rho_to, phi, z)}, false);
}

/// The two open paths of the wedge configuration. They share both endpoints,
/// (r, phi0) and (r, phi0 + theta):
///   a: the arc of angle theta at radius r;
///   b: radially in to the axis and back out along phi0 + theta.
/// Together they bound the sector of angle theta, which holds the fraction
/// theta / 2 pi of the solenoid flux.
struct WedgePair {
  PathSpec a;
  PathSpec b;
};

inline WedgePair wedge_pair(double r, double theta, double phi0 = 0.0, int segments = 64,
                            double z = 0.0) {
  if (!(theta > 0.0 && theta < 2.0 * std::numbers::pi)) {
    throw ContractError("wedge_pair: theta must lie in (0, 2 pi)");
  }
  PathSpec a = arc(r, phi0, phi0 + theta, segments, z);
  // reuse the arc's exact endpoints so the pair shares them bit for bit
  PathSpec b({a.start(), Vec3{0.0, 0.0, z}, a.end()}, false);
  return {std::move(a), std::move(b)};
}

}  // namespace abphase::phase
