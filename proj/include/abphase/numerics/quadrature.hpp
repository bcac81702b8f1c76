#pragma once

// Adaptive Simpson quadrature with a Richardson error estimate, and the
// nested 2D/3D integrals over solenoid-shaped domains built from it.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"
#include "abphase/numerics/quad_options.hpp"

namespace abphase::numerics {

/// A quadrature value that drags along the error of an inner quadrature, so
/// that an outer rule integrates the inner error estimates with the same
/// weights it applies to the values. Refinement decisions look at `value` only.
template <class T>
struct Carried {
  T value{};
  double inner_error = 0.0;

  Carried& operator+=(const Carried& o) {
    value += o.value;
    inner_error += o.inner_error;
    return *this;
  }
  Carried& operator-=(const Carried& o) {
    value -= o.value;
    inner_error -= o.inner_error;
    return *this;
  }
  Carried& operator*=(double s) {
    value *= s;
    inner_error *= s;
    return *this;
  }
  friend Carried operator+(Carried a, const Carried& b) { return a += b; }
  friend Carried operator-(Carried a, const Carried& b) { return a -= b; }
  friend Carried operator*(Carried a, double s) { return a *= s; }
  friend Carried operator*(double s, Carried a) { return a *= s; }
};

template <class T>
double magnitude(const Carried<T>& c) {
  using abphase::magnitude;
  return magnitude(c.value);
}

namespace detail {

template <class T>
struct Panel {
  double a, b;
  // f at a, a + w/4, a + w/2, a + 3w/4, b
  T f0, f1, f2, f3, f4;
  T estimate;
  double error;
};

template <class T>
struct PanelOrder {
  bool operator()(const Panel<T>& l, const Panel<T>& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;  // deterministic tie-break: leftmost first
  }
};

inline bool finite_value(double v) { return std::isfinite(v); }
inline bool finite_value(const Vec3& v) { return is_finite(v); }
template <class T>
bool finite_value(const Carried<T>& c) {
  return finite_value(c.value) && std::isfinite(c.inner_error);
}

template <class T>
Panel<T> make_panel(double a, double b, const T& f0, const T& f1, const T& f2, const T& f3,
                    const T& f4) {
  using abphase::magnitude;
  using numerics::magnitude;
  const double w = b - a;
  const T coarse = (f0 + 4.0 * f2 + f4) * (w / 6.0);
  const T fine = (f0 + 4.0 * f1 + 2.0 * f2 + 4.0 * f3 + f4) * (w / 12.0);
  const T diff = fine - coarse;
  return Panel<T>{a, b, f0, f1, f2, f3, f4, fine + diff * (1.0 / 15.0), magnitude(diff) / 15.0};
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b].
///
/// Panels are refined worst-first until the summed Richardson error est. is
/// below max(rel_tol * |value|, abs_tol) or `max_subdivisions` panels exist.
/// `breakpoints` inside (a, b) seed the initial partition; use them at kinks
/// and near-singular closest approaches. The integrand's return type may be
/// double, Vec3 or Carried<...>.
template <class F>
auto integrate_1d(F&& f, double a, double b, const QuadOptions& opts,
                  std::span<const double> breakpoints = {}, int initial_panels = 4)
    -> BasicQuadResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  using abphase::magnitude;
  using numerics::magnitude;
  using detail::Panel;

  opts.validate();
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
    throw ContractError("integrate_1d: need finite a < b, got [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
  }

  BasicQuadResult<T> result;
  long evals = 0;
  auto eval = [&](double x) -> T {
    ++evals;
    return f(x);
  };

  std::vector<double> cuts{a};
  for (double bp : breakpoints) {
    if (bp > a && bp < b) cuts.push_back(bp);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (initial_panels > 1) {
    std::vector<double> fine{cuts.front()};
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      for (int j = 1; j <= initial_panels; ++j) {
        fine.push_back(cuts[i - 1] + (cuts[i] - cuts[i - 1]) * j / initial_panels);
      }
    }
    fine.back() = cuts.back();
    cuts = std::move(fine);
  }

  std::priority_queue<Panel<T>, std::vector<Panel<T>>, detail::PanelOrder<T>> queue;
  std::vector<Panel<T>> done;  // panels too narrow to split further
  T total{};
  double total_error = 0.0;
  bool finite = true;

  auto push = [&](Panel<T> p) {
    finite = finite && detail::finite_value(p.estimate) && std::isfinite(p.error);
    total += p.estimate;
    total_error += p.error;
    queue.push(std::move(p));
  };

  T left = eval(cuts.front());
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double pa = cuts[i - 1];
    const double pb = cuts[i];
    const double w = pb - pa;
    T f1 = eval(pa + 0.25 * w);
    T f2 = eval(pa + 0.5 * w);
    T f3 = eval(pa + 0.75 * w);
    T f4 = eval(pb);
    push(detail::make_panel(pa, pb, left, f1, f2, f3, f4));
    left = f4;
  }

  const double min_width = 1e-13 * (b - a);
  const int limit = std::max<int>(opts.max_subdivisions, static_cast<int>(cuts.size()) - 1);
  auto within_tolerance = [&] {
    return total_error <= std::max(opts.rel_tol * magnitude(total), opts.abs_tol);
  };

  while (finite && !queue.empty() && !within_tolerance() &&
         static_cast<int>(queue.size() + done.size()) < limit) {
    Panel<T> worst = queue.top();
    queue.pop();
    total -= worst.estimate;
    total_error -= worst.error;
    const double w = worst.b - worst.a;
    if (w < min_width) {
      total += worst.estimate;
      total_error += worst.error;
      done.push_back(std::move(worst));
      continue;
    }
    const double mid = worst.a + 0.5 * w;
    T l1 = eval(worst.a + 0.125 * w);
    T l3 = eval(worst.a + 0.375 * w);
    T r1 = eval(worst.a + 0.625 * w);
    T r3 = eval(worst.a + 0.875 * w);
    push(detail::make_panel(worst.a, mid, worst.f0, l1, worst.f1, l3, worst.f2));
    push(detail::make_panel(mid, worst.b, worst.f2, r1, worst.f3, r3, worst.f4));
  }

  // Re-sum in positional order so the result does not depend on the drift of
  // the running totals.
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Panel<T>& l, const Panel<T>& r) { return l.a < r.a; });
  T value{};
  double error = 0.0;
  for (const auto& p : done) {
    value += p.estimate;
    error += p.error;
  }

  result.value = value;
  result.error_estimate = error;
  result.evaluations = evals;
  result.converged =
      finite && std::isfinite(error) &&
      error <= std::max(opts.rel_tol * magnitude(value), opts.abs_tol);
  return result;
}

namespace detail {

// Collapse a Carried result into a plain one with the inner error folded in.
template <class T>
BasicQuadResult<T> fold(const BasicQuadResult<Carried<T>>& r, long evaluations, bool inner_ok,
                        const QuadOptions& opts) {
  using abphase::magnitude;
  BasicQuadResult<T> out;
  out.value = r.value.value;
  out.error_estimate = r.error_estimate + std::abs(r.value.inner_error);
  out.evaluations = evaluations;
  out.converged = r.converged && inner_ok &&
                  out.error_estimate <= std::max(opts.rel_tol * magnitude(out.value), opts.abs_tol);
  return out;
}


// Outer share of the tolerance budget, leaving room for the nested errors.
inline QuadOptions outer_share(const QuadOptions& opts) {
  QuadOptions o = opts;
  o.rel_tol *= 0.85;
  o.abs_tol *= 0.85;
  return o;
}

}  // namespace detail

/// Integral of f over the lateral cylinder surface rho = R, z in
/// [-z_half, z_half]: int int f(x') R dphi' dz'. f receives the Cartesian
/// surface point.
///
/// When `field_point` is given (the point where a 1/|x - x'| kernel is
/// centred), the integration grid is split at its azimuth and height so the
/// closest approach gets refined first. A field point on the surface itself
/// is rejected.
template <class F>
auto integrate_surface_cylinder(F&& f, double R, double z_half, const QuadOptions& opts,
                                std::optional<Vec3> field_point = std::nullopt)
    -> BasicQuadResult<std::decay_t<std::invoke_result_t<F&, const Vec3&>>> {
  using T = std::decay_t<std::invoke_result_t<F&, const Vec3&>>;
  if (!(R > 0.0) || !(z_half > 0.0)) {
    throw ContractError("integrate_surface_cylinder: need R > 0 and z_half > 0");
  }
  double phi_center = 0.0;
  std::vector<double> z_breaks;
  if (field_point) {
    const double rho = cyl_radius(*field_point);
    if (std::abs(rho - R) <= 1e-12 * R && std::abs(field_point->z) <= z_half) {
      throw SingularIntegrandError(
          "integrate_surface_cylinder: field point lies on the source surface; offset the "
          "point or subdivide around it");
    }
    if (rho > 0.0) phi_center = azimuth(*field_point);
    if (std::abs(field_point->z) < z_half) z_breaks.push_back(field_point->z);
    // Extra cuts at a few multiples of the distance to the surface keep the
    // peaked axial profile from being under-sampled by the first panels.
    const double gap = std::max(std::abs(rho - R), 1e-6 * R);
    for (double s : {1.0, 4.0, 16.0}) {
      z_breaks.push_back(field_point->z - s * gap);
      z_breaks.push_back(field_point->z + s * gap);
    }
  }

  long evals = 0;
  bool inner_ok = true;
  const QuadOptions inner = opts.nested(2.0 * z_half);
  const double pi = std::numbers::pi;
  auto over_phi = [&](double z) -> Carried<T> {
    auto g = [&](double phi) -> T { return f(from_cylindrical(R, phi, z)) * R; };
    const double breaks[] = {phi_center};
    auto r = integrate_1d(g, phi_center - pi, phi_center + pi, inner, breaks, 4);
    evals += r.evaluations;
    inner_ok = inner_ok && r.converged;
    return {r.value, r.error_estimate};
  };
  auto outer = integrate_1d(over_phi, -z_half, z_half, detail::outer_share(opts), z_breaks, 2);
  return detail::fold(outer, evals, inner_ok, opts);
}

/// Integral of f over the solid cylinder rho < R, |z| < z_half in cylindrical
/// coordinates (Jacobian rho included). `field_point` marks an integrable
/// near-singularity outside the cylinder; a field point inside or on the
/// cylinder is rejected.
template <class F>
auto integrate_volume_cylinder(F&& f, double R, double z_half, const QuadOptions& opts,
                               std::optional<Vec3> field_point = std::nullopt)
    -> BasicQuadResult<std::decay_t<std::invoke_result_t<F&, const Vec3&>>> {
  using T = std::decay_t<std::invoke_result_t<F&, const Vec3&>>;
  if (!(R > 0.0) || !(z_half > 0.0)) {
    throw ContractError("integrate_volume_cylinder: need R > 0 and z_half > 0");
  }
  double phi_center = 0.0;
  std::vector<double> z_breaks;
  if (field_point) {
    const double rho = cyl_radius(*field_point);
    if (rho <= R * (1.0 + 1e-12) && std::abs(field_point->z) <= z_half) {
      throw GeometryError(
          "integrate_volume_cylinder: field point lies inside the integration cylinder");
    }
    if (rho > 0.0) phi_center = azimuth(*field_point);
    if (std::abs(field_point->z) < z_half) z_breaks.push_back(field_point->z);
    const double gap = std::max(rho - R, 0.0) + 1e-6 * R;
    for (double s : {1.0, 4.0, 16.0}) {
      z_breaks.push_back(field_point->z - s * gap);
      z_breaks.push_back(field_point->z + s * gap);
    }
  }

  long evals = 0;
  bool inner_ok = true;
  const double pi = std::numbers::pi;
  const QuadOptions mid_opts = opts.nested(2.0 * z_half);
  const QuadOptions inner_opts = mid_opts.nested(R);

  auto over_phi = [&](double rho, double z) -> Carried<T> {
    auto g = [&](double phi) -> T { return f(from_cylindrical(rho, phi, z)) * rho; };
    const double breaks[] = {phi_center};
    auto r = integrate_1d(g, phi_center - pi, phi_center + pi, inner_opts, breaks, 4);
    evals += r.evaluations;
    inner_ok = inner_ok && r.converged;
    return {r.value, r.error_estimate};
  };
  auto over_rho = [&](double z) -> Carried<T> {
    auto g = [&](double rho) -> Carried<T> { return over_phi(rho, z); };
    auto r = integrate_1d(g, 0.0, R, detail::outer_share(mid_opts));
    inner_ok = inner_ok && r.converged;
    return {r.value.value, r.error_estimate + std::abs(r.value.inner_error)};
  };
  auto outer = integrate_1d(over_rho, -z_half, z_half, detail::outer_share(opts), z_breaks, 2);
  return detail::fold(outer, evals, inner_ok, opts);
}

}  // namespace abphase::numerics
