#pragma once

// Interaction energies between the solenoid and a uniformly moving charge.
//
//   Boyer:    +e v . A^(S)(q)   = int B_charge . B_solenoid d^3x
//   Saldanha: -e v . A^(S)(q)   (virtual-photon exchange, convolution form)
//   H_e term: -e v . A_ext(q)   with the full, gauged external potential
//
// The volume and convolution routes are independent quadratures of the two
// sides of the identity int B~ . B_ext = int A~ . j_ext.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"
#include "abphase/em/charge_fields.hpp"
#include "abphase/em/gauge.hpp"
#include "abphase/em/potential.hpp"
#include "abphase/em/repair_flags.hpp"
#include "abphase/em/solenoid.hpp"
#include "abphase/numerics/quadrature.hpp"

namespace abphase::energies {

using em::ChargeState;
using em::GaugeSpec;
using em::SolenoidSpec;

namespace detail {
inline void require_off_surface(const ChargeState& c, const SolenoidSpec& s, const char* who) {
  if (s.on_surface(c.position)) {
    throw GeometryError(std::string(who) + ": charge sits on the solenoid winding");
  }
}
}  // namespace detail

/// e v . A^(S)(q) with the ideal infinite-solenoid potential:
/// exterior e Phi (v . e_phi) / (2 pi rho_q).
inline double boyer_energy_closed_form(const ChargeState& charge, const SolenoidSpec& solenoid) {
  charge.validate();
  solenoid.validate();
  detail::require_off_surface(charge, solenoid, "boyer_energy_closed_form");
  return charge.charge * dot(charge.velocity, em::detail::ideal_base(solenoid, charge.position));
}

/// Saldanha's energy in closed form: the exact negative of Boyer's.
inline double saldanha_energy_closed_form(const ChargeState& charge,
                                          const SolenoidSpec& solenoid) {
  return -boyer_energy_closed_form(charge, solenoid);
}

/// int B_charge(x) . B_ext(x) d^3x over the solenoid interior, with the
/// interior field uniform. The cylinder is cut at min(L, opts.z_truncation);
/// when that cuts away field, a bound on the dropped tail is added to
/// error_estimate.
inline QuadResult boyer_energy_volume_integral(const ChargeState& charge,
                                               const SolenoidSpec& solenoid,
                                               const QuadOptions& opts) {
  charge.validate();
  solenoid.validate();
  opts.validate();
  const Vec3 q = charge.position;
  const double R = solenoid.radius;
  const double L = solenoid.length_or_inf();
  const double rho_q = cyl_radius(q);
  if (rho_q <= R * (1.0 + 1e-12) && std::abs(q.z) <= L) {
    throw GeometryError(
        "boyer_energy_volume_integral: charge lies inside the solenoid (self-field divergence)");
  }
  const double z_half = std::min(L, opts.z_truncation);
  const double B = solenoid.interior_field();
  if (norm(charge.velocity) == 0.0 || B == 0.0 || charge.charge == 0.0) return {};

  auto integrand = [&](const Vec3& x) { return B * em::moving_charge_b(charge, x).z; };
  QuadResult r = numerics::integrate_volume_cylinder(integrand, R, z_half, opts, q);

  if (z_half < L) {
    const double gap = z_half - std::abs(q.z);
    if (!(gap > 0.0)) {
      throw GeometryError("boyer_energy_volume_integral: z_truncation does not reach the charge");
    }
    const double tail = std::abs(charge.charge * B) * norm(charge.velocity) * (rho_q + R) * R *
                        R / (4.0 * gap * gap);
    r.error_estimate += tail;
    r.converged = r.converged &&
                  r.error_estimate <= std::max(opts.rel_tol * std::abs(r.value), opts.abs_tol);
  }
  return r;
}

/// -e v . A(q), with A the surface-current convolution of a finite solenoid.
inline QuadResult saldanha_energy_convolution(const ChargeState& charge,
                                              const SolenoidSpec& solenoid,
                                              const QuadOptions& opts) {
  charge.validate();
  solenoid.validate();
  detail::require_off_surface(charge, solenoid, "saldanha_energy_convolution");
  if (!solenoid.is_finite()) {
    throw ContractError("saldanha_energy_convolution: convolution needs a finite solenoid");
  }
  em::PotentialModel model = em::make_model(em::PotentialBase::biot_savart, solenoid, opts);
  const auto a = em::a_biot_savart(model, charge.position);
  QuadResult r;
  r.value = -charge.charge * dot(charge.velocity, a.value);
  r.error_estimate = std::abs(charge.charge) * norm(charge.velocity) * a.error_estimate;
  r.evaluations = a.evaluations;
  r.converged = a.converged;
  return r;
}

/// Energy shift from the string field of the singular gauge:
/// -e v . (Phi_s / 2 pi) e_phi / rho_q.
inline double string_energy(const ChargeState& charge, const GaugeSpec& gauge) {
  if (gauge.kind() != em::GaugeKind::singular) {
    throw ContractError("string_energy: gauge is not the singular string gauge");
  }
  charge.validate();
  const double rho = cyl_radius(charge.position);
  if (rho == 0.0) throw GeometryError("string_energy: charge on the z-axis");
  return -charge.charge * gauge.string_flux() / (2.0 * std::numbers::pi * rho) *
         dot(charge.velocity, e_phi(charge.position));
}

/// All interaction energies for one charge state.
struct EnergyReport {
  double boyer_closed = 0.0;
  QuadResult boyer_volume;
  QuadResult saldanha_convolution;
  double saldanha_closed = 0.0;
  /// boyer_volume + saldanha_convolution
  double cancellation_residual = 0.0;
  double combined_error = 0.0;
  /// relative gap between the volume form and the e v . A(q) convolution form
  double identity_relative_gap = 0.0;
  std::optional<double> string_correction;
  /// -e v . A_ext(q) including the gauge term
  double h_e_term = 0.0;
  /// Boyer + Saldanha + H_e, from the closed forms
  double total = 0.0;

  bool sign_theorem_holds = false;
  bool cancellation_holds = false;
  bool converged = false;
  std::vector<std::string> failures;
  std::vector<std::string> repair_flags;

  bool ok() const { return sign_theorem_holds && cancellation_holds && converged; }
};

/// Computes every energy, checks the sign theorem and the numerical
/// cancellation, and records what failed instead of throwing on it.
inline EnergyReport cancellation_report(const ChargeState& charge, const SolenoidSpec& solenoid,
                                        const GaugeSpec& gauge, const QuadOptions& opts) {
  EnergyReport rep;
  rep.boyer_closed = boyer_energy_closed_form(charge, solenoid);
  rep.saldanha_closed = saldanha_energy_closed_form(charge, solenoid);
  rep.boyer_volume = boyer_energy_volume_integral(charge, solenoid, opts);
  rep.saldanha_convolution = saldanha_energy_convolution(charge, solenoid, opts);
  rep.cancellation_residual = rep.boyer_volume.value + rep.saldanha_convolution.value;
  rep.combined_error = rep.boyer_volume.error_estimate + rep.saldanha_convolution.error_estimate;
  const double conv_side = -rep.saldanha_convolution.value;
  const double denom = std::max(std::abs(rep.boyer_volume.value), std::abs(conv_side));
  rep.identity_relative_gap =
      denom > 0.0 ? std::abs(rep.boyer_volume.value - conv_side) / denom : 0.0;

  Vec3 a_ext = em::detail::ideal_base(solenoid, charge.position);
  if (!gauge.is_none()) a_ext += gauge.gradient(charge.position);
  rep.h_e_term = -charge.charge * dot(charge.velocity, a_ext);
  if (gauge.kind() == em::GaugeKind::singular) rep.string_correction = string_energy(charge, gauge);
  rep.total = rep.boyer_closed + rep.saldanha_closed + rep.h_e_term;

  rep.sign_theorem_holds = rep.saldanha_closed == -rep.boyer_closed;
  rep.cancellation_holds = std::abs(rep.cancellation_residual) <= rep.combined_error;
  rep.converged = rep.boyer_volume.converged && rep.saldanha_convolution.converged;
  if (!rep.sign_theorem_holds) rep.failures.emplace_back("sign theorem");
  if (!rep.cancellation_holds) rep.failures.emplace_back("cancellation residual exceeds error");
  if (!rep.boyer_volume.converged) rep.failures.emplace_back("boyer volume quadrature");
  if (!rep.saldanha_convolution.converged) rep.failures.emplace_back("convolution quadrature");

  rep.repair_flags = {std::string(em::repair::coulomb_normalization),
                      std::string(em::repair::interior_flux_consistent),
                      std::string(em::repair::exterior_sign),
                      std::string(em::repair::surface_current)};
  if (gauge.kind() == em::GaugeKind::singular) {
    rep.repair_flags.emplace_back(em::repair::singular_gauge_normalization);
  }
  return rep;
}

/// Radial reduction of the Fourier identity for 1/(4 pi r).
struct FourierIdentityResult {
  QuadResult integral;  ///< (1 / (2 pi^2 r)) int_0^inf sin(k r) / k dk
  double expected = 0.0;
  double relative_deviation = 0.0;
};

namespace detail {

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// even-column estimate that agrees best with its predecessor, together with
/// that disagreement as an error proxy.
inline std::pair<double, double> wynn_epsilon(const std::vector<double>& s) {
  std::vector<double> prev(s.size() + 1, 0.0);
  std::vector<double> cur(s.begin(), s.end());
  std::vector<double> estimates{s.back()};
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    bool stalled = false;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0 || !std::isfinite(diff)) {
        stalled = true;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (stalled) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) estimates.push_back(cur.back());
  }
  if (estimates.size() == 1) {
    const double d = s.size() > 1 ? std::abs(s.back() - s[s.size() - 2]) : 0.0;
    return {s.back(), d};
  }
  std::size_t best = 1;
  for (std::size_t i = 2; i < estimates.size(); ++i) {
    if (std::abs(estimates[i] - estimates[i - 1]) < std::abs(estimates[best] - estimates[best - 1])) {
      best = i;
    }
  }
  return {estimates[best], std::abs(estimates[best] - estimates[best - 1])};
}

}  // namespace detail

/// Checks that (1 / (2 pi^2 r)) int_0^inf sin(k r)/k dk equals 1 / (4 pi r).
/// The oscillatory tail is handled by integrating half-periods and
/// accelerating the alternating partial sums.
inline FourierIdentityResult fourier_identity_check(double r, const QuadOptions& opts,
                                                    int half_periods = 40) {
  if (!(r > 0.0)) throw ContractError("fourier_identity_check: r must be > 0");
  const double pi = std::numbers::pi;
  auto sinc_r = [r](double k) { return k == 0.0 ? r : std::sin(k * r) / k; };
  std::vector<double> partial;
  partial.reserve(half_periods);
  double sum = 0.0;
  double err = 0.0;
  long evals = 0;
  bool converged = true;
  // The half-period pieces alternate in sign and their magnitudes sum to a
  // few times the total, so each gets a tenth of the budget.
  const QuadOptions piece_opts = opts.nested(1.0);
  for (int n = 0; n < half_periods; ++n) {
    auto piece = numerics::integrate_1d(sinc_r, n * pi / r, (n + 1) * pi / r, piece_opts);
    sum += piece.value;
    err += piece.error_estimate;
    evals += piece.evaluations;
    converged = converged && piece.converged;
    partial.push_back(sum);
  }
  auto [accelerated, accel_err] = detail::wynn_epsilon(partial);
  const double scale = 1.0 / (2.0 * pi * pi * r);
  FourierIdentityResult out;
  out.integral.value = scale * accelerated;
  out.integral.error_estimate = scale * (err + accel_err);
  out.integral.evaluations = evals;
  out.integral.converged =
      converged && out.integral.error_estimate <=
                       std::max(opts.rel_tol * std::abs(out.integral.value), opts.abs_tol);
  out.expected = 1.0 / (4.0 * pi * r);
  out.relative_deviation = std::abs(out.integral.value - out.expected) / out.expected;
  return out;
}

}  // namespace abphase::energies
