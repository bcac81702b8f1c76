#pragma once

#include <cmath>
#include <string>

#include "abphase/core/errors.hpp"

namespace abphase {

/// Tolerances and limits shared by every quadrature and finite-difference
/// operation in the library.
struct QuadOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_subdivisions = 20000;
  /// Half-extent used when an integral runs over an infinite axis.
  double z_truncation = 1e4;
  /// Central-difference step for curl, divergence and gradient.
  double fd_step = 1e-4;

  /// Defaults scaled to a characteristic length (usually the solenoid radius).
  static QuadOptions for_length_scale(double length) {
    QuadOptions o;
    o.fd_step = 1e-4 * length;
    o.z_truncation = 1e4 * length;
    return o;
  }

  void validate() const {
    if (!(rel_tol > 0.0)) throw ContractError("QuadOptions: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw ContractError("QuadOptions: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw ContractError("QuadOptions: max_subdivisions must be >= 1");
    if (!(z_truncation > 0.0)) throw ContractError("QuadOptions: z_truncation must be > 0");
    if (!(fd_step > 0.0)) throw ContractError("QuadOptions: fd_step must be > 0");
  }

  /// Tolerance for a quadrature nested inside another one over a range of
  /// length `outer_length`.
  QuadOptions nested(double outer_length) const {
    QuadOptions o = *this;
    o.rel_tol = rel_tol * 0.1;
    o.abs_tol = abs_tol * 0.1 / (outer_length > 0.0 ? outer_length : 1.0);
    return o;
  }
};

/// Outcome of an adaptive quadrature.
template <class T>
struct BasicQuadResult {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

using QuadResult = BasicQuadResult<double>;

}  // namespace abphase
