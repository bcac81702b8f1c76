#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "abphase/core/errors.hpp"

namespace abphase::numerics {

namespace detail {
inline constexpr int kMaxAgmIterations = 64;
}

/// Complete elliptic integral of the first kind K(k), modulus convention,
/// by the arithmetic-geometric mean: K = pi / (2 AGM(1, sqrt(1 - k^2))).
inline double elliptic_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic_K: modulus must lie in [0, 1), got " + std::to_string(k));
  }
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int i = 0; i < detail::kMaxAgmIterations && std::abs(a - b) > 1e-15 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (a + b);
}

/// Complete elliptic integral of the second kind E(k), modulus convention.
///
/// Uses the AGM with the Legendre correction
///   E = K * (1 - sum_{n>=0} 2^{n-1} c_n^2),  c_0 = k, c_{n+1} = (a_n - b_n)/2.
inline double elliptic_E(double k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw DomainError("elliptic_E: modulus must lie in [0, 1], got " + std::to_string(k));
  }
  if (k == 1.0) return 1.0;
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  double weight = 0.5;
  double sum = weight * c * c;
  for (int i = 0; i < detail::kMaxAgmIterations && std::abs(a - b) > 1e-15 * a; ++i) {
    const double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    weight *= 2.0;
    sum += weight * c * c;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return K * (1.0 - sum);
}

/// The combination [(2 - k^2) K(k) - 2 E(k)] / k^2 that appears in the
/// current-loop vector potential, parameterised by m = k^2.
///
/// The direct form loses all digits for small m, where the numerator is
/// O(m^2); a series in m takes over there.
inline double loop_kernel(double m) {
  if (!(m >= 0.0 && m < 1.0)) {
    throw DomainError("loop_kernel: parameter k^2 must lie in [0, 1), got " + std::to_string(m));
  }
  if (m < 1e-2) {
    const double series =
        1.0 + m * (3.0 / 4.0 +
                   m * (75.0 / 128.0 +
                        m * (245.0 / 512.0 + m * (6615.0 / 16384.0 + m * (22869.0 / 65536.0)))));
    return std::numbers::pi * m / 16.0 * series;
  }
  const double k = std::sqrt(m);
  return ((2.0 - m) * elliptic_K(k) - 2.0 * elliptic_E(k)) / m;
}

}  // namespace abphase::numerics
