#pragma once

// Test-only reference computations. Nothing here calls into the library, so
// the values they produce are independent of the code under test.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Entropy of the circle frame tau_theta = (cos, sin)/sqrt(pi) at h = (cos psi, sin psi),
/// by direct equispaced quadrature in long double: -sum (2pi/N) p log p, p = cos^2(theta - psi)/pi.
inline long double circle_entropy(std::size_t n, long double psi) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double w = 2.0L * pi / static_cast<long double>(n);
  long double sum = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    const long double theta = 2.0L * pi * static_cast<long double>(k) / static_cast<long double>(n);
    const long double c = std::cos(theta - psi);
    const long double p = c * c / pi;
    if (p > 0.0L) sum -= w * p * std::log(p);
  }
  return sum;
}

/// Closed form of the continuous circle-frame entropy: log(4 pi) - 1.
/// (cos^2 of a uniform angle is Beta(1/2,1/2), whose E[X log X] is 1/2 - log 2.)
inline double circle_entropy_exact() { return std::log(4.0 * std::numbers::pi) - 1.0; }

inline long double deutsch_lower_extended(long double c) { return -2.0L * std::log((1.0L + c) / 2.0L); }

/// -sum x log x over a probability vector.
inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

// Frozen values, computed once with mpmath at 40 digits.
inline constexpr double kDeutschAtInvSqrt2 = 0.31669436764074987779;   // -2 log((1 + 2^-1/2)/2)
inline constexpr double kCircleEntropy = 1.5310242469692907930;        // log(4 pi) - 1
inline constexpr double kLog4Pi2 = 3.6757541328186909671;              // log(4 pi^2)
inline constexpr double kTwoLogPi = 2.2894597716988003483;             // 2 log pi
inline constexpr double kEntropySumPiOver8 = 0.83299106139937490146;   // std/Fourier dim 2 at t = pi/8
inline constexpr double kBuzanoStdFourier2 = 0.85355339059327376220;   // (1 + 1/sqrt 2)/2

}  // namespace oracle
