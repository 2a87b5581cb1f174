#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "chordlab/errors.hpp"

namespace chordlab {

inline constexpr double kEulerGamma = std::numbers::egamma;

/// Modified Bessel function of the second kind, order 0.
///
/// x <= 2: ascending series
///   K0(x) = -(ln(x/2) + gamma) I0(x) + sum_k (x^2/4)^k / (k!)^2 H_k.
/// x > 2: Steed's continued fraction (Temme's CF2) for the scaled value,
///   K0(x) = sqrt(pi / 2x) e^{-x} / s.
/// Underflows to 0 for very large x.
inline double bessel_k0(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k0: argument must be positive");
  if (x <= 2.0) {
    const double q = 0.25 * x * x;
    double term = 1.0;  // (q^k / (k!)^2)
    double i0 = 1.0;
    double harmonic = 0.0;
    double tail = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * k);
      harmonic += 1.0 / k;
      i0 += term;
      tail += term * harmonic;
      if (term * harmonic < 1e-18 * tail && term < 1e-18 * i0) break;
    }
    return -(std::log(0.5 * x) + kEulerGamma) * i0 + tail;
  }
  if (x > 745.0) return 0.0;
  // Continued fraction with nu = 0 (mu = 0): a1 = 1/4.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < std::numeric_limits<double>::epsilon() * 0.5) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
}

}  // namespace chordlab
