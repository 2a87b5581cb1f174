#pragma once
//
// Mean-chord inequalities
//   D^p(m):  sum_n |y_{n+m} - y_n|^p  <= N^{1-p} L^p sin^p(pi m/N) / sin^p(pi/N)
//   D^-p(m): sum_n |y_{n+m} - y_n|^-p >= N^{1+p} sin^p(pi/N) / (L^p sin^p(pi m/N))
// for equal-arc marks on a loop of length L, and the Green's function
// deficit that links them to the point-interaction problem.
//

#include <cmath>

#include "chordlab/errors.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/spectral.hpp"

namespace chordlab {

/// Sign-normalized comparison: deficit >= 0 means the inequality holds.
/// `p` carries the sign of the family (p < 0 for the D^-|p| inequality).
struct InequalityReport {
  int n = 0;
  int m = 0;
  double p = 0.0;
  double length = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  bool holds = false;
};

inline constexpr double kDeficitTolerance = 1e-9;

/// Number of chords joining marks m apart: N, or N/2 for the diameters of an
/// even N.
inline int nu(int n, int m) {
  check_chord_index(n, m);
  return (n % 2 == 0 && 2 * m == n) ? n / 2 : n;
}

/// Right-hand side of D^p(m) for p > 0, of D^{-|p|}(m) for p < 0.
inline double dp_bound(int n, double length, int m, double p) {
  check_chord_index(n, m);
  if (p == 0.0 || !std::isfinite(p)) throw DomainError("dp_bound: exponent must be nonzero");
  if (!(length > 0.0)) throw DomainError("dp_bound: L must be positive");
  const double ratio = std::sin(kPi * m / n) / std::sin(kPi / n);
  const double nn = static_cast<double>(n);
  if (p > 0.0) return std::pow(nn, 1.0 - p) * std::pow(length * ratio, p);
  const double q = -p;
  return std::pow(nn, 1.0 + q) / std::pow(length * ratio, q);
}

namespace detail {

inline InequalityReport make_report(const PointConfiguration& cfg, int m, double p, double lhs,
                                    double rhs) {
  InequalityReport r;
  r.n = cfg.size();
  r.m = m;
  r.p = p;
  r.length = cfg.length();
  r.lhs = lhs;
  r.rhs = rhs;
  r.deficit = p > 0.0 ? rhs - lhs : lhs - rhs;
  r.holds = r.deficit >= -kDeficitTolerance * std::abs(rhs);
  return r;
}

}  // namespace detail

inline InequalityReport check_dp(const PointConfiguration& cfg, int m, double p) {
  if (!(p > 0.0)) throw DomainError("check_dp: p must be positive");
  return detail::make_report(cfg, m, p, chord_sum(cfg, m, p),
                             dp_bound(cfg.size(), cfg.length(), m, p));
}

/// D^{-p}(m) for p > 0; the report carries exponent -p.
inline InequalityReport check_dminus(const PointConfiguration& cfg, int m, double p) {
  if (!(p > 0.0)) throw DomainError("check_dminus: p must be positive");
  return detail::make_report(cfg, m, -p, chord_sum(cfg, m, -p),
                             dp_bound(cfg.size(), cfg.length(), m, -p));
}

/// sum_{i<j} G(|y_i - y_j|) minus the same sum for the regular polygon with
/// the same (N, L, dim). Positive values certify that the configuration's
/// Rayleigh quotient lies below the polygon's.
inline double green_deficit(const PointConfiguration& cfg, double kappa, int dim) {
  detail::check_cfg_dim(cfg, dim);
  detail::check_nondegenerate(cfg);
  const auto poly = regular_polygon(cfg.size(), cfg.length(), dim);
  double s = 0.0;
  for (int i = 0; i < cfg.size(); ++i)
    for (int j = i + 1; j < cfg.size(); ++j)
      s += green_value(cfg.chord(i, j), kappa, dim) - green_value(poly.chord(i, j), kappa, dim);
  return s;
}

}  // namespace chordlab
