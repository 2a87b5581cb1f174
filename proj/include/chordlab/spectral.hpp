#pragma once
//
// Point interactions on a loop: the matrix Q_{i kappa} whose vanishing lowest
// eigenvalue fixes the ground state energy -kappa_1^2, its building blocks
// (Green's function values, regularized diagonal) and the root search.
//

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "chordlab/errors.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/linalg.hpp"
#include "chordlab/special_functions.hpp"

namespace chordlab {

inline void check_spectral_dim(int dim) {
  if (dim != 2 && dim != 3) throw DomainError("point interactions need dim 2 or 3");
}

/// G_{i kappa}(r): K0(kappa r) / 2pi in the plane, e^{-kappa r} / (4 pi r) in
/// space.
inline double green_value(double r, double kappa, int dim) {
  check_spectral_dim(dim);
  if (!(r > 0.0)) throw DomainError("green_value: distance must be positive");
  if (!(kappa > 0.0)) throw DomainError("green_value: kappa must be positive");
  if (dim == 2) return bessel_k0(kappa * r) / (2.0 * std::numbers::pi);
  return std::exp(-kappa * r) / (4.0 * std::numbers::pi * r);
}

/// Regularized Green's function at the source.
inline double xi(double kappa, int dim) {
  check_spectral_dim(dim);
  if (!(kappa > 0.0)) throw DomainError("xi: kappa must be positive");
  if (dim == 2) return -(std::log(0.5 * kappa) + kEulerGamma) / (2.0 * std::numbers::pi);
  return -kappa / (4.0 * std::numbers::pi);
}

struct QMatrix {
  Matrix values;
  double alpha = 0.0;
  double kappa = 0.0;
  int dim = 0;
};

namespace detail {

inline void check_nondegenerate(const PointConfiguration& cfg) {
  const double floor_len = 1e-12 * cfg.length();
  for (int i = 0; i < cfg.size(); ++i)
    for (int j = i + 1; j < cfg.size(); ++j)
      if (cfg.chord(i, j) < floor_len)
        throw SingularChordError("beads " + std::to_string(i) + " and " + std::to_string(j) +
                                 " coincide");
}

inline void check_cfg_dim(const PointConfiguration& cfg, int dim) {
  check_spectral_dim(dim);
  if (cfg.dim() != dim)
    throw DomainError("configuration lives in R^" + std::to_string(cfg.dim()) +
                      " but dim=" + std::to_string(dim) + " was requested");
}

}  // namespace detail

/// (Q)_{ii} = alpha - xi, (Q)_{ij} = -G(|y_i - y_j|).
inline QMatrix build_q(const PointConfiguration& cfg, double alpha, double kappa, int dim) {
  detail::check_cfg_dim(cfg, dim);
  detail::check_nondegenerate(cfg);
  const int n = cfg.size();
  QMatrix q{Matrix(n, n), alpha, kappa, dim};
  const double diag = alpha - xi(kappa, dim);
  for (int i = 0; i < n; ++i) {
    q.values(i, i) = diag;
    for (int j = i + 1; j < n; ++j) {
      const double g = green_value(cfg.chord(i, j), kappa, dim);
      q.values(i, j) = -g;
      q.values(j, i) = -g;
    }
  }
  return q;
}

struct MinEigen {
  double value = 0.0;
  std::vector<double> vector;
};

/// Lowest eigenpair of a symmetric matrix. The eigenvector sign is fixed so
/// that its component sum is positive (or, when that sum vanishes, its first
/// significant component is).
inline MinEigen min_eig(const Matrix& m) {
  const auto eig = jacobi_eigen(m);
  MinEigen out{eig.values.front(), eig.vectors.column(0)};
  double sum = 0.0;
  for (double x : out.vector) sum += x;
  double sign = 1.0;
  if (std::abs(sum) > 1e-10) {
    sign = sum > 0.0 ? 1.0 : -1.0;
  } else {
    for (double x : out.vector)
      if (std::abs(x) > 1e-10) {
        sign = x > 0.0 ? 1.0 : -1.0;
        break;
      }
  }
  for (double& x : out.vector) x *= sign;
  return out;
}

inline MinEigen min_eig(const QMatrix& q) { return min_eig(q.values); }

struct GroundState {
  double kappa1 = 0.0;
  double energy = 0.0;
  std::vector<double> eigvec;
  int iterations = 0;
};

/// Ground state energy -kappa_1^2 of the N point interactions at the beads,
/// located as the root in kappa of the lowest Q eigenvalue. Returns nullopt
/// when no bound state exists (only possible in dim 3).
///
/// The lowest eigenvalue must increase with kappa; this is checked at the
/// bracket ends and at every bisection midpoint and an AssumptionError is
/// raised if it fails.
inline std::optional<GroundState> ground_state(const PointConfiguration& cfg, double alpha,
                                               int dim, double tol = 1e-12) {
  detail::check_cfg_dim(cfg, dim);
  detail::check_nondegenerate(cfg);
  if (!std::isfinite(alpha)) throw DomainError("ground_state: alpha must be finite");
  int evaluations = 0;
  auto lowest = [&](double kappa) {
    ++evaluations;
    return min_eig(build_q(cfg, alpha, kappa, dim)).value;
  };

  double hi = 1.0;
  double f_hi = lowest(hi);
  while (f_hi <= 0.0) {
    hi *= 2.0;
    if (hi > 1e18) throw AssumptionError("ground_state: lowest Q eigenvalue never turns positive");
    f_hi = lowest(hi);
  }
  double lo = 1e-6;
  double f_lo = lowest(lo);
  if (f_lo >= 0.0) {
    if (dim == 3) {
      lo = 1e-8;
      f_lo = lowest(lo);
      if (f_lo >= 0.0) return std::nullopt;
    } else {
      while (f_lo >= 0.0) {
        lo *= 1e-3;
        if (lo < 1e-300) throw AssumptionError("ground_state: no sign change toward kappa -> 0");
        f_lo = lowest(lo);
      }
    }
  }
  if (!(lo < hi && f_lo < f_hi))
    throw AssumptionError("ground_state: lowest Q eigenvalue not increasing in kappa on [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");

  int steps = 0;
  while (hi - lo > tol && steps < 60) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = lowest(mid);
    const double slack = 1e-12 * (std::abs(f_lo) + std::abs(f_hi));
    if (f_mid < f_lo - slack || f_mid > f_hi + slack)
      throw AssumptionError("ground_state: lowest Q eigenvalue not monotone near kappa=" +
                            std::to_string(mid));
    if (f_mid > 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
    ++steps;
  }
  // Linear interpolation inside the final bracket.
  double kappa = lo - f_lo * (hi - lo) / (f_hi - f_lo);
  if (!(kappa >= lo && kappa <= hi)) kappa = 0.5 * (lo + hi);

  GroundState gs;
  gs.kappa1 = kappa;
  gs.energy = -kappa * kappa;
  gs.eigvec = min_eig(build_q(cfg, alpha, kappa, dim)).vector;
  gs.iterations = evaluations + 1;
  return gs;
}

/// (phi, Q phi) for phi = N^{-1/2}(1, ..., 1):
/// alpha - xi - (2/N) sum_{i<j} G(|y_i - y_j|). Upper bound of the lowest
/// Q eigenvalue; equal to it for a regular polygon.
inline double rayleigh_upper_bound(const PointConfiguration& cfg, double alpha, double kappa,
                                   int dim) {
  detail::check_cfg_dim(cfg, dim);
  detail::check_nondegenerate(cfg);
  double pair_sum = 0.0;
  for (int i = 0; i < cfg.size(); ++i)
    for (int j = i + 1; j < cfg.size(); ++j) pair_sum += green_value(cfg.chord(i, j), kappa, dim);
  return alpha - xi(kappa, dim) - 2.0 * pair_sum / cfg.size();
}

}  // namespace chordlab
