#pragma once
//
// Fourier side of the p = 2 chord inequality. For a unit-speed loop of
// length 2 pi with coefficients c_j, the chord sum at N equal-arc marks is
// 4N (d, A d) with d_j = |j| c_j and
//
//   A_jk = |sin(pi m j / N) / j| |sin(pi m k / N) / k|   if j = k (mod N),
//
// zero otherwise. A splits into one rank-one block per residue class n mod N
// with norm sin^2(pi m n / N) S_n, where S_n = sum_l (n + lN)^{-2}.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chordlab/errors.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/linalg.hpp"

namespace chordlab {

enum class SeriesMode { series, closed };
enum class NormMode { block, dense };

inline void check_operator_index(int n, int m) {
  if (n < 2) throw DomainError("operator A needs N >= 2");
  if (m < 1) throw DomainError("operator A needs m >= 1");
}

/// |sin(pi m j / N) / j|
inline double operator_weight(int n, int m, long j) {
  // Reduce m j mod 2N so the sine argument stays small.
  const long r = ((static_cast<long>(m) * j) % (2L * n) + 2L * n) % (2L * n);
  return std::abs(std::sin(kPi * static_cast<double>(r) / n) / static_cast<double>(j));
}

/// Matrix element A^(N,m)_{jk}.
inline double entry(int n, int m, long j, long k) {
  check_operator_index(n, m);
  if (j == 0 || k == 0) throw DomainError("entry: indices must be nonzero");
  if (((j - k) % n) != 0) return 0.0;
  return operator_weight(n, m, j) * operator_weight(n, m, k);
}

/// S_n = sum over l with n + lN != 0 of (n + lN)^{-2}.
///
/// closed: (pi / (N sin(pi n / N)))^2.
/// series: direct summation over |l| <= ceil(1e6 / N), smallest terms first,
/// plus the midpoint of the integral bounds for the remaining tail.
inline double s_n(int n_classes, int n, SeriesMode mode = SeriesMode::closed) {
  if (n_classes < 2) throw DomainError("s_n: N must be >= 2");
  if (n < 1 || n > n_classes - 1)
    throw DomainError("s_n: n=" + std::to_string(n) + " outside [1, N-1]");
  const double big_n = n_classes;
  if (mode == SeriesMode::closed) {
    const double v = kPi / (big_n * std::sin(kPi * n / big_n));
    return v * v;
  }
  const long cutoff = static_cast<long>(std::ceil(1e6 / big_n));
  long double sum = 0.0L;
  for (long l = cutoff; l >= 1; --l) {
    const long double a = static_cast<long double>(l) * n_classes + n;
    const long double b = static_cast<long double>(l) * n_classes - n;
    sum += 1.0L / (a * a) + 1.0L / (b * b);
  }
  sum += 1.0L / (static_cast<long double>(n) * n);
  // Tail l > cutoff: integral from cutoff+1 (lower) and from cutoff (upper).
  auto tail_integral = [&](long double from) {
    return 1.0L / (big_n * (from * big_n + n)) + 1.0L / (big_n * (from * big_n - n));
  };
  const long double lower = tail_integral(static_cast<long double>(cutoff + 1));
  const long double upper = tail_integral(static_cast<long double>(cutoff));
  sum += 0.5L * (lower + upper);
  return static_cast<double>(sum);
}

/// (pi sin(pi m / N) / (N sin(pi / N)))^2
inline double bound_rhs(int n, int m) {
  check_chord_index(n, m);
  const double v = kPi * std::sin(kPi * m / n) / (n * std::sin(kPi / n));
  return v * v;
}

/// A^(N,m) restricted to 1 <= |j| <= K.
class TruncatedOperator {
 public:
  TruncatedOperator(int n, int m, long cutoff) : n_(n), m_(m), cutoff_(cutoff) {
    check_operator_index(n, m);
    if (cutoff < 1) throw DomainError("TruncatedOperator: cutoff must be >= 1");
    weights_.resize(static_cast<std::size_t>(2 * cutoff));
    classes_.resize(n);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const long j = index_of(i);
      weights_[i] = operator_weight(n, m, j);
      classes_[static_cast<std::size_t>(((j % n) + n) % n)].push_back(i);
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  long cutoff() const { return cutoff_; }
  std::size_t size() const { return weights_.size(); }

  /// Slot i holds index -K + i for i < K and i - K + 1 otherwise.
  long index_of(std::size_t i) const {
    const long k = static_cast<long>(i);
    return k < cutoff_ ? k - cutoff_ : k - cutoff_ + 1;
  }

  double element(std::size_t a, std::size_t b) const {
    return entry(n_, m_, index_of(a), index_of(b));
  }

  /// y = A x over every stored (j, k) pair with j = k mod N.
  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(x.size(), 0.0);
    for (const auto& cls : classes_)
      for (std::size_t a : cls) {
        double s = 0.0;
        const double wa = weights_[a];
        for (std::size_t b : cls) s += wa * weights_[b] * x[b];
        y[a] = s;
      }
    return y;
  }

 private:
  int n_;
  int m_;
  long cutoff_;
  std::vector<double> weights_;
  std::vector<std::vector<std::size_t>> classes_;
};

namespace detail {

/// Largest eigenvalue of a symmetric positive semidefinite operator by
/// Lanczos with full reorthogonalization from the all-ones start vector.
inline double lanczos_top(const TruncatedOperator& op, int max_steps) {
  const std::size_t dim = op.size();
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  const int steps = static_cast<int>(std::min<std::size_t>(dim, static_cast<std::size_t>(max_steps)));
  for (int k = 0; k < steps; ++k) {
    basis.push_back(v);
    auto w = op.apply(v);
    const double a = dot(w, v);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) {
        const double c = dot(u, w);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * u[i];
      }
    const double b = norm2(w);
    double scale = 0.0;
    for (double x : alpha) scale = std::max(scale, std::abs(x));
    if (b <= 1e-13 * std::max(scale, 1e-300)) break;
    beta.push_back(b);
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / b;
  }
  const std::size_t t = alpha.size();
  Matrix tri(t, t);
  for (std::size_t i = 0; i < t; ++i) {
    tri(i, i) = alpha[i];
    if (i + 1 < t) tri(i, i + 1) = tri(i + 1, i) = beta[i];
  }
  return jacobi_eigen(tri).values.back();
}

}  // namespace detail

/// ||A^(N,m)||.
///
/// block: max over residue classes n = 1..N-1 of sin^2(pi m n / N) S_n (the
/// class n = 0 block vanishes identically); exact.
/// dense: largest eigenvalue of the truncation to 1 <= |j| <= K, computed
/// matrix-free by Lanczos; increases to the block value as K grows.
inline double operator_norm(int n, int m, NormMode mode = NormMode::block, long cutoff = 10000) {
  check_operator_index(n, m);
  if (mode == NormMode::block) {
    double best = 0.0;
    for (int r = 1; r < n; ++r) {
      const long reduced = (static_cast<long>(m) * r) % (2L * n);
      const double s = std::sin(kPi * static_cast<double>(reduced) / n);
      best = std::max(best, s * s * s_n(n, r, SeriesMode::closed));
    }
    return best;
  }
  if (cutoff < n) throw DomainError("operator_norm: dense cutoff must be >= N");
  return detail::lanczos_top(TruncatedOperator(n, m, cutoff), 2 * n + 20);
}

/// Finitely supported sequence in C^dim indexed by nonzero integers.
using ModeSequence = std::map<long, CVec>;

/// (d, (A (x) I) d) = sum over j = k (mod N) of A_jk Re<d_j, d_k>.
inline double quadratic_form(const ModeSequence& d, int n, int m) {
  check_operator_index(n, m);
  double s = 0.0;
  for (const auto& [j, dj] : d) {
    if (j == 0) throw DomainError("quadratic_form: index 0 is not in the support domain");
    for (const auto& [k, dk] : d) {
      if (((j - k) % n) != 0) continue;
      const double a = entry(n, m, j, k);
      if (a == 0.0) continue;
      if (dj.size() != dk.size()) throw DomainError("quadratic_form: mixed dimensions");
      double inner = 0.0;
      for (std::size_t i = 0; i < dj.size(); ++i) inner += (std::conj(dj[i]) * dk[i]).real();
      s += a * inner;
    }
  }
  return s;
}

/// sum ||d_j||^2
inline double sequence_norm2(const ModeSequence& d) {
  double s = 0.0;
  for (const auto& [j, dj] : d)
    for (const auto& x : dj) s += std::norm(x);
  return s;
}

/// d_j = |j| c_j for every nonzero mode of the loop.
inline ModeSequence derivative_sequence(const FourierLoop& loop) {
  ModeSequence d;
  for (int j = 1; j <= loop.max_mode(); ++j) {
    for (int sign : {-1, 1}) {
      auto c = loop.coeff(sign * j);
      for (auto& x : c) x *= static_cast<double>(j);
      d.emplace(static_cast<long>(sign * j), std::move(c));
    }
  }
  return d;
}

/// Throws ParametrizationError unless |Gamma'| = 1 within `tol`. |Gamma'|^2 is
/// a trigonometric polynomial of degree 2M, so a grid of 8M (at least 256)
/// points resolves it.
inline void require_unit_speed(const FourierLoop& loop, double tol = 1e-6) {
  const int samples = std::max(256, 8 * loop.max_mode());
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    const double v = loop.speed(t);
    if (std::abs(v - 1.0) > tol)
      throw ParametrizationError("loop is not parametrized by arc length: speed " +
                                 std::to_string(v) + " at t=" + std::to_string(t));
  }
}

/// The p = 2 chord sum at marks 2 pi n / N, evaluated on the Fourier side as
/// 4N (d, A d).
inline double chordsum_fourier(const FourierLoop& loop, int n, int m) {
  check_chord_index(n, m);
  require_unit_speed(loop);
  return 4.0 * n * quadratic_form(derivative_sequence(loop), n, m);
}

struct SinInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// |sin(jx)| <= j sin(x) for j >= 1 and x in (0, pi/2].
inline SinInequality sin_ineq(int j, double x) {
  if (j < 1) throw DomainError("sin_ineq: j must be >= 1");
  if (!(x > 0.0 && x <= 0.5 * kPi)) throw DomainError("sin_ineq: x must lie in (0, pi/2]");
  SinInequality r{std::abs(std::sin(j * x)), j * std::sin(x), false};
  r.holds = r.lhs <= r.rhs * (1.0 + 4e-16);
  return r;
}

}  // namespace chordlab
