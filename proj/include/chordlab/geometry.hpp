#pragma once
//
// Bead configurations, Fourier loops and their arc-length parametrization,
// plus the test families used throughout (regular polygons, rhomboids,
// random smooth loops, random admissible configurations).
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chordlab/errors.hpp"
#include "chordlab/linalg.hpp"
#include "chordlab/quadrature.hpp"
#include "chordlab/rng.hpp"

namespace chordlab {

using Point = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// N beads in R^dim with a length budget L. Indices are cyclic.
class PointConfiguration {
 public:
  PointConfiguration(int dim, double length, std::vector<Point> points)
      : dim_(dim), length_(length), points_(std::move(points)) {
    if (dim_ < 1) throw DomainError("configuration dimension must be positive");
    if (!(length_ > 0.0) || !std::isfinite(length_))
      throw DomainError("configuration length L must be positive and finite");
    if (points_.empty()) throw DomainError("configuration needs at least one point");
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (static_cast<int>(points_[j].size()) != dim_)
        throw DomainError("point " + std::to_string(j) + " has wrong dimension");
      for (double x : points_[j])
        if (!std::isfinite(x))
          throw DomainError("point " + std::to_string(j) + " has a non-finite coordinate");
    }
  }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  double length() const { return length_; }
  const std::vector<Point>& points() const { return points_; }

  const Point& at(long j) const {
    const long n = static_cast<long>(points_.size());
    return points_[static_cast<std::size_t>(((j % n) + n) % n)];
  }

  double chord(long i, long j) const { return distance(at(i), at(j)); }

  /// Largest consecutive distance divided by L/N.
  double max_step_ratio() const {
    double worst = 0.0;
    for (int j = 0; j < size(); ++j) worst = std::max(worst, chord(j, j + 1));
    return worst / (length_ / size());
  }

 private:
  int dim_;
  double length_;
  std::vector<Point> points_;
};

/// |y_{j+1} - y_j| <= L/N (1 + rel_tol) for every j.
inline bool is_admissible(const PointConfiguration& cfg, double rel_tol = 1e-9) {
  const double spacing = cfg.length() / cfg.size();
  for (int j = 0; j < cfg.size(); ++j)
    if (cfg.chord(j, j + 1) > spacing * (1.0 + rel_tol)) return false;
  return true;
}

inline void check_chord_index(int n, int m) {
  if (n < 2) throw DomainError("chord index needs N >= 2");
  if (m < 1 || m > n / 2)
    throw DomainError("chord index m=" + std::to_string(m) + " outside [1, " +
                      std::to_string(n / 2) + "]");
}

/// N points on a circle of radius (L/N) / (2 sin(pi/N)) in the plane of the
/// first two coordinates.
inline PointConfiguration regular_polygon(int n, double length, int dim = 2) {
  if (n < 2) throw DomainError("regular_polygon: N must be >= 2");
  if (dim < 2) throw DomainError("regular_polygon: dim must be >= 2");
  if (!(length > 0.0)) throw DomainError("regular_polygon: L must be positive");
  const double radius = (length / n) / (2.0 * std::sin(kPi / n));
  std::vector<Point> pts(n, Point(dim, 0.0));
  for (int k = 0; k < n; ++k) {
    const double phi = kTwoPi * k / n;
    pts[k][0] = radius * std::cos(phi);
    pts[k][1] = radius * std::sin(phi);
  }
  return {dim, length, std::move(pts)};
}

/// Planar rhombus with unit side `side` and interior angle theta at the
/// origin; L = 4 side.
inline PointConfiguration rhomboid(double theta, double side = 1.0) {
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("rhomboid: theta must lie in (0, pi)");
  if (!(side > 0.0)) throw DomainError("rhomboid: side must be positive");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<Point> pts = {
      {0.0, 0.0}, {side, 0.0}, {side * (1.0 + c), side * s}, {side * c, side * s}};
  return {2, 4.0 * side, std::move(pts)};
}

/// Sum over n of |y_{n+m} - y_n|^p.
inline double chord_sum(const PointConfiguration& cfg, int m, double p) {
  check_chord_index(cfg.size(), m);
  if (p == 0.0 || !std::isfinite(p)) throw DomainError("chord_sum: exponent must be nonzero");
  const double floor_len = 1e-12 * cfg.length();
  double s = 0.0;
  for (int n = 0; n < cfg.size(); ++n) {
    const double c = cfg.chord(n + m, n);
    if (p < 0.0 && c < floor_len)
      throw SingularChordError("chord_sum: beads " + std::to_string(n) + " and " +
                               std::to_string((n + m) % cfg.size()) + " coincide");
    s += std::pow(c, p);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Fourier loops
// ---------------------------------------------------------------------------

/// Closed curve Gamma(t) = sum_{n != 0} c_n e^{int}, t in [0, 2pi), with
/// c_{-n} = conj(c_n). Only the positive modes are stored.
class FourierLoop {
 public:
  FourierLoop(int dim, std::vector<CVec> positive_modes, bool unit_normalized = false)
      : dim_(dim), modes_(std::move(positive_modes)), unit_normalized_(unit_normalized) {
    if (dim_ < 1) throw DomainError("FourierLoop: dim must be positive");
    if (modes_.empty()) throw DomainError("FourierLoop: needs at least one mode");
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      if (static_cast<int>(modes_[k].size()) != dim_)
        throw DomainError("FourierLoop: coefficient n=" + std::to_string(k + 1) +
                          " has wrong dimension");
      for (const auto& c : modes_[k])
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
          throw DomainError("FourierLoop: coefficient n=" + std::to_string(k + 1) +
                            " is not finite");
    }
    if (unit_normalized_ && std::abs(norm_sum() - 1.0) > 1e-12)
      throw DomainError("FourierLoop: flagged unit-normalized but sum n^2 |c_n|^2 != 1");
  }

  /// Builds from an explicit map n -> c_n that may contain both signs.
  /// Negative modes must be the conjugates of the positive ones; n = 0 is
  /// rejected.
  static FourierLoop from_coefficients(int dim, const std::map<int, CVec>& coeffs,
                                       bool unit_normalized = false) {
    int top = 0;
    for (const auto& [n, c] : coeffs) {
      if (n == 0) throw DomainError("FourierLoop: coefficient n=0 is not allowed");
      if (static_cast<int>(c.size()) != dim)
        throw DomainError("FourierLoop: coefficient n=" + std::to_string(n) +
                          " has wrong dimension");
      top = std::max(top, std::abs(n));
    }
    std::vector<CVec> modes(top, CVec(dim));
    for (int n = 1; n <= top; ++n) {
      const auto pos = coeffs.find(n);
      const auto neg = coeffs.find(-n);
      if (pos != coeffs.end()) modes[n - 1] = pos->second;
      if (neg != coeffs.end()) {
        if (pos == coeffs.end()) {
          for (int i = 0; i < dim; ++i) modes[n - 1][i] = std::conj(neg->second[i]);
        } else {
          for (int i = 0; i < dim; ++i) {
            const auto want = std::conj(pos->second[i]);
            const double scale = std::max(1.0, std::abs(want));
            if (std::abs(neg->second[i] - want) > 1e-12 * scale)
              throw DomainError("FourierLoop: reality condition c_{-n} = conj(c_n) fails at n=" +
                                std::to_string(n) + ", component " + std::to_string(i));
          }
        }
      }
    }
    return {dim, std::move(modes), unit_normalized};
  }

  int dim() const { return dim_; }
  int max_mode() const { return static_cast<int>(modes_.size()); }
  bool is_unit_normalized() const { return unit_normalized_; }
  const std::vector<CVec>& positive_modes() const { return modes_; }

  CVec coeff(int n) const {
    if (n == 0 || std::abs(n) > max_mode()) return CVec(dim_);
    if (n > 0) return modes_[n - 1];
    CVec c = modes_[-n - 1];
    for (auto& x : c) x = std::conj(x);
    return c;
  }

  Point eval(double t) const { return series(t, false); }
  Point velocity(double t) const { return series(t, true); }
  double speed(double t) const {
    const Point v = velocity(t);
    return norm2(v);
  }

  /// sum_{n != 0} n^2 |c_n|^2
  double norm_sum() const {
    double s = 0.0;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      const double n = static_cast<double>(k + 1);
      for (const auto& c : modes_[k]) s += 2.0 * n * n * std::norm(c);
    }
    return s;
  }

  FourierLoop scaled(double factor) const {
    auto modes = modes_;
    for (auto& c : modes)
      for (auto& x : c) x *= factor;
    return {dim_, std::move(modes)};
  }

  /// Gamma(. + s0): c_n -> c_n e^{i n s0}.
  FourierLoop shifted(double s0) const {
    auto modes = modes_;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto phase = std::polar(1.0, static_cast<double>(k + 1) * s0);
      for (auto& x : modes[k]) x *= phase;
    }
    return {dim_, std::move(modes), unit_normalized_};
  }

  /// Copy rescaled so that sum n^2 |c_n|^2 = 1, flagged as such.
  FourierLoop unit_normalized() const {
    const double s = norm_sum();
    if (!(s > 0.0)) throw DomainError("FourierLoop: zero loop cannot be normalized");
    auto modes = scaled(1.0 / std::sqrt(s)).modes_;
    return {dim_, std::move(modes), true};
  }

 private:
  Point series(double t, bool derivative) const {
    Point out(dim_, 0.0);
    const std::complex<double> step = std::polar(1.0, t);
    std::complex<double> z = step;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      if (k > 0 && k % 64 == 0) z = std::polar(1.0, static_cast<double>(k + 1) * t);
      const double n = static_cast<double>(k + 1);
      for (int i = 0; i < dim_; ++i) {
        const auto term = modes_[k][i] * z;
        // 2 Re(c z) for Gamma, 2 Re(i n c z) = -2 n Im(c z) for Gamma'.
        out[i] += derivative ? -2.0 * n * term.imag() : 2.0 * term.real();
      }
      z *= step;
    }
    return out;
  }

  int dim_;
  std::vector<CVec> modes_;
  bool unit_normalized_ = false;
};

/// Cumulative arc length s(t) of a Fourier loop and its inverse.
class ArcLengthMap {
 public:
  ArcLengthMap(FourierLoop loop, double tol) : loop_(std::move(loop)), tol_(tol) {
    if (!(tol_ > 0.0)) throw DomainError("arc_length_map: tolerance must be positive");
    const int panels = std::max(16, 4 * loop_.max_mode());
    const double h = kTwoPi / panels;

    const int probes = 16 * panels;
    double min_speed = INFINITY;
    double mean_speed = 0.0;
    for (int k = 0; k < probes; ++k) {
      const double v = loop_.speed(kTwoPi * k / probes);
      min_speed = std::min(min_speed, v);
      mean_speed += v / probes;
    }
    if (!(mean_speed > 0.0) || min_speed < 1e-8 * mean_speed)
      throw DegenerateCurveError("arc_length_map: loop speed nearly vanishes (min " +
                                 std::to_string(min_speed) + ", mean " +
                                 std::to_string(mean_speed) + ")");

    breaks_.resize(panels + 1);
    cumulative_.assign(panels + 1, 0.0);
    for (int k = 0; k <= panels; ++k) breaks_[k] = k == panels ? kTwoPi : k * h;
    for (int k = 0; k < panels; ++k)
      cumulative_[k + 1] = cumulative_[k] + piece(breaks_[k], breaks_[k + 1]);
  }

  double total() const { return cumulative_.back(); }
  const FourierLoop& loop() const { return loop_; }
  double tolerance() const { return tol_; }

  /// Arc length from parameter 0 to t, t in [0, 2pi].
  double length_at(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= kTwoPi) return total();
    const auto k = panel_of_param(t);
    return cumulative_[k] + piece(breaks_[k], t);
  }

  /// Parameter t with length_at(t) = s, s in [0, total].
  double param_at(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= total()) return kTwoPi;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t k = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
    double lo = breaks_[k];
    double hi = breaks_[k + 1];
    const double s0 = cumulative_[k];
    const double s1 = cumulative_[k + 1];
    double t = lo + (hi - lo) * (s - s0) / (s1 - s0);
    const double target = s - s0;
    for (int iter = 0; iter < 60; ++iter) {
      const double f = piece(breaks_[k], t) - target;
      if (f > 0.0) hi = t;
      else lo = t;
      double next = t - f / loop_.speed(t);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-15 * kTwoPi || hi - lo <= 1e-15 * kTwoPi) {
        t = next;
        break;
      }
      t = next;
    }
    return t;
  }

 private:
  std::size_t panel_of_param(double t) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(breaks_.begin(), it));
    return std::min(k == 0 ? 0 : k - 1, breaks_.size() - 2);
  }

  double piece(double a, double b) const {
    return integrate([this](double t) { return loop_.speed(t); }, a, b, tol_, 0.0).value;
  }

  FourierLoop loop_;
  double tol_;
  std::vector<double> breaks_;
  std::vector<double> cumulative_;
};

inline ArcLengthMap arc_length_map(const FourierLoop& loop, double tol = 1e-10) {
  return {loop, tol};
}

/// Gamma(k L / N), k = 0..N-1, in arc-length parametrization; L is the
/// loop's own length.
inline PointConfiguration sample_equidistant(const ArcLengthMap& map, int n) {
  if (n < 1) throw DomainError("sample_equidistant: N must be positive");
  const double total = map.total();
  std::vector<Point> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back(map.loop().eval(map.param_at(total * k / n)));
  return {map.loop().dim(), total, std::move(pts)};
}

inline PointConfiguration sample_equidistant(const FourierLoop& loop, int n, double tol = 1e-10) {
  return sample_equidistant(ArcLengthMap(loop, tol), n);
}

/// Random smooth loop with M modes. Mode 1 is a random ellipse with semi-axes
/// 1 and b in [0.6, 1]; mode n >= 2 has magnitude 0.15 n^{-decay} and a
/// random direction in C^dim. The result is rescaled to arc length `length`.
inline FourierLoop random_fourier_loop(std::uint64_t seed, int max_mode, double decay = 3.0,
                                       double length = kTwoPi, int dim = 2) {
  if (max_mode < 1) throw DomainError("random_fourier_loop: M must be >= 1");
  if (dim < 2) throw DomainError("random_fourier_loop: dim must be >= 2");
  if (!(decay > 2.0)) throw DomainError("random_fourier_loop: decay must exceed 2");
  if (!(length > 0.0)) throw DomainError("random_fourier_loop: L must be positive");
  Rng rng(seed);

  std::vector<double> u(dim), v(dim);
  for (auto& x : u) x = gaussian(rng);
  for (auto& x : v) x = gaussian(rng);
  const double nu = norm2(u);
  for (auto& x : u) x /= nu;
  const double proj = dot(u, v);
  for (int i = 0; i < dim; ++i) v[i] -= proj * u[i];
  const double nv = norm2(v);
  for (auto& x : v) x /= nv;
  const double b = uniform(rng, 0.6, 1.0);

  std::vector<CVec> modes(max_mode, CVec(dim));
  for (int i = 0; i < dim; ++i) modes[0][i] = {0.5 * u[i], -0.5 * b * v[i]};
  for (int n = 2; n <= max_mode; ++n) {
    CVec w(dim);
    double wn = 0.0;
    for (auto& x : w) {
      x = {gaussian(rng), gaussian(rng)};
      wn += std::norm(x);
    }
    const double mag = 0.15 * std::pow(static_cast<double>(n), -decay) / std::sqrt(wn);
    for (int i = 0; i < dim; ++i) modes[n - 1][i] = w[i] * mag;
  }
  FourierLoop raw(dim, std::move(modes));
  const double total = ArcLengthMap(raw, 1e-13).total();
  return raw.scaled(length / total);
}

/// Fourier loop (modes 1..K) of the curve reparametrized proportionally to
/// arc length, obtained by sampling at S equidistant arc positions. With a
/// loop of length 2 pi the result is unit-speed up to truncation.
inline FourierLoop reparametrize_by_arc_length(const FourierLoop& loop, int modes,
                                               int samples, double tol = 1e-13) {
  if (modes < 1 || samples <= 2 * modes)
    throw DomainError("reparametrize_by_arc_length: need samples > 2 * modes >= 2");
  const ArcLengthMap map(loop, tol);
  const int dim = loop.dim();
  std::vector<Point> values(samples);
  for (int k = 0; k < samples; ++k)
    values[k] = loop.eval(map.param_at(map.total() * k / samples));
  std::vector<CVec> coeffs(modes, CVec(dim));
  for (int n = 1; n <= modes; ++n) {
    for (int k = 0; k < samples; ++k) {
      // e^{-i n tau_k} with the exponent reduced mod samples for accuracy.
      const long r = (static_cast<long>(n) * k) % samples;
      const auto w = std::polar(1.0 / samples, -kTwoPi * static_cast<double>(r) / samples);
      for (int i = 0; i < dim; ++i) coeffs[n - 1][i] += w * values[k][i];
    }
  }
  return {dim, std::move(coeffs)};
}

/// Random loop of length 2 pi, reparametrized to (numerically) unit speed.
inline FourierLoop random_unit_speed_loop(std::uint64_t seed, int max_mode, double decay = 3.0,
                                          int dim = 2) {
  const auto raw = random_fourier_loop(seed, max_mode, decay, kTwoPi, dim);
  const int modes = std::max(128, 16 * max_mode);
  return reparametrize_by_arc_length(raw, modes, 4 * modes);
}

/// Random closed polygon whose longest step is s L/N with s drawn from
/// [0.6, 0.98]; hence admissible and typically far from regular.
inline PointConfiguration random_admissible(std::uint64_t seed, int n, double length, int dim) {
  if (n < 2) throw DomainError("random_admissible: N must be >= 2");
  if (dim < 2) throw DomainError("random_admissible: dim must be >= 2");
  Rng rng(seed);
  std::vector<Point> steps(n, Point(dim));
  for (auto& s : steps)
    for (auto& x : s) x = gaussian(rng);
  Point mean(dim, 0.0);
  for (const auto& s : steps)
    for (int i = 0; i < dim; ++i) mean[i] += s[i] / n;
  double longest = 0.0;
  for (auto& s : steps) {
    for (int i = 0; i < dim; ++i) s[i] -= mean[i];
    longest = std::max(longest, norm2(s));
  }
  const double scale = uniform(rng, 0.6, 0.98) * (length / n) / longest;
  std::vector<Point> pts(n, Point(dim, 0.0));
  for (int k = 1; k < n; ++k)
    for (int i = 0; i < dim; ++i) pts[k][i] = pts[k - 1][i] + scale * steps[k - 1][i];
  return {dim, length, std::move(pts)};
}

// ---------------------------------------------------------------------------
// Shape comparison
// ---------------------------------------------------------------------------

namespace detail {

/// RMS distance between the rows of `a` and `b` after optimal orthogonal
/// alignment (reflections allowed). Both must already be centred.
inline double procrustes_rms(const std::vector<Point>& a, const std::vector<Point>& b, int dim) {
  const std::size_t n = a.size();
  Matrix m(dim, dim);
  for (std::size_t k = 0; k < n; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) += a[k][i] * b[k][j];

  // m = U S V^T; V and S^2 from m^T m, U = m V / S with completion.
  const auto eig = jacobi_eigen(m.transposed() * m);
  const double smax = std::sqrt(std::max(0.0, eig.values.back()));
  std::vector<std::vector<double>> ucols, vcols;
  for (int k = dim - 1; k >= 0; --k) {
    const double s = std::sqrt(std::max(0.0, eig.values[k]));
    if (s <= 1e-13 * smax || s == 0.0) break;
    auto vk = eig.vectors.column(k);
    auto uk = m * std::span<const double>(vk);
    for (auto& x : uk) x /= s;
    ucols.push_back(std::move(uk));
    vcols.push_back(std::move(vk));
  }
  if (static_cast<int>(ucols.size()) < dim) {
    const Matrix uc = orthogonal_complement(ucols, dim);
    const Matrix vc = orthogonal_complement(vcols, dim);
    for (std::size_t c = 0; c < uc.cols() && ucols.size() < static_cast<std::size_t>(dim); ++c) {
      ucols.push_back(uc.column(c));
      vcols.push_back(vc.column(c));
    }
  }
  Matrix r(dim, dim);
  for (std::size_t c = 0; c < ucols.size(); ++c)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r(i, j) += ucols[c][i] * vcols[c][j];

  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (int j = 0; j < dim; ++j) {
      double x = 0.0;
      for (int i = 0; i < dim; ++i) x += a[k][i] * r(i, j);
      const double d = x - b[k][j];
      sq += d * d;
    }
  return std::sqrt(sq / static_cast<double>(n));
}

inline std::vector<Point> centred(const std::vector<Point>& pts) {
  const int dim = static_cast<int>(pts.front().size());
  Point c(dim, 0.0);
  for (const auto& p : pts)
    for (int i = 0; i < dim; ++i) c[i] += p[i] / static_cast<double>(pts.size());
  auto out = pts;
  for (auto& p : out)
    for (int i = 0; i < dim; ++i) p[i] -= c[i];
  return out;
}

}  // namespace detail

/// Minimal RMS point distance over Euclidean motions (with reflections) and
/// cyclic shifts / reversal of the labels.
inline double shape_distance(const PointConfiguration& a, const PointConfiguration& b) {
  if (a.size() != b.size() || a.dim() != b.dim())
    throw DomainError("shape_distance: configurations differ in N or dim");
  const int n = a.size();
  const auto ca = detail::centred(a.points());
  const auto cb = detail::centred(b.points());
  double best = INFINITY;
  std::vector<Point> relabelled(n);
  for (int reverse = 0; reverse < 2; ++reverse)
    for (int shift = 0; shift < n; ++shift) {
      for (int k = 0; k < n; ++k) {
        const int idx = reverse ? shift - k : shift + k;
        relabelled[k] = cb[static_cast<std::size_t>(((idx % n) + n) % n)];
      }
      best = std::min(best, detail::procrustes_rms(ca, relabelled, a.dim()));
    }
  return best;
}

}  // namespace chordlab
