#pragma once
//
// Inequality checks for a single loop and the seeded property suite behind
// the `check` and `verify` commands.
//

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "chordlab/chords.hpp"
#include "chordlab/electro.hpp"
#include "chordlab/errors.hpp"
#include "chordlab/fourier_op.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/loop_spec.hpp"
#include "chordlab/parallel.hpp"
#include "chordlab/rng.hpp"
#include "chordlab/serialize.hpp"
#include "chordlab/spectral.hpp"

namespace chordlab {

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckRun {
  std::vector<InequalityReport> reports;
  int exit_code = 0;  // 1 iff some |p| <= 2 report fails
};

/// Reports for every (m, p): p > 0 selects D^p, p < 0 selects D^{-|p|}.
/// Without `all_m` the m values in `ms` are used.
inline CheckRun run_check(const PointConfiguration& cfg, const std::vector<double>& p_grid,
                          bool all_m, const std::vector<int>& ms = {1}) {
  if (p_grid.empty()) throw DomainError("run_check: empty p grid");
  std::vector<int> indices;
  if (all_m) {
    for (int m = 1; m <= cfg.size() / 2; ++m) indices.push_back(m);
  } else {
    indices = ms;
  }
  CheckRun run;
  for (int m : indices)
    for (double p : p_grid) {
      if (p == 0.0 || !std::isfinite(p)) throw DomainError("run_check: p must be nonzero");
      auto r = p > 0.0 ? check_dp(cfg, m, p) : check_dminus(cfg, m, -p);
      if (!r.holds && std::abs(p) <= 2.0) run.exit_code = 1;
      run.reports.push_back(r);
    }
  return run;
}

inline CheckRun run_check(const LoopSpec& spec, const std::vector<double>& p_grid, bool all_m,
                          const std::vector<int>& ms = {1},
                          std::optional<int> marks = std::nullopt) {
  return run_check(spec_configuration(spec, marks), p_grid, all_m, ms);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CategoryStats {
  int run = 0;
  int passed = 0;
  int failed = 0;
  /// Smallest normalized margin seen (>= 0 on the passing side); +inf when no
  /// check in the category reports a margin.
  double worst_margin = std::numeric_limits<double>::infinity();
};

struct SuiteFailure {
  std::string category;
  std::string check;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct SuiteSummary {
  std::uint64_t seed = 0;
  int trials = 0;
  std::map<std::string, CategoryStats> categories;
  std::vector<SuiteFailure> failures;
  double wall_seconds = 0.0;

  int failed() const {
    int f = 0;
    for (const auto& [name, c] : categories) f += c.failed;
    return f;
  }
};

namespace detail {

struct CheckRecord {
  std::string category;
  std::string check;
  bool passed = false;
  double margin = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

class TrialLog {
 public:
  /// Records a check; `margin` is normalized so that >= 0 is the passing side.
  void margin(const std::string& cat, const std::string& name, double value, double tol = 0.0,
              std::string detail = {}) {
    records_.push_back({cat, name, value >= -tol, value, std::move(detail)});
  }

  void flag(const std::string& cat, const std::string& name, bool ok, std::string detail = {}) {
    records_.push_back({cat, name, ok, std::numeric_limits<double>::quiet_NaN(), std::move(detail)});
  }

  /// Runs `body`; an exception becomes a failed record.
  void guard(const std::string& cat, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      flag(cat, name, false, e.what());
    }
  }

  const std::vector<CheckRecord>& records() const { return records_; }

 private:
  std::vector<CheckRecord> records_;
};

/// Random rigid motion (rotation from Gram-Schmidt of a gaussian matrix,
/// gaussian translation).
inline PointConfiguration random_motion(const PointConfiguration& cfg, Rng& rng) {
  const int dim = cfg.dim();
  std::vector<std::vector<double>> rows;
  while (static_cast<int>(rows.size()) < dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = gaussian(rng);
    for (const auto& r : rows) {
      const double c = dot(r, v);
      for (int i = 0; i < dim; ++i) v[i] -= c * r[i];
    }
    const double nv = norm2(v);
    if (nv < 1e-6) continue;
    for (auto& x : v) x /= nv;
    rows.push_back(std::move(v));
  }
  Point shift(dim);
  for (auto& x : shift) x = gaussian(rng);
  std::vector<Point> pts;
  for (const auto& p : cfg.points()) {
    Point q(dim);
    for (int i = 0; i < dim; ++i) q[i] = dot(rows[i], p) + shift[i];
    pts.push_back(std::move(q));
  }
  return {dim, cfg.length(), std::move(pts)};
}

inline double relative(double deficit, double scale) {
  return deficit / std::max(std::abs(scale), 1e-300);
}

inline void chords_trial(TrialLog& log, std::uint64_t seed, int trial) {
  Rng rng(seed);
  const int dim = trial % 3 == 2 ? 3 : 2;
  const int modes = 1 + static_cast<int>(rng() % 8);
  const int n = 3 + static_cast<int>(rng() % 10);
  const auto loop = random_fourier_loop(splitmix64(seed), modes, 3.0, kTwoPi, dim);
  const auto cfg = sample_equidistant(loop, n);
  const std::string cat = "chords";
  log.flag(cat, "sample_admissible", is_admissible(cfg));
  const auto moved = random_motion(cfg, rng);
  for (int m = 1; m <= n / 2; ++m) {
    const auto d2 = check_dp(cfg, m, 2.0);
    log.margin(cat, "d2_holds", relative(d2.deficit, d2.rhs), kDeficitTolerance);
    for (double p : {2.0, 1.5, 1.0, 0.5}) {
      const auto hi = check_dp(cfg, m, p);
      for (double q : {1.5, 1.0, 0.5})
        if (q < p) {
          const auto lo = check_dp(cfg, m, q);
          log.flag(cat, "descent", !hi.holds || lo.holds,
                   "m=" + std::to_string(m) + " p=" + format_double(p) + " q=" + format_double(q));
        }
      const auto neg = check_dminus(cfg, m, p);
      log.flag(cat, "schwarz_transfer", !hi.holds || neg.holds);
    }
    const auto d1 = check_dp(moved, m, 1.0);
    const auto d1_ref = check_dp(cfg, m, 1.0);
    log.margin(cat, "euclidean_invariance",
               -std::abs(d1.lhs - d1_ref.lhs) / std::max(1.0, d1_ref.lhs), 1e-12);
  }
  const auto poly = regular_polygon(n, kTwoPi, dim);
  for (int m = 1; m <= n / 2; ++m) {
    const auto eq = check_dp(poly, m, 2.0);
    log.margin(cat, "polygon_equality", -std::abs(relative(eq.deficit, eq.rhs)), 1e-9);
  }
  if (dim <= 3)
    for (double kappa : {0.1, 1.0, 10.0}) {
      const double gd = green_deficit(cfg, kappa, dim);
      const double scale = std::abs(green_value(poly.chord(0, 1), kappa, dim));
      log.margin(cat, "green_deficit", relative(gd, scale), 1e-12);
    }
}

inline void spectral_trial(TrialLog& log, std::uint64_t seed, int trial) {
  Rng rng(seed);
  const std::string cat = "spectral";
  const int dim = trial % 2 == 0 ? 2 : 3;
  const int n = 3 + static_cast<int>(rng() % 6);
  const double length = n;
  const double alpha = 0.0;
  const auto cfg = trial % 4 < 2
                       ? random_admissible(splitmix64(seed), n, length, dim)
                       : sample_equidistant(random_fourier_loop(splitmix64(seed), 4, 3.0,
                                                                length, dim),
                                            n);
  const auto poly = regular_polygon(n, length, dim);
  log.guard(cat, "ground_state", [&] {
    const auto gs = ground_state(cfg, alpha, dim);
    const auto gp = ground_state(poly, alpha, dim);
    if (!gs || !gp) {
      log.flag(cat, "bound_state_exists", false);
      return;
    }
    const double e_scale = std::abs(gp->energy);
    log.margin(cat, "polygon_maximizes", (gp->energy - gs->energy) / e_scale, 1e-10);
    if (shape_distance(cfg, poly) > 1e-6)
      log.flag(cat, "polygon_strict", gs->energy < gp->energy);
    const auto moved = ground_state(random_motion(cfg, rng), alpha, dim);
    log.margin(cat, "euclidean_invariance", -std::abs(moved->energy - gs->energy), 1e-10);
    const auto q0 = min_eig(build_q(cfg, alpha, gs->kappa1, dim)).value;
    log.margin(cat, "root_residual", -std::abs(q0), 1e-10);
  });
  log.guard(cat, "rayleigh", [&] {
    double prev = -std::numeric_limits<double>::infinity();
    for (double kappa : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0}) {
      const double lo = min_eig(build_q(cfg, alpha, kappa, dim)).value;
      const double up = rayleigh_upper_bound(cfg, alpha, kappa, dim);
      log.margin(cat, "rayleigh_upper_bound", up - lo, 1e-12);
      log.flag(cat, "monotone_in_kappa", lo > prev);
      prev = lo;
      if (green_deficit(cfg, kappa, dim) > 0.0)
        log.flag(cat, "green_to_rayleigh",
                 up < rayleigh_upper_bound(poly, alpha, kappa, dim) + 1e-14);
    }
  });
}

inline void electro_trial(TrialLog& log, std::uint64_t seed, int trial) {
  Rng rng(seed);
  const std::string cat = "electro";
  const int n = 3 + trial % 6;
  const int dim = trial % 2 == 0 ? 2 : 3;
  const double length = n;
  const auto cfg = random_admissible(splitmix64(seed), n, length, dim);
  const auto poly = regular_polygon(n, length, dim);
  log.guard(cat, "coulomb_forms", [&] {
    const double pair = coulomb_energy(cfg, 1.0);  // throws if the forms disagree
    const double regrouped = coulomb_energy_regrouped(cfg, 1.0);
    log.margin(cat, "coulomb_forms", -std::abs(pair - regrouped) / pair, 1e-10);
    log.margin(cat, "polygon_minimizes_coulomb",
               (pair - coulomb_energy(poly, 1.0)) / pair, 1e-12);
  });
  for (int m = 1; m <= n / 2; ++m) {
    const auto d1 = check_dp(cfg, m, 1.0);
    log.flag(cat, "d1_to_dminus1", !d1.holds || check_dminus(cfg, m, 1.0).holds);
  }
  log.guard(cat, "chebyshev", [&] {
    const int big_n = 5 + (trial * 37) % 196;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& c : chebyshev_check(big_n)) worst = std::min(worst, c.margin);
    if (std::isfinite(worst)) log.margin(cat, "chebyshev_margin", worst);
  });
  log.guard(cat, "projected_hessian", [&] {
    const int hn = 4 + trial % 7;
    for (int m = 2; m <= hn / 2; ++m) {
      const auto eig = projected_hessian(hn, m);
      if (!eig.empty()) log.margin(cat, "hessian_negative", -eig.back() - 1e-8);
    }
  });
  OptimizerOptions opts;
  opts.restarts = 4;
  opts.seed = seed;
  log.guard(cat, "minimize_coulomb", [&] {
    const auto res = minimize_coulomb(n, length, dim, 1.0, opts);
    const double e0 = coulomb_energy(poly, 1.0);
    log.flag(cat, "coulomb_converged", res.kkt.converged);
    log.margin(cat, "coulomb_polygon_energy", -std::abs(res.kkt.objective - e0) / e0, 1e-6);
    log.margin(cat, "coulomb_polygon_shape", -shape_distance(res.configuration, poly), 1e-4);
  });
  log.guard(cat, "maximize_fm", [&] {
    const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n / 2));
    const auto res = maximize_fm(n, length, 2, m, opts);
    const double lam = lagrange_closed_form(n, m);
    double worst = 0.0;
    for (double l : res.kkt.multipliers) worst = std::max(worst, std::abs(l - lam) / lam);
    log.flag(cat, "fm_converged", res.kkt.converged);
    log.margin(cat, "fm_multipliers", -worst, 1e-6);
  });
}

inline void fourier_trial(TrialLog& log, std::uint64_t seed, int trial) {
  Rng rng(seed);
  const std::string cat = "fourier_op";
  const int n = 2 + static_cast<int>(rng() % 63);
  const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n / 2));
  const double rhs = bound_rhs(n, m);
  log.margin(cat, "block_norm_equals_bound", -std::abs(operator_norm(n, m) - rhs) / rhs, 1e-12);

  // Random unit-normalized sequence in C^2, with mass concentrated on one
  // residue class half of the time.
  ModeSequence d;
  const int support = 1 + static_cast<int>(rng() % 24);
  const long base = 1 + static_cast<long>(rng() % static_cast<unsigned>(n));
  for (int k = 0; k < support; ++k) {
    long j = trial % 2 == 0 ? base + n * static_cast<long>(rng() % 40)
                            : 1 + static_cast<long>(rng() % 400);
    if (rng() % 2) j = -j;
    CVec v(2);
    for (auto& x : v) x = {gaussian(rng), gaussian(rng)};
    d[j] = v;
  }
  const double norm = std::sqrt(sequence_norm2(d));
  for (auto& [j, v] : d)
    for (auto& x : v) x /= norm;
  log.margin(cat, "quadratic_form_bound", rhs - quadratic_form(d, n, m), 1e-12);

  const int sn_n = 2 + trial % 63;
  const int sn_k = 1 + static_cast<int>(rng() % static_cast<unsigned>(sn_n - 1));
  log.margin(cat, "s_n_series",
             -std::abs(s_n(sn_n, sn_k, SeriesMode::series) - s_n(sn_n, sn_k, SeriesMode::closed)),
             1e-10);

  const int j = 1 + static_cast<int>(rng() % 50);
  const double x = uniform(rng, 1e-6, 0.5 * kPi);
  const auto si = sin_ineq(j, x);
  log.margin(cat, "sin_inequality", si.rhs - si.lhs, 4e-16 * si.rhs);

  log.guard(cat, "chordsum_fourier", [&] {
    const auto loop = random_unit_speed_loop(splitmix64(seed), 1 + trial % 8, 3.0, 2);
    const int marks = 3 + trial % 10;
    const int mm = 1 + trial % (marks / 2);
    const double fourier = chordsum_fourier(loop, marks, mm);
    std::vector<Point> pts;
    for (int k = 0; k < marks; ++k) pts.push_back(loop.eval(kTwoPi * k / marks));
    const double geometric = chord_sum(PointConfiguration(2, kTwoPi, std::move(pts)), mm, 2.0);
    log.margin(cat, "chordsum_identity", -std::abs(fourier - geometric), 1e-8);
  });
}

}  // namespace detail

/// Runs the property suite: trial k uses seed child_seed(seed, k) and covers
/// every category. Deterministic for fixed (seed, trials) apart from
/// wall_seconds.
inline SuiteSummary run_verify(std::uint64_t seed, int trials) {
  if (trials < 1) throw DomainError("verify: trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  auto logs = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t k) {
    const int trial = static_cast<int>(k);
    const std::uint64_t s = child_seed(seed, k);
    detail::TrialLog log;
    log.guard("chords", "trial", [&] { detail::chords_trial(log, child_seed(s, 0), trial); });
    log.guard("spectral", "trial", [&] { detail::spectral_trial(log, child_seed(s, 1), trial); });
    log.guard("electro", "trial", [&] { detail::electro_trial(log, child_seed(s, 2), trial); });
    log.guard("fourier_op", "trial", [&] { detail::fourier_trial(log, child_seed(s, 3), trial); });
    return log;
  });
  SuiteSummary out;
  out.seed = seed;
  out.trials = trials;
  for (const char* c : {"chords", "spectral", "electro", "fourier_op"}) out.categories[c];
  for (int k = 0; k < trials; ++k)
    for (const auto& r : logs[k].records()) {
      auto& c = out.categories[r.category];
      ++c.run;
      if (r.passed) {
        ++c.passed;
      } else {
        ++c.failed;
        out.failures.push_back({r.category, r.check, k, child_seed(seed, static_cast<std::uint64_t>(k)),
                                r.detail});
      }
      if (!std::isnan(r.margin)) c.worst_margin = std::min(c.worst_margin, r.margin);
    }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline Json to_json(const SuiteSummary& s) {
  Json cats = Json::object();
  for (const auto& [name, c] : s.categories)
    cats[name] = Json{{"run", c.run},
                      {"passed", c.passed},
                      {"failed", c.failed},
                      {"worst_margin", std::isfinite(c.worst_margin) ? Json(c.worst_margin)
                                                                     : Json(nullptr)}};
  Json fails = Json::array();
  for (const auto& f : s.failures)
    fails.push_back(Json{{"category", f.category},
                         {"check", f.check},
                         {"trial", f.trial},
                         {"seed", f.seed},
                         {"detail", f.detail}});
  return Json{{"seed", s.seed},
              {"trials", s.trials},
              {"categories", cats},
              {"failures", fails},
              {"wall_seconds", s.wall_seconds}};
}

inline Table to_table(const SuiteSummary& s) {
  Table t{{"category", "run", "passed", "failed", "worst_margin"}, {}};
  for (const auto& [name, c] : s.categories)
    t.rows.push_back({name, std::to_string(c.run), std::to_string(c.passed),
                      std::to_string(c.failed), format_double(c.worst_margin)});
  return t;
}

}  // namespace chordlab
