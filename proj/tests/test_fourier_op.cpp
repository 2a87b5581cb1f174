#include <cmath>

#include <gtest/gtest.h>

#include "chordlab/fourier_op.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/rng.hpp"

using namespace chordlab;

namespace {

// Chord sum of |Gamma(t_{k+m}) - Gamma(t_k)|^2 at t_k = s0 + 2 pi k / N.
double direct_chordsum(const FourierLoop& loop, int n, int m, double s0 = 0.0) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto a = loop.eval(s0 + kTwoPi * k / n);
    const auto b = loop.eval(s0 + kTwoPi * (k + m) / n);
    s += distance(a, b) * distance(a, b);
  }
  return s;
}

FourierLoop unit_circle() {
  return FourierLoop::from_coefficients(2, {{1, {{0.5, 0.0}, {0.0, -0.5}}}});
}

}  // namespace

TEST(Entry, Values) {
  EXPECT_NEAR(entry(5, 2, 1, 1), std::pow(std::sin(2 * kPi / 5), 2), 1e-15);
  EXPECT_NEAR(entry(5, 2, 1, 6), std::sin(2 * kPi / 5) * std::abs(std::sin(12 * kPi / 5)) / 6,
              1e-15);
  EXPECT_EQ(entry(5, 2, 1, 2), 0.0);
  EXPECT_NEAR(entry(5, 2, -4, 1), entry(5, 2, 4, -1), 1e-15);
  EXPECT_GT(entry(5, 2, -4, 1), 0.0);
  EXPECT_NEAR(entry(4, 2, 2, 2), 0.0, 1e-15);
}

TEST(Entry, Symmetric) {
  for (long j = -20; j <= 20; ++j)
    for (long k = -20; k <= 20; ++k)
      if (j != 0 && k != 0) EXPECT_EQ(entry(7, 3, j, k), entry(7, 3, k, j));
}

TEST(Entry, Errors) {
  EXPECT_THROW(entry(5, 2, 0, 1), DomainError);
  EXPECT_THROW(entry(5, 2, 1, 0), DomainError);
  EXPECT_THROW(entry(1, 1, 1, 1), DomainError);
  EXPECT_THROW(entry(5, 0, 1, 1), DomainError);
}

TEST(SN, ClosedFormValues) {
  EXPECT_NEAR(s_n(3, 1), 1.4621636149762013, 1e-15);
  EXPECT_NEAR(s_n(2, 1), kPi * kPi / 4, 1e-15);
  EXPECT_NEAR(s_n(4, 2), kPi * kPi / 16, 1e-15);
}

TEST(SN, SeriesAgreesWithClosedForm) {
  for (int n : {2, 3, 5, 8, 13, 64})
    for (int r = 1; r < n; ++r)
      EXPECT_NEAR(s_n(n, r, SeriesMode::series) / s_n(n, r), 1.0, 1e-12) << n << " " << r;
}

TEST(SN, Symmetry) {
  for (int n = 2; n <= 40; ++n)
    for (int r = 1; r < n; ++r) EXPECT_NEAR(s_n(n, r), s_n(n, n - r), 1e-13 * s_n(n, r));
}

TEST(SN, Errors) {
  EXPECT_THROW(s_n(1, 1), DomainError);
  EXPECT_THROW(s_n(5, 0), DomainError);
  EXPECT_THROW(s_n(5, 5), DomainError);
}

TEST(BoundRhs, Values) {
  EXPECT_NEAR(bound_rhs(4, 2), kPi * kPi / 8, 1e-15);
  EXPECT_NEAR(bound_rhs(5, 2), 1.0335583911026996, 1e-14);
  EXPECT_NEAR(bound_rhs(6, 1), std::pow(kPi / 6 / std::sin(kPi / 6), 2) * 0.25, 1e-15);
  EXPECT_THROW(bound_rhs(5, 3), DomainError);
}

TEST(OperatorNorm, BlockEqualsBound) {
  for (int n = 2; n <= 64; ++n)
    for (int m = 1; m <= n / 2; ++m)
      EXPECT_NEAR(operator_norm(n, m) / bound_rhs(n, m), 1.0, 1e-13) << n << " " << m;
}

TEST(OperatorNorm, DenseApproachesBlockFromBelow) {
  const double block = operator_norm(5, 2);
  const double k1 = operator_norm(5, 2, NormMode::dense, 100);
  const double k2 = operator_norm(5, 2, NormMode::dense, 1000);
  const double k3 = operator_norm(5, 2, NormMode::dense, 10000);
  EXPECT_LT(k1, k2);
  EXPECT_LT(k2, k3);
  EXPECT_LE(k3, block * (1.0 + 1e-12));
  EXPECT_NEAR(k3, block, 1e-4);
}

TEST(OperatorNorm, DenseSmallCases) {
  for (int n : {3, 4, 7})
    for (int m = 1; m <= n / 2; ++m) {
      const double dense = operator_norm(n, m, NormMode::dense, 5000);
      EXPECT_LE(dense, operator_norm(n, m) * (1.0 + 1e-12));
      EXPECT_GT(dense, operator_norm(n, m) * (1.0 - 1e-3));
    }
  EXPECT_THROW(operator_norm(5, 2, NormMode::dense, 3), DomainError);
}

TEST(QuadraticForm, SingleMode) {
  ModeSequence d;
  d[1] = CVec{{1.0, 0.0}};
  EXPECT_NEAR(quadratic_form(d, 5, 2), entry(5, 2, 1, 1), 1e-15);
  d[6] = CVec{{0.0, 2.0}};
  // Purely imaginary partner: the cross terms vanish.
  EXPECT_NEAR(quadratic_form(d, 5, 2), entry(5, 2, 1, 1) + 4.0 * entry(5, 2, 6, 6), 1e-15);
  d[6] = CVec{{2.0, 0.0}};
  EXPECT_NEAR(quadratic_form(d, 5, 2),
              entry(5, 2, 1, 1) + 4.0 * entry(5, 2, 6, 6) + 4.0 * entry(5, 2, 1, 6), 1e-15);
  EXPECT_NEAR(sequence_norm2(d), 5.0, 1e-15);
}

TEST(QuadraticForm, BoundedByNorm) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 9;
    const int m = 1 + trial % (n / 2);
    ModeSequence d;
    for (long j = -40; j <= 40; ++j) {
      if (j == 0 || uniform(rng, 0.0, 1.0) < 0.5) continue;
      d[j] = CVec{{gaussian(rng), gaussian(rng)}, {gaussian(rng), gaussian(rng)}};
    }
    EXPECT_LE(quadratic_form(d, n, m), bound_rhs(n, m) * sequence_norm2(d) * (1.0 + 1e-12));
    EXPECT_GE(quadratic_form(d, n, m), -1e-12);
  }
}

TEST(QuadraticForm, Errors) {
  ModeSequence d;
  d[0] = CVec{1.0};
  EXPECT_THROW(quadratic_form(d, 5, 2), DomainError);
  ModeSequence mixed;
  mixed[1] = CVec{1.0};
  mixed[6] = CVec{1.0, 1.0};
  EXPECT_THROW(quadratic_form(mixed, 5, 2), DomainError);
}

TEST(Chordsum, Circle) {
  for (int n = 3; n <= 12; ++n)
    for (int m = 1; m <= n / 2; ++m) {
      const double want = 4.0 * n * std::pow(std::sin(kPi * m / n), 2);
      EXPECT_NEAR(chordsum_fourier(unit_circle(), n, m), want, 1e-12);
      EXPECT_NEAR(direct_chordsum(unit_circle(), n, m), want, 1e-12);
    }
}

TEST(Chordsum, RandomUnitSpeedLoop) {
  const auto loop = random_unit_speed_loop(7, 8);
  for (int n = 2; n <= 12; ++n)
    for (int m = 1; m <= n / 2; ++m) {
      const double fourier = chordsum_fourier(loop, n, m);
      EXPECT_NEAR(fourier, direct_chordsum(loop, n, m), 1e-10 * fourier);
      EXPECT_LE(fourier, 4.0 * n * bound_rhs(n, m) * (1.0 + 1e-8));
    }
}

TEST(Chordsum, PhaseShift) {
  const auto loop = random_unit_speed_loop(11, 5, 3.0, 3);
  for (double s0 : {0.3, 1.7, 4.0})
    for (int n : {4, 7})
      EXPECT_NEAR(chordsum_fourier(loop.shifted(s0), n, 2), direct_chordsum(loop, n, 2, s0),
                  1e-10);
}

TEST(Chordsum, RequiresUnitSpeed) {
  EXPECT_THROW(chordsum_fourier(unit_circle().scaled(1.1), 5, 1), ParametrizationError);
  EXPECT_THROW(chordsum_fourier(random_fourier_loop(3, 4, 3.0, kTwoPi), 5, 1),
               ParametrizationError);
  EXPECT_THROW(require_unit_speed(unit_circle().scaled(0.5)), ParametrizationError);
  EXPECT_NO_THROW(require_unit_speed(unit_circle()));
}

TEST(SinInequality, Grid) {
  for (int j = 1; j <= 50; ++j)
    for (int k = 1; k <= 200; ++k) {
      const auto r = sin_ineq(j, 0.5 * kPi * k / 200.0);
      EXPECT_TRUE(r.holds) << j << " " << k;
      EXPECT_LE(r.lhs, r.rhs * (1.0 + 1e-15));
    }
  EXPECT_NEAR(sin_ineq(1, 0.4).lhs, sin_ineq(1, 0.4).rhs, 0.0);
}

TEST(SinInequality, Errors) {
  EXPECT_THROW(sin_ineq(0, 0.5), DomainError);
  EXPECT_THROW(sin_ineq(2, 0.0), DomainError);
  EXPECT_THROW(sin_ineq(2, 2.0), DomainError);
}
