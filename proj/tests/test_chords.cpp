#include <cmath>

#include <gtest/gtest.h>

#include "chordlab/chords.hpp"
#include "chordlab/geometry.hpp"

using namespace chordlab;

namespace {

std::vector<PointConfiguration> loop_corpus(int count) {
  std::vector<PointConfiguration> out;
  for (int k = 0; k < count; ++k) {
    const int dim = k % 3 == 0 ? 3 : 2;
    const auto loop = random_fourier_loop(500 + k, 1 + k % 8, 3.0, 2.0 + k % 5, dim);
    out.push_back(sample_equidistant(loop, 3 + k % 10));
  }
  return out;
}

}  // namespace

TEST(Nu, Counts) {
  EXPECT_EQ(nu(5, 2), 5);
  EXPECT_EQ(nu(6, 3), 3);
  EXPECT_EQ(nu(4, 1), 4);
  EXPECT_EQ(nu(2, 1), 1);
  EXPECT_THROW(nu(6, 4), DomainError);
  EXPECT_THROW(nu(6, 0), DomainError);
}

TEST(Nu, CountsEveryUnorderedPairOnce) {
  for (int n = 2; n <= 30; ++n) {
    int total = 0;
    for (int m = 1; m <= n / 2; ++m) total += nu(n, m);
    EXPECT_EQ(total, n * (n - 1) / 2);
  }
}

TEST(DpBound, Values) {
  EXPECT_NEAR(dp_bound(4, 4.0, 2, 2.0), 8.0, 1e-13);
  EXPECT_NEAR(dp_bound(4, 4.0, 2, 3.0), 11.313708498984761, 1e-12);
  EXPECT_NEAR(dp_bound(4, 4.0, 2, -1.0), 2.8284271247461903, 1e-13);
  EXPECT_THROW(dp_bound(4, 4.0, 3, 1.0), DomainError);
  EXPECT_THROW(dp_bound(4, 4.0, 1, 0.0), DomainError);
}

TEST(CheckDp, SquareEquality) {
  const auto r = check_dp(regular_polygon(4, 4.0, 2), 2, 2.0);
  EXPECT_NEAR(r.deficit, 0.0, 1e-12);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.n, 4);
  EXPECT_EQ(r.m, 2);
  EXPECT_DOUBLE_EQ(r.length, 4.0);
}

TEST(CheckDp, RhomboidCubicViolation) {
  const auto r = check_dp(rhomboid(kPi / 3, 1.0), 2, 3.0);
  EXPECT_NEAR(r.lhs, 12.392304845413264, 1e-12);
  EXPECT_NEAR(r.rhs, 11.313708498984761, 1e-12);
  EXPECT_NEAR(r.deficit, -1.0785963464285031, 1e-12);
  EXPECT_FALSE(r.holds);
}

TEST(CheckDp, CircleHexagon) {
  const auto loop = FourierLoop::from_coefficients(2, {{1, {{0.5, 0.0}, {0.0, -0.5}}}});
  const auto r = check_dp(sample_equidistant(loop, 6), 2, 2.0);
  EXPECT_NEAR(r.lhs, 18.0, 1e-8);
  EXPECT_NEAR(r.rhs, 19.739208802178716, 1e-10);
  EXPECT_TRUE(r.holds);
}

TEST(CheckDminus, SquareEquality) {
  const auto r = check_dminus(regular_polygon(4, 4.0, 2), 2, 1.0);
  EXPECT_NEAR(r.lhs, 2.8284271247461903, 1e-13);
  EXPECT_NEAR(r.deficit, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.p, -1.0);
}

TEST(CheckDminus, Rhomboid) {
  const auto r = check_dminus(rhomboid(kPi / 3, 1.0), 2, 1.0);
  EXPECT_NEAR(r.lhs, 3.1547005383792515, 1e-13);
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.deficit, 0.3);
}

TEST(CheckDminus, SingularChord) {
  const PointConfiguration pinched(2, 4.0, {{0, 0}, {1, 0}, {0, 0}, {0, 1}});
  EXPECT_THROW(check_dminus(pinched, 2, 1.0), SingularChordError);
}

TEST(InequalityReport, SignConvention) {
  const auto cfg = random_admissible(3, 6, 6.0, 2);
  const auto pos = check_dp(cfg, 2, 1.5);
  EXPECT_DOUBLE_EQ(pos.deficit, pos.rhs - pos.lhs);
  const auto neg = check_dminus(cfg, 2, 1.5);
  EXPECT_DOUBLE_EQ(neg.deficit, neg.lhs - neg.rhs);
  EXPECT_EQ(neg.holds, neg.deficit >= -kDeficitTolerance * std::abs(neg.rhs));
}

TEST(Properties, PolygonEqualityEveryMP) {
  for (int n = 2; n <= 16; ++n) {
    const auto poly = regular_polygon(n, 3.0, 2);
    for (int m = 1; m <= n / 2; ++m)
      for (double p : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const auto r = check_dp(poly, m, p);
        EXPECT_LE(std::abs(r.deficit), 1e-9 * r.rhs);
        EXPECT_TRUE(r.holds);
      }
  }
}

TEST(Properties, DescentAndSchwarzTransfer) {
  int premises = 0;
  for (const auto& cfg : loop_corpus(150)) {
    for (int m = 1; m <= cfg.size() / 2; ++m) {
      for (double p : {2.0, 1.5, 1.0, 0.5}) {
        const auto hi = check_dp(cfg, m, p);
        if (!hi.holds) continue;
        ++premises;
        for (double q : {1.5, 1.0, 0.5})
          if (q < p) EXPECT_TRUE(check_dp(cfg, m, q).holds);
        EXPECT_TRUE(check_dminus(cfg, m, p).holds);
      }
    }
  }
  EXPECT_GT(premises, 500);
}

TEST(Properties, DescentOnAdmissibleConfigurations) {
  // Random admissible polygons need not come from equal-arc marks, so D^2
  // can fail; the implications must still hold whenever D^p does.
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto cfg = random_admissible(seed, 3 + seed % 9, 5.0, 2);
    for (int m = 1; m <= cfg.size() / 2; ++m)
      for (double p : {2.0, 1.5, 1.0}) {
        if (!check_dp(cfg, m, p).holds) continue;
        EXPECT_TRUE(check_dp(cfg, m, 0.5).holds);
        EXPECT_TRUE(check_dminus(cfg, m, p).holds);
      }
  }
}

TEST(Properties, EuclideanInvariantReports) {
  const auto cfg = sample_equidistant(random_fourier_loop(9, 5, 3.0, 3.0, 3), 7);
  std::vector<Point> pts;
  for (const auto& p : cfg.points()) pts.push_back({-p[1] + 1.0, p[0] - 2.0, p[2] + 0.5});
  const PointConfiguration other(3, cfg.length(), pts);
  for (int m = 1; m <= 3; ++m) {
    const auto a = check_dp(cfg, m, 2.0);
    const auto b = check_dp(other, m, 2.0);
    EXPECT_NEAR(a.lhs, b.lhs, 1e-12);
    EXPECT_NEAR(a.deficit, b.deficit, 1e-12);
  }
  EXPECT_NEAR(green_deficit(cfg, 1.0, 3), green_deficit(other, 1.0, 3), 1e-12);
}

TEST(GreenDeficit, PolygonIsZero) {
  for (int dim : {2, 3})
    EXPECT_EQ(green_deficit(regular_polygon(6, 6.0, dim), 1.0, dim), 0.0);
}

TEST(GreenDeficit, Rhomboid) {
  const auto r = rhomboid(kPi / 3, 1.0);
  EXPECT_NEAR(green_deficit(r, 1.0, 2), 0.016181587866300781, 1e-13);
  std::vector<Point> lifted;
  for (const auto& p : r.points()) lifted.push_back({p[0], p[1], 0.0});
  EXPECT_NEAR(green_deficit(PointConfiguration(3, 4.0, lifted), 1.0, 3), 0.010043151524070257,
              1e-13);
}

TEST(GreenDeficit, NonnegativeOnLoopSamples) {
  for (const auto& cfg : loop_corpus(90))
    if (cfg.dim() == 2 || cfg.dim() == 3)
      for (double kappa : {0.1, 1.0, 10.0})
        EXPECT_GE(green_deficit(cfg, kappa, cfg.dim()), -1e-12);
}

TEST(GreenDeficit, DimensionMismatch) {
  EXPECT_THROW(green_deficit(regular_polygon(4, 4.0, 2), 1.0, 3), DomainError);
}
