#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "chordlab/geometry.hpp"
#include "chordlab/quadrature.hpp"

using namespace chordlab;

namespace {

// Periodic trapezoid rule for the ellipse perimeter; spectrally accurate for
// smooth periodic integrands.
double ellipse_perimeter_oracle(double a, double b) {
  const int n = 4096;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * k / n;
    s += std::hypot(a * std::sin(t), b * std::cos(t));
  }
  return s * kTwoPi / n;
}

FourierLoop circle() {
  return FourierLoop::from_coefficients(2, {{1, {{0.5, 0.0}, {0.0, -0.5}}}});
}

FourierLoop ellipse(double a, double b) {
  return FourierLoop::from_coefficients(2, {{1, {{a / 2, 0.0}, {0.0, -b / 2}}}});
}

PointConfiguration moved(const PointConfiguration& cfg, double angle, double dx, double dy) {
  std::vector<Point> pts;
  for (const auto& p : cfg.points())
    pts.push_back({std::cos(angle) * p[0] - std::sin(angle) * p[1] + dx,
                   std::sin(angle) * p[0] + std::cos(angle) * p[1] + dy});
  return {2, cfg.length(), pts};
}

}  // namespace

TEST(RegularPolygon, SquareDiagonal) {
  const auto sq = regular_polygon(4, 4.0, 2);
  EXPECT_NEAR(sq.chord(1, 3), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(sq.chord(0, 1), 1.0, 1e-14);
}

TEST(RegularPolygon, HexagonSecondChord) {
  const auto hex = regular_polygon(6, 6.0, 2);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(hex.chord(j, j + 2), 1.7320508075688772, 1e-14);
}

TEST(RegularPolygon, TriangleInSpace) {
  const auto tri = regular_polygon(3, 3.0, 3);
  EXPECT_EQ(tri.dim(), 3);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(tri.chord(j, j + 1), 1.0, 1e-14);
    EXPECT_EQ(tri.at(j)[2], 0.0);
  }
}

TEST(RegularPolygon, ChordFormulaAllM) {
  for (int n = 2; n <= 40; ++n) {
    const double length = 1.0 + 0.1 * n;
    const auto poly = regular_polygon(n, length, 2);
    for (int m = 1; m <= n / 2; ++m) {
      const double want = (length / n) * std::sin(kPi * m / n) / std::sin(kPi / n);
      for (int j = 0; j < n; ++j) EXPECT_NEAR(poly.chord(j, j + m), want, 1e-12);
    }
  }
}

TEST(PointConfiguration, CyclicIndexing) {
  const auto sq = regular_polygon(4, 4.0, 2);
  EXPECT_EQ(sq.at(5), sq.at(1));
  EXPECT_EQ(sq.at(-1), sq.at(3));
}

TEST(PointConfiguration, RejectsBadInput) {
  EXPECT_THROW(PointConfiguration(2, 1.0, {{0.0, 0.0}, {1.0}}), DomainError);
  EXPECT_THROW(PointConfiguration(2, -1.0, {{0.0, 0.0}, {1.0, 0.0}}), DomainError);
  EXPECT_THROW(PointConfiguration(2, 1.0, {{0.0, NAN}, {1.0, 0.0}}), DomainError);
}

TEST(PointConfiguration, Admissibility) {
  EXPECT_TRUE(is_admissible(regular_polygon(7, 3.0, 2)));
  EXPECT_FALSE(is_admissible(PointConfiguration(2, 2.0, {{0.0, 0.0}, {1.5, 0.0}})));
}

TEST(Rhomboid, SquareCase) {
  const auto r = rhomboid(kPi / 2, 1.0);
  EXPECT_NEAR(r.chord(0, 2), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r.chord(1, 3), std::sqrt(2.0), 1e-14);
  EXPECT_DOUBLE_EQ(r.length(), 4.0);
}

TEST(Rhomboid, SixtyDegrees) {
  const auto r = rhomboid(kPi / 3, 1.0);
  EXPECT_NEAR(r.chord(0, 2), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(r.chord(1, 3), 1.0, 1e-14);
}

TEST(Rhomboid, CubicChordSumExceedsBound) {
  const auto r = rhomboid(kPi / 3, 1.0);
  EXPECT_NEAR(chord_sum(r, 2, 3.0), 12.392304845413264, 1e-12);
}

TEST(Rhomboid, AngleOutsideRange) {
  EXPECT_THROW(rhomboid(0.0, 1.0), DomainError);
  EXPECT_THROW(rhomboid(kPi, 1.0), DomainError);
}

TEST(ChordSum, SquareExamples) {
  const auto sq = regular_polygon(4, 4.0, 2);
  EXPECT_NEAR(chord_sum(sq, 2, 2.0), 8.0, 1e-13);
  EXPECT_NEAR(chord_sum(sq, 1, -1.0), 4.0, 1e-13);
}

TEST(ChordSum, Hexagon) {
  EXPECT_NEAR(chord_sum(regular_polygon(6, 6.0, 2), 2, 1.0), 6 * std::sqrt(3.0), 1e-13);
}

TEST(ChordSum, IndexAndSingularity) {
  const auto sq = regular_polygon(4, 4.0, 2);
  EXPECT_THROW(chord_sum(sq, 0, 1.0), DomainError);
  EXPECT_THROW(chord_sum(sq, 3, 1.0), DomainError);
  const PointConfiguration pinched(2, 4.0, {{0, 0}, {1, 0}, {0, 0}, {0, 1}});
  EXPECT_THROW(chord_sum(pinched, 2, -1.0), SingularChordError);
  EXPECT_NO_THROW(chord_sum(pinched, 2, 1.0));
}

TEST(ChordSum, EuclideanInvariance) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cfg = random_admissible(seed, 7, 5.0, 2);
    const auto other = moved(cfg, 0.1 * seed, -3.0 + seed, 2.5);
    for (int m = 1; m <= 3; ++m)
      for (double p : {-1.0, 0.5, 1.0, 2.0})
        EXPECT_NEAR(chord_sum(other, m, p), chord_sum(cfg, m, p),
                    1e-12 * std::max(1.0, chord_sum(cfg, m, p)));
  }
}

TEST(FourierLoop, RealityConditionEnforced) {
  std::map<int, CVec> bad{{1, {{0.5, 0.1}, {0.0, -0.5}}}, {-1, {{0.5, 0.1}, {0.0, 0.5}}}};
  EXPECT_THROW(FourierLoop::from_coefficients(2, bad), DomainError);
  std::map<int, CVec> good{{1, {{0.5, 0.1}, {0.0, -0.5}}}, {-1, {{0.5, -0.1}, {0.0, 0.5}}}};
  EXPECT_NO_THROW(FourierLoop::from_coefficients(2, good));
}

TEST(FourierLoop, ZeroModeRejected) {
  EXPECT_THROW(FourierLoop::from_coefficients(2, {{0, {{1.0, 0.0}, {0.0, 0.0}}}}), DomainError);
}

TEST(FourierLoop, UnitNormalizationFlag) {
  // Circle of radius 1: 2 * 1^2 * |c_1|^2 = 1.
  EXPECT_NO_THROW(FourierLoop(2, {{{0.5, 0.0}, {0.0, -0.5}}}, true));
  EXPECT_THROW(FourierLoop(2, {{{1.0, 0.0}, {0.0, -1.0}}}, true), DomainError);
}

TEST(FourierLoop, EvaluatesCircle) {
  const auto c = circle();
  for (double t : {0.0, 0.7, 2.0, 5.5}) {
    const auto p = c.eval(t);
    EXPECT_NEAR(p[0], std::cos(t), 1e-15);
    EXPECT_NEAR(p[1], std::sin(t), 1e-15);
    EXPECT_NEAR(c.speed(t), 1.0, 1e-15);
  }
}

TEST(ArcLength, CircleIsIdentity) {
  const auto map = arc_length_map(circle(), 1e-10);
  EXPECT_NEAR(map.total(), kTwoPi, 1e-12);
  for (double s : {0.0, 0.5, 1.7, 3.0, 6.0}) EXPECT_NEAR(map.param_at(s), s, 1e-10);
}

TEST(ArcLength, EllipsePerimeter) {
  const double oracle = ellipse_perimeter_oracle(1.0, 0.5);
  EXPECT_NEAR(oracle, 4.844224110273838, 1e-12);
  EXPECT_NEAR(arc_length_map(ellipse(1.0, 0.5), 1e-10).total(), oracle, 1e-9 * oracle);
}

TEST(ArcLength, ScalingDoublesLength) {
  const auto loop = random_fourier_loop(3, 5);
  const double a = arc_length_map(loop).total();
  const double b = arc_length_map(loop.scaled(2.0)).total();
  EXPECT_NEAR(b, 2.0 * a, 1e-12 * b);
}

TEST(ArcLength, InverseRoundTrip) {
  const auto loop = random_fourier_loop(11, 8);
  const auto map = arc_length_map(loop, 1e-10);
  for (int k = 0; k <= 50; ++k) {
    const double s = map.total() * k / 50.0;
    EXPECT_NEAR(map.length_at(map.param_at(s)), s, 1e-9);
  }
  EXPECT_EQ(map.param_at(0.0), 0.0);
}

TEST(ArcLength, DegenerateCurve) {
  // A segment traversed back and forth stops at both ends.
  const auto segment = FourierLoop::from_coefficients(2, {{1, {{0.5, 0.0}, {0.0, 0.0}}}});
  EXPECT_THROW(arc_length_map(segment), DegenerateCurveError);
}

TEST(SampleEquidistant, CircleSquare) {
  const auto cfg = sample_equidistant(circle(), 4);
  EXPECT_NEAR(cfg.length(), kTwoPi, 1e-12);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(cfg.chord(j, j + 1), std::sqrt(2.0), 1e-9);
}

TEST(SampleEquidistant, CircleHexagon) {
  const auto cfg = sample_equidistant(circle(), 6);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(cfg.chord(j, j + 1), 1.0, 1e-9);
}

TEST(SampleEquidistant, RandomLoopAdmissible) {
  EXPECT_TRUE(is_admissible(sample_equidistant(random_fourier_loop(7, 8), 5)));
  for (std::uint64_t seed = 100; seed < 140; ++seed)
    for (int n : {2, 3, 7, 12, 40})
      EXPECT_TRUE(is_admissible(sample_equidistant(random_fourier_loop(seed, 6, 3.0, 4.0, 3), n)));
}

TEST(RandomLoop, Deterministic) {
  const auto a = random_fourier_loop(42, 6, 3.5);
  const auto b = random_fourier_loop(42, 6, 3.5);
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < 2; ++i) {
      EXPECT_EQ(a.coeff(n)[i].real(), b.coeff(n)[i].real());
      EXPECT_EQ(a.coeff(n)[i].imag(), b.coeff(n)[i].imag());
    }
}

TEST(RandomLoop, SingleModeIsEllipse) {
  const auto loop = random_fourier_loop(5, 1);
  EXPECT_EQ(loop.max_mode(), 1);
}

TEST(RandomLoop, RescaledLength) {
  const auto loop = random_fourier_loop(7, 8, 3.0, kTwoPi);
  EXPECT_NEAR(arc_length_map(loop, 1e-12).total(), kTwoPi, 1e-9);
}

TEST(RandomLoop, RejectsBadArguments) {
  EXPECT_THROW(random_fourier_loop(1, 0), DomainError);
  EXPECT_THROW(random_fourier_loop(1, 3, 2.0), DomainError);
}

TEST(UnitSpeedLoop, SpeedIsOne) {
  const auto loop = random_unit_speed_loop(7, 8);
  for (int k = 0; k < 200; ++k) EXPECT_NEAR(loop.speed(kTwoPi * k / 200.0), 1.0, 1e-9);
}

TEST(ShapeDistance, RigidMotionsAndRelabelings) {
  const auto sq = regular_polygon(4, 4.0, 2);
  EXPECT_NEAR(shape_distance(sq, moved(sq, 0.3, 5.0, -2.0)), 0.0, 1e-12);
  std::vector<Point> shifted;
  for (int k = 0; k < 4; ++k) shifted.push_back(sq.at(k + 1));
  EXPECT_NEAR(shape_distance(sq, PointConfiguration(2, 4.0, shifted)), 0.0, 1e-12);
  std::vector<Point> reflected;
  for (const auto& p : sq.points()) reflected.push_back({p[0], -p[1]});
  EXPECT_NEAR(shape_distance(sq, PointConfiguration(2, 4.0, reflected)), 0.0, 1e-12);
}

TEST(ShapeDistance, DistinguishesShapes) {
  EXPECT_GT(shape_distance(regular_polygon(4, 4.0, 2), rhomboid(kPi / 3, 1.0)), 0.1);
  EXPECT_NEAR(shape_distance(rhomboid(kPi / 2, 1.0), regular_polygon(4, 4.0, 2)), 0.0, 1e-12);
}

TEST(ShapeDistance, MismatchedShapes) {
  EXPECT_THROW(shape_distance(regular_polygon(4, 4.0, 2), regular_polygon(5, 4.0, 2)),
               DomainError);
  EXPECT_THROW(shape_distance(regular_polygon(4, 4.0, 2), regular_polygon(4, 4.0, 3)),
               DomainError);
}

TEST(Quadrature, SmoothIntegral) {
  const auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-13);
}
