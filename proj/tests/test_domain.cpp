#include <gtest/gtest.h>

#include <random>

#include "hilbertia/domain.hpp"

using namespace hilbertia;

namespace {

ConvexDomain random_polygon(std::mt19937_64& rng, int n, double r = 1.0) {
  std::uniform_real_distribution<double> U(-r, r);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back({U(rng), U(rng)});
  return ConvexDomain::polygon(convex_hull(pts));
}

}  // namespace

TEST(Domain, DiskMembership) {
  const ConvexDomain d = ConvexDomain::disk();
  EXPECT_EQ(d.contains({0.5, 0.5}), Membership::Interior);
  EXPECT_EQ(d.contains({1.0, 0.0}), Membership::Boundary);
  EXPECT_EQ(d.contains({1.1, 0.0}), Membership::Exterior);
  EXPECT_THROW(d.require_interior({2.0, 0.0}), Error);
}

TEST(Domain, SquareChord) {
  const ConvexDomain s = ConvexDomain::square();
  const ChordParams t = s.chord_params({0.5, 0.0}, {1.0, 0.0});
  EXPECT_NEAR(t.t_plus, 0.5, 1e-15);
  EXPECT_NEAR(t.t_minus, -1.5, 1e-15);
}

TEST(Domain, EllipseChordMatchesQuadraticRoots) {
  // x^2/4 + y^2 = 1 along the line (0.3, 0.2) + t (1, 1).
  const ConvexDomain e = ConvexDomain::ellipse(diag3(0.25, 1.0, -1.0));
  const ChordParams t = e.chord_params({0.3, 0.2}, {1.0, 1.0});
  const double a = 1.25, b = 2 * (0.3 / 4 + 0.2), c = 0.09 / 4 + 0.04 - 1;
  const double disc = std::sqrt(b * b - 4 * a * c);
  EXPECT_NEAR(t.t_plus, (-b + disc) / (2 * a), 1e-14);
  EXPECT_NEAR(t.t_minus, (-b - disc) / (2 * a), 1e-14);
}

TEST(Domain, ConvexHullDropsInteriorAndCollinearPoints) {
  const auto h = convex_hull({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}});
  EXPECT_EQ(h.size(), 4u);
}

TEST(Domain, TooFewPoints) {
  try {
    ConvexDomain::polygon({{0, 0}, {1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(Domain, LargePolygonIndexAgreesWithLinearScan) {
  std::vector<Vec2> circle;
  for (int k = 0; k < 500; ++k) circle.push_back({std::cos(2 * kPi * k / 500), std::sin(2 * kPi * k / 500)});
  const ConvexDomain big = ConvexDomain::polygon(circle);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  for (int k = 0; k < 2000; ++k) {
    const Vec2 x{U(rng), U(rng)};
    double m = 1e300;
    for (const auto& e : big.edges()) m = std::fmin(m, e.offset - dot(e.normal, x));
    EXPECT_EQ(big.interior(x), m > kBoundaryBand) << x[0] << "," << x[1];
  }
}

TEST(Domain, PolarDualOfSquareIsDiamond) {
  const ConvexDomain d = polar_dual(ConvexDomain::square());
  EXPECT_EQ(d.vertices().size(), 4u);
  for (const auto& v : d.vertices()) EXPECT_NEAR(std::fabs(v[0]) + std::fabs(v[1]), 1.0, 1e-14);
}

TEST(Domain, PolarDualOfDiskIsDisk) {
  const ConvexDomain d = polar_dual(ConvexDomain::disk({0, 0}, 2.0));
  EXPECT_EQ(d.contains({0.5, 0.0}), Membership::Boundary);
}

TEST(Domain, PolarDualNeedsInteriorOrigin) {
  try {
    polar_dual(ConvexDomain::disk({3, 0}, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OriginNotInterior);
  }
}

TEST(Domain, PolarDualReversesInclusion) {
  std::mt19937_64 rng(8);
  int tested = 0;
  for (int k = 0; k < 100; ++k) {
    const ConvexDomain outer = random_polygon(rng, 10);
    if (!outer.interior({0, 0})) continue;
    std::vector<Vec2> pts;
    std::uniform_real_distribution<double> w(0.2, 0.9);
    for (const auto& v : outer.vertices()) pts.push_back(w(rng) * v);
    const ConvexDomain inner = ConvexDomain::polygon(convex_hull(pts));
    if (!inner.interior({0, 0})) continue;
    ASSERT_TRUE(contained_in(inner, outer));
    EXPECT_TRUE(contained_in(polar_dual(outer), polar_dual(inner), 1e-9));
    ++tested;
  }
  EXPECT_GT(tested, 50);
}

TEST(Domain, HausdorffOfNestedSquares) {
  EXPECT_NEAR(hausdorff(ConvexDomain::square(1.0), ConvexDomain::square(0.5)), std::sqrt(0.5), 1e-12);
}

TEST(Domain, ConicFitRecoversEllipse) {
  std::vector<Vec2> pts;
  for (int k = 0; k < 40; ++k) pts.push_back({2 * std::cos(0.1 * k), std::sin(0.1 * k) + 0.3});
  const ConicFit f = fit_conic(pts);
  EXPECT_LT(f.max_residual, 1e-10);
}
