#include <gtest/gtest.h>

#include <random>

#include "hilbertia/metric.hpp"

using namespace hilbertia;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST(Distance, SquareHandCrossRatio) {
  EXPECT_NEAR(distance(ConvexDomain::square(), {0, 0}, {0.5, 0}), 0.5 * std::log(3.0), 1e-14);
}

TEST(Distance, SamePointIsZero) {
  EXPECT_EQ(distance(ConvexDomain::square(), {0.2, 0.1}, {0.2, 0.1}), 0.0);
}

TEST(Distance, EllipseClosedFormMatchesChords) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  const ConvexDomain e = ConvexDomain::ellipse({{{0.5, 0.1, 0}, {0.1, 1.0, 0.1}, {0, 0.1, -0.8}}});
  for (int k = 0; k < 100; ++k) {
    const Vec2 x{U(rng), U(rng)}, y{U(rng), U(rng)};
    if (!e.interior(x) || !e.interior(y)) continue;
    EXPECT_NEAR(distance(e, x, y), distance_by_chords(e, x, y), 1e-10);
  }
}

TEST(Distance, ChordsAreGeodesics) {
  const ConvexDomain s = ConvexDomain::polygon({{-1, -1}, {2, -0.5}, {1.5, 1.5}, {-0.5, 1}});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 100; ++k) {
    const Vec2 x{U(rng) - 0.5, U(rng) - 0.5}, y{U(rng), U(rng)};
    const Vec2 z = x + U(rng) * (y - x);
    EXPECT_NEAR(distance(s, x, z) + distance(s, z, y), distance(s, x, y), 1e-10);
  }
}

TEST(Distance, NotInteriorIsReported) {
  EXPECT_EQ(code_of([] { distance(ConvexDomain::disk(), {2, 0}, {0, 0}); }), ErrorCode::NotInterior);
}

TEST(FinslerNorm, DiskExamples) {
  EXPECT_NEAR(finsler_norm(ConvexDomain::disk(), {0, 0}, {1, 0}), 1.0, 1e-15);
  EXPECT_NEAR(finsler_norm(ConvexDomain::disk(), {0.5, 0}, {1, 0}), 4.0 / 3.0, 1e-15);
}

TEST(FinslerNorm, HomogeneousAndZeroOnlyAtZero) {
  const ConvexDomain s = ConvexDomain::square();
  const Vec2 x{0.3, -0.2}, v{0.7, 0.4};
  EXPECT_NEAR(finsler_norm(s, x, 2.0 * v), 2.0 * finsler_norm(s, x, v), 1e-14);
  EXPECT_EQ(finsler_norm(s, x, {0, 0}), 0.0);
  EXPECT_GT(finsler_norm(s, x, {1e-9, 0}), 0.0);
}

TEST(FinslerNorm, IsTheDerivativeOfDistance) {
  const ConvexDomain s = ConvexDomain::polygon({{-1, -1}, {2, -0.5}, {1.5, 1.5}, {-0.5, 1}});
  const Vec2 x{0.2, 0.1}, v{0.6, -0.8};
  const double t = 1e-5;
  EXPECT_NEAR(distance(s, x, x + t * v) / t / finsler_norm(s, x, v), 1.0, 1e-4);
}

// Simpson's rule over 10^4 nodes of the norm along a chord.
TEST(FinslerNorm, IntegratesToDistance) {
  const ConvexDomain s = ConvexDomain::polygon({{-1, -1}, {2, -0.5}, {1.5, 1.5}, {-0.5, 1}});
  const Vec2 x{-0.5, -0.4}, y{1.2, 0.9}, v = y - x;
  const int n = 10000;
  double sum = 0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    sum += w * finsler_norm(s, x + (static_cast<double>(i) / n) * v, v);
  }
  EXPECT_NEAR(sum / (3.0 * n), distance(s, x, y), 1e-6);
}

TEST(UnitBall, DiskCenterHasUnitMeasure) {
  EXPECT_NEAR(unit_ball_volume(ConvexDomain::disk(), {0, 0}), 1.0, 1e-12);
}

TEST(UnitBall, TrapezoidAgreesWithKleinDensityInside) {
  const ConvexDomain d = ConvexDomain::disk();
  for (double r : {0.2, 0.5, 0.8}) EXPECT_NEAR(1.0 / unit_ball_volume(d, {r, 0}), busemann_density(d, {r, 0}), 1e-6);
}

TEST(UnitBall, InvariantUnderRotation) {
  const std::vector<Vec2> p = {{-1, -1}, {2, -0.5}, {1.5, 1.5}, {-0.5, 1}};
  const double c = std::cos(0.7), s = std::sin(0.7);
  std::vector<Vec2> q;
  for (const auto& v : p) q.push_back({c * v[0] - s * v[1], s * v[0] + c * v[1]});
  const Vec2 x{0.3, 0.2}, rx{c * x[0] - s * x[1], s * x[0] + c * x[1]};
  EXPECT_NEAR(unit_ball_volume(ConvexDomain::polygon(p), x), unit_ball_volume(ConvexDomain::polygon(q), rx), 1e-12);
}

// Closed form for the Klein density: (1 - r^2)^{-3/2}.
TEST(BusemannVolume, KleinDensity) {
  const ConvexDomain d = ConvexDomain::disk();
  for (double r : {0.0, 0.3, 0.9}) EXPECT_NEAR(busemann_density(d, {0, r}), std::pow(1 - r * r, -1.5), 1e-12);
}

TEST(BusemannVolume, SmallDiskAtCenter) {
  const double eps = 0.05;
  const VolumeEstimate v = busemann_volume(ConvexDomain::disk(), ConvexDomain::disk({0, 0}, eps));
  // Hausdorff normalization: the small disk has area pi eps^2 to leading order.
  const double want = 2 * kPi * (1 / std::sqrt(1 - eps * eps) - 1);
  EXPECT_NEAR(v.value, want, 3 * v.std_error + 1e-9);
  EXPECT_NEAR(v.value, kPi * eps * eps, 1e-4);
}

TEST(BusemannVolume, DeterministicForSeed) {
  VolumeOptions o;
  o.samples = 500;
  const auto a = busemann_volume(ConvexDomain::square(), rectangle({-0.5, -0.5}, {0.5, 0.5}), o);
  const auto b = busemann_volume(ConvexDomain::square(), rectangle({-0.5, -0.5}, {0.5, 0.5}), o);
  EXPECT_EQ(a.value, b.value);
}

TEST(BusemannVolume, EmptyIntersection) {
  EXPECT_EQ(code_of([] { busemann_volume(ConvexDomain::disk(), rectangle({2, 2}, {3, 3})); }),
            ErrorCode::EmptyIntersection);
}

TEST(Busemann, DiskRayExample) {
  const ConvexDomain d = ConvexDomain::disk();
  for (double r : {0.1, 0.5, 0.8}) EXPECT_NEAR(busemann_function(d, {0, 0}, {r, 0}, {1, 0}), -std::atanh(r), 1e-12);
}

// The closed form is the oracle for the truncated limit.
TEST(Busemann, TruncatedMatchesKleinClosedForm) {
  const ConvexDomain d = ConvexDomain::disk();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.5, 0.5), A(0, 2 * kPi);
  for (int k = 0; k < 50; ++k) {
    const Vec2 o{U(rng), U(rng)}, y{U(rng), U(rng)};
    const double a = A(rng);
    const Vec2 xi{std::cos(a), std::sin(a)};
    EXPECT_NEAR(busemann_truncated(d, o, y, xi), busemann_ellipse(d.conic(), o, y, xi), 2e-4);
  }
}

TEST(Busemann, CocycleOnPolygon) {
  const ConvexDomain s = ConvexDomain::polygon({{-1, -1}, {2, -0.5}, {1.5, 1.5}, {-0.5, 1}});
  const Vec2 xi = 0.5 * (Vec2{2, -0.5} + Vec2{1.5, 1.5});
  const Vec2 x{0, 0}, y{0.4, 0.3}, z{-0.3, 0.5};
  EXPECT_NEAR(busemann_function(s, x, y, xi) + busemann_function(s, y, z, xi), busemann_function(s, x, z, xi), 2e-4);
}

TEST(Busemann, AdditiveAlongTheRay) {
  const ConvexDomain s = ConvexDomain::polygon({{-1, -1}, {2, -0.5}, {1.5, 1.5}, {-0.5, 1}});
  const Vec2 o{0, 0}, xi = 0.5 * (Vec2{2, -0.5} + Vec2{1.5, 1.5});
  const Vec2 y1 = 0.2 * xi, y2 = 0.6 * xi;
  EXPECT_NEAR(busemann_function(s, o, y1, xi) - distance(s, y1, y2), busemann_function(s, o, y2, xi), 1e-6);
}

TEST(Busemann, SamePointIsZero) {
  EXPECT_EQ(busemann_function(ConvexDomain::square(), {0.1, 0.1}, {0.1, 0.1}, {1, 0}), 0.0);
}

TEST(Busemann, NotOnBoundary) {
  EXPECT_EQ(code_of([] { busemann_function(ConvexDomain::disk(), {0, 0}, {0.1, 0}, {0.5, 0}); }),
            ErrorCode::NotOnBoundary);
}
