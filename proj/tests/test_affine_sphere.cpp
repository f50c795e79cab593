#include <gtest/gtest.h>

#include "hilbertia/hilbertia.hpp"

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

// Exact affine sphere over the ellipse |L^-1 x| < 1 for det L = 1: the disk
// solution -sqrt(1 - |y|^2) pulled back by y = L^-1 x.
Jet ellipse_jet(const Mat3& L, const Vec2& x) {
  const Mat3 Li = ProjMap(L).inv();  // det L = 1, so no rescaling
  const Vec2 y{Li[0][0] * x[0] + Li[0][1] * x[1], Li[1][0] * x[0] + Li[1][1] * x[1]};
  const double s = std::sqrt(1 - dot(y, y)), s3 = s * s * s;
  // Disk jet in y: grad y / s, Hessian I / s + y y^T / s^3.
  const double gy[2] = {y[0] / s, y[1] / s};
  const double hy[2][2] = {{1 / s + y[0] * y[0] / s3, y[0] * y[1] / s3}, {y[0] * y[1] / s3, 1 / s + y[1] * y[1] / s3}};
  Jet j;
  j.u = -s;
  for (int a = 0; a < 2; ++a) j.grad[a] = Li[0][a] * gy[0] + Li[1][a] * gy[1];
  double hx[2][2] = {};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) hx[a][b] += Li[c][a] * hy[c][d] * Li[d][b];
  j.hess = {hx[0][0], hx[0][1], hx[1][1]};
  return j;
}

double quad(const std::array<double, 3>& h, const Vec2& v) {
  return h[0] * v[0] * v[0] + 2 * h[1] * v[0] * v[1] + h[2] * v[1] * v[1];
}

const GridSolution& disk_solution() {
  static const GridSolution s = solve_monge_ampere(ConvexDomain::disk(), 65);
  return s;
}

}  // namespace

TEST(MongeAmpere, DiskSolutionIsExact) {
  const GridSolution& s = disk_solution();
  double err = 0;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      if (s.tag(i, j) != NodeTag::Interior) continue;
      const Vec2 p = s.node(i, j);
      err = std::fmax(err, std::fabs(s.value(i, j) + std::sqrt(1 - dot(p, p))));
      EXPECT_LT(s.value(i, j), 0.0);
    }
  EXPECT_LT(err, 1e-10);
  EXPECT_LT(s.residual, 1e-6);
}

TEST(MongeAmpere, SolutionIsConvexOnASquare) {
  const GridSolution s = solve_monge_ampere(ConvexDomain::square(), 33);
  for (int j = 1; j + 1 < s.ny; ++j)
    for (int i = 1; i + 1 < s.nx; ++i) {
      if (s.tag(i - 1, j) != NodeTag::Interior || s.tag(i + 1, j) != NodeTag::Interior ||
          s.tag(i, j - 1) != NodeTag::Interior || s.tag(i, j + 1) != NodeTag::Interior)
        continue;
      EXPECT_GE(s.value(i - 1, j) + s.value(i + 1, j) - 2 * s.value(i, j), -1e-12);
      EXPECT_GE(s.value(i, j - 1) + s.value(i, j + 1) - 2 * s.value(i, j), -1e-12);
      EXPECT_LT(s.value(i, j), 0.0);
    }
}

TEST(MongeAmpere, ResolutionTooSmall) {
  EXPECT_EQ(code_of([] { solve_monge_ampere(ConvexDomain::disk(), 17); }), ErrorCode::InvalidInput);
}

TEST(Blaschke, IdentityAtTheDiskCenter) {
  const BlaschkeData b = blaschke_metric(disk_solution(), {0, 0});
  EXPECT_NEAR(b.h_metric[0], 1.0, 1e-3);
  EXPECT_NEAR(b.h_metric[1], 0.0, 1e-3);
  EXPECT_NEAR(b.h_metric[2], 1.0, 1e-3);
}

TEST(Blaschke, IndependentOfTransversalScale) {
  const Jet j = ellipse_jet(identity3(), {0.3, -0.2});
  const auto a = blaschke_from_jet(j, {0.3, -0.2}), b = blaschke_from_jet(j, {0.3, -0.2}, 2.0);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
}

// An area-preserving linear map carries the disk sphere to the ellipse one and
// must carry the metric along: h_L(Lx)(Lv, Lv) = h(x)(v, v).
TEST(Blaschke, EquivariantUnderSL2) {
  const Mat3 L{{{2.0, 0.5, 0}, {0.0, 0.5, 0}, {0, 0, 1}}};
  const Vec2 x{0.3, -0.2};
  const Vec2 Lx{L[0][0] * x[0] + L[0][1] * x[1], L[1][0] * x[0] + L[1][1] * x[1]};
  const auto h = blaschke_from_jet(ellipse_jet(identity3(), x), x);
  const auto hl = blaschke_from_jet(ellipse_jet(L, Lx), Lx);
  for (const Vec2 v : {Vec2{1, 0}, Vec2{0, 1}, Vec2{0.6, 0.8}}) {
    const Vec2 Lv{L[0][0] * v[0] + L[0][1] * v[1], L[1][0] * v[0] + L[1][1] * v[1]};
    EXPECT_NEAR(quad(hl, Lv), quad(h, v), 1e-6);
  }
}

// The hyperbolic affine sphere centred at the origin has xi = F up to sign.
TEST(Blaschke, NormalIsThePositionVectorOnTheDisk) {
  const GridSolution& s = disk_solution();
  for (const Vec2 p : {Vec2{0, 0}, Vec2{0.3, 0.1}, Vec2{-0.2, 0.5}}) {
    const BlaschkeData b = blaschke_metric(s, p);
    const double phi = 1.0 / std::sqrt(1 - dot(p, p));
    const Vec3 F = phi * Vec3{1.0, p[0], p[1]};
    const double rel = std::fmin(norm(b.xi - F), norm(b.xi + F)) / norm(F);
    EXPECT_LT(rel, 1e-2) << p[0] << "," << p[1];
  }
}

TEST(Blaschke, TooCloseToBoundary) {
  EXPECT_EQ(code_of([] { blaschke_metric(disk_solution(), {0.99, 0}); }), ErrorCode::TooCloseToBoundary);
}

TEST(Comparison, DiskRatiosAreOne) {
  const ComparisonReport r = compare_hilbert_affine(ConvexDomain::disk(), disk_solution(), 50);
  EXPECT_TRUE(r.bounded);
  EXPECT_NEAR(r.ratio_min, 1.0, 1e-2);
  EXPECT_NEAR(r.ratio_max, 1.0, 1e-2);
}
