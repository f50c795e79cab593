#pragma once

// Hilbert distance, Finsler norm, unit-ball volume, Busemann volume and
// Busemann functions on a ConvexDomain. Distances carry the factor 1/2, so on a
// disk the metric is the curvature -1 hyperbolic metric.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hilbertia/domain.hpp"
#include "hilbertia/error.hpp"
#include "hilbertia/linalg.hpp"

namespace hilbertia {

/// Hilbert distance from the cross ratio of the chord through x and y. Works for
/// every domain kind; the chord parameter on each side is measured from the
/// nearer point to keep precision close to the boundary.
inline double distance_by_chords(const ConvexDomain& d, const Vec2& x, const Vec2& y) {
  d.require_interior(x, "x");
  d.require_interior(y, "y");
  if (x == y) return 0.0;
  const Vec2 v = y - x;
  const double behind_x = -d.chord_params(x, v).t_minus;
  const double ahead_y = d.chord_params(y, v).t_plus;
  return 0.5 * (std::log1p(1.0 / behind_x) + std::log1p(1.0 / ahead_y));
}

/// Distance between homogeneous points of an ellipse domain:
/// sinh^2 d = -(X x Y)^T adj(Q) (X x Y) / (Q(X) Q(Y)). Stable for points
/// arbitrarily close to the boundary as long as they are given homogeneously.
inline double ellipse_distance_h(const Mat3& q, const Vec3& x, const Vec3& y) {
  const Vec3 c = cross(x, y);
  const double num = -dot(c, adjugate(q) * c);
  const double den = dot(x, q * x) * dot(y, q * y);
  if (!(den > 0.0)) throw Error(ErrorCode::NotInterior, "homogeneous point not inside the conic");
  return std::asinh(std::sqrt(std::fmax(num, 0.0) / den));
}

inline double distance(const ConvexDomain& d, const Vec2& x, const Vec2& y) {
  if (!d.is_ellipse()) return distance_by_chords(d, x, y);
  d.require_interior(x, "x");
  d.require_interior(y, "y");
  if (x == y) return 0.0;
  return ellipse_distance_h(d.conic(), lift(x), lift(y));
}

/// ||v||_x = (1/2)(1/|x - p-| + 1/|x - p+|) |v|.
inline double finsler_norm(const ConvexDomain& d, const Vec2& x, const Vec2& v) {
  d.require_interior(x);
  if (v[0] == 0.0 && v[1] == 0.0) return 0.0;
  const ChordParams t = d.chord_params(x, v);
  return 0.5 * (1.0 / t.t_plus - 1.0 / t.t_minus);
}

inline constexpr std::size_t kExactBallVertices = 64;

/// Lebesgue measure of the Finsler unit ball at x, normalized so the Euclidean
/// unit disk has measure 1: (1/pi) * integral over theta of 1 / (2 ||u_theta||^2).
/// Ellipses and large polygons (orbit hulls) use the periodic trapezoid rule
/// with `directions` nodes. For small polygons the ball is itself a polygon with
/// vertices in the vertex and antivertex directions, so its area is exact.
inline double unit_ball_volume(const ConvexDomain& d, const Vec2& x, int directions = 512) {
  d.require_interior(x);
  if (d.is_ellipse() || d.vertices().size() > kExactBallVertices) {
    if (directions < 8) throw Error(ErrorCode::InvalidInput, "need at least 8 directions");
    double sum = 0.0;
    for (int i = 0; i < directions; ++i) {
      const double th = 2.0 * kPi * i / directions;
      const ChordParams t = d.chord_params(x, {std::cos(th), std::sin(th)});
      const double nrm = 0.5 * (1.0 / t.t_plus - 1.0 / t.t_minus);
      sum += 1.0 / (2.0 * nrm * nrm);
    }
    return sum * (2.0 * kPi / directions) / kPi;
  }
  std::vector<double> angles;
  angles.reserve(2 * d.vertices().size());
  for (const auto& v : d.vertices()) {
    const Vec2 u = v - x;
    const double a = std::atan2(u[1], u[0]);
    angles.push_back(a);
    angles.push_back(a > 0.0 ? a - kPi : a + kPi);
  }
  std::sort(angles.begin(), angles.end());
  double area = 0.0;
  auto ball_point = [&](double th) {
    const Vec2 u{std::cos(th), std::sin(th)};
    const ChordParams t = d.chord_params(x, u);
    const double nrm = 0.5 * (1.0 / t.t_plus - 1.0 / t.t_minus);
    return (1.0 / nrm) * u;
  };
  std::vector<Vec2> pts;
  pts.reserve(angles.size());
  for (double a : angles) pts.push_back(ball_point(a));
  for (std::size_t i = 0; i < pts.size(); ++i) area += 0.5 * cross(pts[i], pts[(i + 1) % pts.size()]);
  return area / kPi;
}

/// Riemannian metric of an ellipse domain at x (the Hilbert metric of an
/// ellipse is the Klein model): g = (b b^T - q A) / q^2 with q = Q(X), b the
/// top of Q X and A the top-left block of Q. Independent of the scale of Q.
inline std::array<double, 3> ellipse_metric(const Mat3& q, const Vec2& x) {
  const Vec3 X = lift(x);
  const Vec3 qx = q * X;
  const double qq = dot(X, qx);
  const double i2 = 1.0 / (qq * qq);
  return {(qx[0] * qx[0] - qq * q[0][0]) * i2, (qx[0] * qx[1] - qq * q[0][1]) * i2,
          (qx[1] * qx[1] - qq * q[1][1]) * i2};
}

/// Density of the Busemann volume against Lebesgue measure dA, normalized so
/// the density at the center of the unit disk is 1 (Hausdorff normalization;
/// the disk then carries the hyperbolic area). Ellipses use the closed form
/// 1/V = sqrt(det g), which stays accurate where the unit ball is too
/// eccentric for the trapezoid rule.
inline double busemann_density(const ConvexDomain& d, const Vec2& x, int directions = 512) {
  if (d.is_ellipse()) {
    d.require_interior(x);
    const auto g = ellipse_metric(d.conic(), x);
    return std::sqrt(g[0] * g[2] - g[1] * g[1]);
  }
  return 1.0 / unit_ball_volume(d, x, directions);
}

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

struct VolumeOptions {
  std::int64_t samples = 20000;
  std::uint64_t seed = 0xC0FFEE;
  int directions = 128;
};

namespace detail {

struct Triangle {
  Vec2 apex, b, c;
};

/// Stratified estimate of the integral of `f` over the triangle, using the
/// map (tau, w) -> apex + tau^2 ((b - apex) + w (c - b)). Its Jacobian vanishes
/// like tau^3 at the apex, which cancels the blow-up of the Busemann density at
/// ideal vertices lying on the boundary.
template <class F>
void integrate_triangle(const Triangle& tri, int grid, std::mt19937_64& rng, const F& f, double& value,
                        double& variance, std::int64_t& count) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double area2 = std::fabs(cross(tri.b - tri.apex, tri.c - tri.b));
  const double cell = 1.0 / (static_cast<double>(grid) * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double g[2];
      for (double& gk : g) {
        const double tau = (i + unif(rng)) / grid;
        const double w = (j + unif(rng)) / grid;
        const double u = tau * tau;
        const Vec2 x = tri.apex + u * ((tri.b - tri.apex) + w * (tri.c - tri.b));
        gk = f(x) * 2.0 * area2 * tau * tau * tau;
      }
      value += cell * 0.5 * (g[0] + g[1]);
      variance += cell * cell * 0.25 * (g[0] - g[1]) * (g[0] - g[1]);
      count += 2;
    }
}

/// Stratified polar estimate over an ellipse region.
template <class F>
void integrate_ellipse(const ConvexDomain& region, int grid, std::mt19937_64& rng, const F& f, double& value,
                       double& variance, std::int64_t& count) {
  const Mat3& q = region.conic();
  const Vec2 c = region.centroid();
  const double k = -ConvexDomain::conic_value(q, c);
  // (x - c)^T A (x - c) <= k; A = L L^T, x = c + sqrt(k) L^{-T} z with |z| <= 1.
  const double a = q[0][0], b = q[0][1], cc = q[1][1];
  const double l11 = std::sqrt(a), l21 = b / l11, l22 = std::sqrt(cc - l21 * l21);
  const double s = std::sqrt(k);
  const double jac = k / (l11 * l22);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double cell = 1.0 / (static_cast<double>(grid) * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double g[2];
      for (double& gk : g) {
        const double rho = std::sqrt((i + unif(rng)) / grid);
        const double phi = 2.0 * kPi * (j + unif(rng)) / grid;
        const double z1 = rho * std::cos(phi), z2 = rho * std::sin(phi);
        // Solve L^T y = z.
        const double y2 = z2 / l22;
        const double y1 = (z1 - l21 * y2) / l11;
        gk = f(Vec2{c[0] + s * y1, c[1] + s * y2}) * kPi * jac;
      }
      value += cell * 0.5 * (g[0] + g[1]);
      variance += cell * cell * 0.25 * (g[0] - g[1]) * (g[0] - g[1]);
      count += 2;
    }
}

}  // namespace detail

/// Monte Carlo estimate of the Busemann volume of region ∩ domain. Sampling is
/// stratified over a vertex-fan parametrization of the region, so ideal
/// vertices on the domain boundary are integrated with bounded weights.
inline VolumeEstimate busemann_volume(const ConvexDomain& d, const ConvexDomain& region,
                                      const VolumeOptions& opt = {}) {
  std::mt19937_64 rng(opt.seed);
  std::int64_t nonzero = 0;
  auto f = [&](const Vec2& x) {
    if (!d.interior(x)) return 0.0;
    ++nonzero;
    return busemann_density(d, x, opt.directions);
  };
  double value = 0.0, variance = 0.0;
  std::int64_t count = 0;
  if (region.is_ellipse()) {
    const int grid = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(opt.samples) / 2.0)));
    detail::integrate_ellipse(region, grid, rng, f, value, variance, count);
  } else {
    const auto& vs = region.vertices();
    const Vec2 c = region.centroid();
    const std::size_t pieces = 2 * vs.size();
    const int grid =
        std::max(1, static_cast<int>(std::sqrt(static_cast<double>(opt.samples) / (2.0 * pieces))));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec2 a = vs[i], b = vs[(i + 1) % vs.size()];
      const Vec2 m = 0.5 * (a + b);
      detail::integrate_triangle({a, c, m}, grid, rng, f, value, variance, count);
      detail::integrate_triangle({b, m, c}, grid, rng, f, value, variance, count);
    }
  }
  if (nonzero == 0) throw Error(ErrorCode::EmptyIntersection, "region does not meet the domain interior");
  return {value, std::sqrt(variance), count};
}

/// Axis-aligned rectangle as a polygon region.
inline ConvexDomain rectangle(const Vec2& lo, const Vec2& hi) {
  return ConvexDomain::polygon({lo, {hi[0], lo[1]}, hi, {lo[0], hi[1]}});
}

struct BusemannOptions {
  double horizon = 10.0;
  /// Offset between the two truncation levels used for the extrapolation.
  double step = 2.0;
  double tolerance = 1e-4;
};

/// Point on the segment from m toward the boundary point in direction u (chord
/// parameters t) at Hilbert distance `t_hilbert` from m.
inline Vec2 ray_point(const Vec2& m, const Vec2& u, const ChordParams& t, double t_hilbert) {
  const double k = std::exp(2.0 * t_hilbert) * (-t.t_minus) / t.t_plus;
  const double gap = (t.t_plus - t.t_minus) / (1.0 + k);
  return m + (t.t_plus - gap) * u;
}

/// Busemann function of an ellipse domain (the Klein model):
/// B_xi(o, y) = log(|B(Y, X)| / sqrt(-Q(Y))) - log(|B(O, X)| / sqrt(-Q(O)))
/// with B the bilinear form of Q and X the lift of xi.
/// Homogeneous form; each argument may be scaled freely, so points far out
/// toward the boundary keep full precision.
inline double busemann_ellipse_h(const Mat3& q, const Vec3& O, const Vec3& Y, const Vec3& X) {
  const Vec3 qx = q * X;
  const double qo = dot(O, q * O), qy = dot(Y, q * Y);
  if (!(qo < 0.0) || !(qy < 0.0)) throw Error(ErrorCode::NotInterior, "point not inside the conic");
  return std::log(std::fabs(dot(Y, qx)) / std::fabs(dot(O, qx))) - 0.5 * std::log(qy / qo);
}

inline double busemann_ellipse(const Mat3& q, const Vec2& o, const Vec2& y, const Vec2& xi) {
  return busemann_ellipse_h(q, lift(o), lift(y), lift(xi));
}

/// B_xi(o, y) = lim (d(y, z) - d(o, z)) as z -> xi along a chord. The chord is
/// based at the Euclidean midpoint of o and y; the limit is truncated at
/// `horizon` and `horizon - step` Hilbert units and extrapolated assuming the
/// e^{-2t} decay of strictly convex domains.
inline double busemann_truncated(const ConvexDomain& d, const Vec2& o, const Vec2& y, const Vec2& xi,
                                 const BusemannOptions& opt = {}) {
  d.require_interior(o, "o");
  d.require_interior(y, "y");
  if (std::fabs(d.depth_inside(xi)) > 1e-8) throw Error(ErrorCode::NotOnBoundary, "xi is not on the boundary");
  if (o == y) return 0.0;
  const Vec2 m = 0.5 * (o + y);
  const Vec2 u = xi - m;
  const ChordParams t = d.chord_params(m, u);
  // Keep the truncation point at least 1e-8 (relative) away from the boundary.
  const double max_t = 0.5 * std::log((t.t_plus - t.t_minus) / (1e-8 * t.t_plus) * t.t_plus / (-t.t_minus));
  const double h1 = std::fmin(opt.horizon, max_t);
  const double h0 = h1 - opt.step;
  if (h0 <= 0.0) throw Error(ErrorCode::NotConverged, "no room for the Busemann truncation");
  const Vec2 r0 = ray_point(m, u, t, h0), r1 = ray_point(m, u, t, h1);
  const double dy0 = distance(d, y, r0), dy1 = distance(d, y, r1);
  const double do0 = distance(d, o, r0), do1 = distance(d, o, r1);
  // d(., r(t)) - t is non-increasing along the ray. At the 1e-8 standoff the
  // distances themselves carry about 1e-8 of round-off.
  const double slack = 1e-7;
  if (dy1 - h1 > dy0 - h0 + slack || do1 - h1 > do0 - h0 + slack)
    throw Error(ErrorCode::NotConverged, "truncated Busemann values increase along the ray");
  const double f0 = dy0 - do0, f1 = dy1 - do1;
  if (std::fabs(f1 - f0) > opt.tolerance)
    throw Error(ErrorCode::NotConverged, "Busemann truncations differ by " + std::to_string(std::fabs(f1 - f0)));
  return f1 - (f0 - f1) / std::expm1(2.0 * opt.step);
}

/// Closed form on ellipses, truncated limit elsewhere.
inline double busemann_function(const ConvexDomain& d, const Vec2& o, const Vec2& y, const Vec2& xi,
                                const BusemannOptions& opt = {}) {
  if (!d.is_ellipse()) return busemann_truncated(d, o, y, xi, opt);
  d.require_interior(o, "o");
  d.require_interior(y, "y");
  if (std::fabs(d.depth_inside(xi)) > 1e-8) throw Error(ErrorCode::NotOnBoundary, "xi is not on the boundary");
  return busemann_ellipse(d.conic(), o, y, xi);
}

}  // namespace hilbertia
