#pragma once

// Reconstruction of the invariant convex set from attracting fixed points, and
// the cyclic-order tests on the boundary circle used by discreteness and
// intersection heuristics.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hilbertia/domain.hpp"
#include "hilbertia/error.hpp"
#include "hilbertia/holonomy.hpp"
#include "hilbertia/projective.hpp"

namespace hilbertia {

/// Boundary fixed point of a unipotent map with one Jordan block (a cusp of a
/// punctured torus): the image of (g - I)^2. Nullopt for anything else.
inline std::optional<Vec3> parabolic_fixed_point(const ProjMap& g) {
  const Mat3& m = g.m();
  const double scale = std::fmax(1.0, max_abs(m));
  if (g.det_sign() < 0 || std::fabs(trace(m) - 3.0) > 1e-9 * scale ||
      std::fabs(trace(g.inv()) - 3.0) > 1e-9 * std::fmax(1.0, max_abs(g.inv())))
    return std::nullopt;
  const Mat3 n = m - identity3();
  const Mat3 n2 = n * n;
  if (max_abs(n2) < 1e-9 * scale) return std::nullopt;
  // Long hyperbolic words whose spectrum underflowed can still pass the trace
  // test; a true single Jordan block has (g - I)^3 = 0.
  if (max_abs(n2 * n) > 1e-6 * max_abs(n2)) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t j = 1; j < 3; ++j)
    if (std::fabs(n2[0][j]) + std::fabs(n2[1][j]) + std::fabs(n2[2][j]) >
        std::fabs(n2[0][best]) + std::fabs(n2[1][best]) + std::fabs(n2[2][best]))
      best = j;
  return Vec3{n2[0][best], n2[1][best], n2[2][best]};
}

/// Attracting fixed points (affine chart) of all positive-hyperbolic reduced
/// words of length <= depth, plus the fixed points of parabolic words. Other
/// words, and fixed points on the line at infinity, are skipped.
inline std::vector<Vec2> attracting_fixed_points(const HolonomyRep& rep, int depth) {
  std::vector<Vec2> pts;
  for_each_reduced_word(rep, depth, [&](const std::string&, const ProjMap& g) {
    const SpectralData s = classify(g);
    Vec3 h;
    if (s.positive_hyperbolic()) {
      h = s.fixed_points->attracting.h();
    } else if (auto p = parabolic_fixed_point(g)) {
      h = *p;
    } else {
      return;
    }
    if (std::fabs(h[2]) < 1e-12 * max_abs(h)) return;
    pts.push_back({h[0] / h[2], h[1] / h[2]});
  });
  return pts;
}

/// Convex hull of the attracting fixed points of words up to `depth`. The
/// optional seed contributes its orbit under the same words; the hull of fixed
/// points alone already lies on the boundary, so the seed is only useful for
/// representations with few hyperbolic words.
inline ConvexDomain orbit_hull(const HolonomyRep& rep, int depth = 8,
                               const std::optional<ProjPoint>& seed = std::nullopt) {
  if (depth < 1) throw Error(ErrorCode::InvalidInput, "depth must be positive");
  std::vector<Vec2> pts = attracting_fixed_points(rep, depth);
  if (seed) {
    for_each_reduced_word(rep, depth, [&](const std::string&, const ProjMap& g) {
      const Vec3 h = g.apply(seed->h());
      if (std::fabs(h[2]) > 1e-12 * max_abs(h)) pts.push_back({h[0] / h[2], h[1] / h[2]});
    });
  }
  std::vector<Vec2> hull = convex_hull(std::move(pts));
  if (hull.size() < 3)
    throw Error(ErrorCode::TooFewPoints, "hull has " + std::to_string(hull.size()) + " vertices");
  return ConvexDomain::orbit_hull(std::move(hull), depth);
}

// ---- cyclic order on the boundary ------------------------------------------

/// Angle of p seen from c, in [0, 2pi).
inline double angle_about(const Vec2& c, const Vec2& p) {
  double a = std::atan2(p[1] - c[1], p[0] - c[0]);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

/// Whether the chords (p1, p2) and (q1, q2) of a convex curve cross, decided by
/// cyclic order of the endpoint angles around an interior point. Endpoints that
/// coincide within `tol` radians count as unlinked.
inline bool chords_linked(const Vec2& c, const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2,
                          double tol = 1e-10) {
  double a = angle_about(c, p1), b = angle_about(c, p2);
  if (a > b) std::swap(a, b);
  auto close = [&](double x, double y) {
    const double d = std::fabs(x - y);
    return std::fmin(d, 2.0 * kPi - d) <= tol;
  };
  const double u = angle_about(c, q1), v = angle_about(c, q2);
  if (close(u, a) || close(u, b) || close(v, a) || close(v, b)) return false;
  const bool u_in = u > a && u < b;
  const bool v_in = v > a && v < b;
  return u_in != v_in;
}

struct Axis {
  Vec2 attracting;
  Vec2 repelling;
};

/// Axis endpoints of a positive-hyperbolic map in the affine chart.
inline Axis axis_of(const ProjMap& g) {
  const SpectralData s = classify(g);
  if (!s.positive_hyperbolic()) throw Error(ErrorCode::NotHyperbolic, "map has no axis");
  return {s.fixed_points->attracting.affine(), s.fixed_points->repelling.affine()};
}

/// Ping-pong heuristic. The generator axes must be hyperbolic with four
/// separated endpoints, linked for the punctured torus (the curves a and b meet
/// once) and unlinked for the pants. Not a certificate.
inline bool looks_discrete(const HolonomyRep& rep) {
  try {
    const Axis x = axis_of(rep.a());
    const Axis y = axis_of(rep.b());
    const Vec2 c = 0.25 * (x.attracting + x.repelling + y.attracting + y.repelling);
    const Vec2 ends[4] = {x.attracting, x.repelling, y.attracting, y.repelling};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double d = std::fabs(angle_about(c, ends[i]) - angle_about(c, ends[j]));
        if (std::fmin(d, 2.0 * kPi - d) < 1e-6) return false;
      }
    const bool linked = chords_linked(c, x.attracting, x.repelling, y.attracting, y.repelling);
    return linked == (rep.topology() == Topology::PuncturedTorus);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace hilbertia
