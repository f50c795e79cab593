#pragma once

// Properly convex planar domains in the affine chart z = 1: ellipses given by a
// conic of signature (2,1), convex polygons, and polygons reconstructed from
// group orbits. Every metric computation goes through chord_params().

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hilbertia/error.hpp"
#include "hilbertia/linalg.hpp"

namespace hilbertia {

enum class Membership { Interior, Boundary, Exterior };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::Interior: return "interior";
    case Membership::Boundary: return "boundary";
    case Membership::Exterior: return "exterior";
  }
  return "?";
}

/// Half-width of the band around the boundary treated as "on" the boundary.
inline constexpr double kBoundaryBand = 1e-10;

struct Chord {
  Vec2 p_minus;
  Vec2 p_plus;
  Vec2 x;
  Vec2 direction;  // unit
};

/// Signed chord parameters of the line x + t v: the boundary is crossed at
/// t_minus < 0 < t_plus.
struct ChordParams {
  double t_minus;
  double t_plus;
};

enum class DomainKind { Ellipse, Polygon, OrbitHull };

inline std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::Ellipse: return "ellipse";
    case DomainKind::Polygon: return "polygon";
    case DomainKind::OrbitHull: return "hull";
  }
  return "?";
}

inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts, double merge_tol = 1e-9);

class ConvexDomain {
 public:
  struct Edge {
    Vec2 normal;    // outward unit normal
    double offset;  // normal . p <= offset inside
  };

  /// Conic matrix Q with Q(x) = (x,1)^T Q (x,1) negative inside. The sign of Q is
  /// fixed up automatically.
  static ConvexDomain ellipse(const Mat3& conic) {
    ConvexDomain d;
    d.kind_ = DomainKind::Ellipse;
    Mat3 q = conic;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) q[i][j] = q[j][i] = 0.5 * (conic[i][j] + conic[j][i]);
    const double a = q[0][0], b = q[0][1], c = q[1][1];
    const double det2 = a * c - b * b;
    if (!(det2 > 0.0)) throw Error(ErrorCode::InvalidInput, "conic is not an ellipse in the affine chart");
    if (a < 0.0) q = -1.0 * q;
    d.center_ = {-(q[1][1] * q[0][2] - q[0][1] * q[1][2]) / det2, -(q[0][0] * q[1][2] - q[0][1] * q[0][2]) / det2};
    if (!(conic_value(q, d.center_) < 0.0)) throw Error(ErrorCode::InvalidInput, "conic has empty interior");
    d.conic_ = q;
    return d;
  }

  static ConvexDomain disk(const Vec2& center = {0.0, 0.0}, double radius = 1.0) {
    return ellipse({{{1.0, 0.0, -center[0]},
                     {0.0, 1.0, -center[1]},
                     {-center[0], -center[1], center[0] * center[0] + center[1] * center[1] - radius * radius}}});
  }

  /// Counterclockwise, strictly convex vertex list.
  static ConvexDomain polygon(std::vector<Vec2> vertices) {
    ConvexDomain d;
    d.kind_ = DomainKind::Polygon;
    d.set_vertices(std::move(vertices));
    return d;
  }

  static ConvexDomain orbit_hull(std::vector<Vec2> vertices, int depth) {
    ConvexDomain d = polygon(std::move(vertices));
    d.kind_ = DomainKind::OrbitHull;
    d.depth_ = depth;
    return d;
  }

  static ConvexDomain square(double half = 1.0) {
    return polygon({{-half, -half}, {half, -half}, {half, half}, {-half, half}});
  }

  DomainKind kind() const { return kind_; }
  bool is_ellipse() const { return kind_ == DomainKind::Ellipse; }
  const Mat3& conic() const { return conic_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int depth() const { return depth_; }

  /// Vertex centroid for polygons, center for ellipses.
  Vec2 centroid() const {
    return center_;
  }

  /// Approximate signed Euclidean distance to the boundary, positive inside.
  double depth_inside(const Vec2& x) const {
    if (is_ellipse()) {
      const double qv = conic_value(conic_, x);
      const Vec2 g{2.0 * (conic_[0][0] * x[0] + conic_[0][1] * x[1] + conic_[0][2]),
                   2.0 * (conic_[1][0] * x[0] + conic_[1][1] * x[1] + conic_[1][2])};
      const double gn = norm(g);
      if (gn == 0.0) return std::sqrt(-qv / std::fmax(conic_[0][0], conic_[1][1]));
      return -qv / gn;
    }
    if (!indexed()) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& e : edges_) m = std::fmin(m, e.offset - dot(e.normal, x));
      return m;
    }
    // Large polygons: the wedge edge decides the sign; nearby edges refine the distance.
    const std::size_t n = edges_.size();
    const std::size_t k = wedge(x);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 2 * kWindow + 1; ++j) {
      const Edge& e = edges_[(k + n - kWindow + j) % n];
      m = std::fmin(m, e.offset - dot(e.normal, x));
    }
    const double own = edges_[k].offset - dot(edges_[k].normal, x);
    return own < 0.0 ? std::fmin(own, m) : m;
  }

  Membership contains(const Vec2& x) const {
    const double d = depth_inside(x);
    if (d > kBoundaryBand) return Membership::Interior;
    if (d >= -kBoundaryBand) return Membership::Boundary;
    return Membership::Exterior;
  }

  bool interior(const Vec2& x) const { return contains(x) == Membership::Interior; }

  void require_interior(const Vec2& x, const char* what = "point") const {
    if (!interior(x))
      throw Error(ErrorCode::NotInterior, std::string(what) + " (" + std::to_string(x[0]) + "," +
                                              std::to_string(x[1]) + ") is not interior");
  }

  /// Boundary crossings of x + t v. Reversing v negates and swaps the parameters
  /// exactly.
  ChordParams chord_params(const Vec2& x, const Vec2& v) const {
    if (is_ellipse()) {
      const Vec3 X = lift(x);
      const Vec3 V{v[0], v[1], 0.0};
      const double a = dot(V, conic_ * V);
      const double b = dot(V, conic_ * X);
      const double c = dot(X, conic_ * X);
      const double disc = b * b - a * c;
      if (!(a > 0.0) || !(c < 0.0) || !(disc > 0.0))
        throw Error(ErrorCode::NotInterior, "chord through a non-interior point");
      const double s = std::sqrt(disc);
      if (b == 0.0) {
        const double t = s / a;
        return {-t, t};
      }
      if (b > 0.0) {
        const double q = -(b + s);
        return {q / a, c / q};
      }
      const double q = s - b;
      return {c / q, q / a};
    }
    if (indexed()) return {-exit_param(x, -1.0 * v), exit_param(x, v)};
    double tp = std::numeric_limits<double>::infinity();
    double tm = -std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) {
      const double nv = dot(e.normal, v);
      const double gap = e.offset - dot(e.normal, x);
      if (nv > 0.0)
        tp = std::fmin(tp, gap / nv);
      else if (nv < 0.0)
        tm = std::fmax(tm, gap / nv);
    }
    if (!(tp > 0.0) || !(tm < 0.0) || !std::isfinite(tp) || !std::isfinite(tm))
      throw Error(ErrorCode::NotInterior, "chord through a non-interior point");
    return {tm, tp};
  }

  Chord chord_endpoints(const Vec2& x, const Vec2& v) const {
    const double n = norm(v);
    if (!(n > 0.0)) throw Error(ErrorCode::InvalidInput, "zero direction");
    require_interior(x);
    const ChordParams t = chord_params(x, v);
    return {x + t.t_minus * v, x + t.t_plus * v, x, (1.0 / n) * v};
  }

  /// Index of the polygon edge (vertex i to i+1) crossed by the ray from the
  /// centroid through p.
  std::size_t edge_facing(const Vec2& p) const {
    if (indexed()) return wedge(p);
    const Vec2 dir = p - center_;
    const double t = chord_params(center_, dir).t_plus;
    const Vec2 hit = center_ + t * dir;
    std::size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const double gap = std::fabs(edges_[i].offset - dot(edges_[i].normal, hit));
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    return best;
  }

  /// Axis-aligned bounding box {min, max}.
  std::pair<Vec2, Vec2> bounding_box() const {
    if (is_ellipse()) {
      const double a = conic_[0][0], b = conic_[0][1], c = conic_[1][1];
      const double k = -conic_value(conic_, center_);
      const double det2 = a * c - b * b;
      const double hx = std::sqrt(k * c / det2), hy = std::sqrt(k * a / det2);
      return {{center_[0] - hx, center_[1] - hy}, {center_[0] + hx, center_[1] + hy}};
    }
    Vec2 lo = vertices_.front(), hi = vertices_.front();
    for (const auto& v : vertices_) {
      lo = {std::fmin(lo[0], v[0]), std::fmin(lo[1], v[1])};
      hi = {std::fmax(hi[0], v[0]), std::fmax(hi[1], v[1])};
    }
    return {lo, hi};
  }

  /// The domain translated by `offset`.
  ConvexDomain translated(const Vec2& offset) const {
    if (is_ellipse()) {
      const Mat3 t{{{1.0, 0.0, -offset[0]}, {0.0, 1.0, -offset[1]}, {0.0, 0.0, 1.0}}};
      return ellipse(transpose(t) * conic_ * t);
    }
    std::vector<Vec2> vs;
    vs.reserve(vertices_.size());
    for (const auto& v : vertices_) vs.push_back(v + offset);
    // Rounding can flip nearly flat turns of dense orbit hulls.
    ConvexDomain d = polygon(convex_hull(std::move(vs)));
    d.kind_ = kind_;
    d.depth_ = depth_;
    return d;
  }

  /// Boundary sample: the polygon itself, or an inscribed n-gon for ellipses.
  std::vector<Vec2> boundary_polygon(int n = 4096) const {
    if (!is_ellipse()) return vertices_;
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * kPi * i / n;
      const Vec2 u{std::cos(th), std::sin(th)};
      out.push_back(center_ + chord_params(center_, u).t_plus * u);
    }
    return out;
  }

  static double conic_value(const Mat3& q, const Vec2& x) {
    const Vec3 X = lift(x);
    return dot(X, q * X);
  }

 private:
  void set_vertices(std::vector<Vec2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) throw Error(ErrorCode::TooFewPoints, "polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
      const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
      if (!(cross(e1, e2) > 1e-12 * norm(e1) * norm(e2)))
        throw Error(ErrorCode::NonConvexDomain, "vertices are not in strictly convex counterclockwise position");
    }
    edges_.clear();
    edges_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = vertices[i], b = vertices[(i + 1) % n];
      const Vec2 e = b - a;
      const Vec2 nrm = (1.0 / norm(e)) * Vec2{e[1], -e[0]};
      edges_.push_back({nrm, 0.5 * (dot(nrm, a) + dot(nrm, b))});
    }
    vertices_ = std::move(vertices);
    center_ = {0.0, 0.0};
    for (const auto& v : vertices_) center_ = center_ + v;
    center_ = (1.0 / static_cast<double>(n)) * center_;
    build_index();
  }

  // ---- angular index for large polygons ----
  // Vertices are angularly sorted about the vertex centroid, so the edge hit by
  // any ray from the centroid is found by binary search.
  static constexpr std::size_t kIndexThreshold = 64;
  static constexpr std::size_t kWindow = 3;

  bool indexed() const { return !angles_.empty(); }

  void build_index() {
    angles_.clear();
    if (vertices_.size() <= kIndexThreshold) return;
    hub_ = centroid();
    std::size_t start = 0;
    std::vector<double> raw(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      raw[i] = std::atan2(vertices_[i][1] - hub_[1], vertices_[i][0] - hub_[0]);
      if (raw[i] < raw[start]) start = i;
    }
    angle_start_ = start;
    const auto box = bounding_box();
    span_ = norm(box.second - box.first);
    angles_.resize(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) angles_[j] = raw[(start + j) % raw.size()];
  }

  /// Index of the edge (vertex i to i+1) whose wedge about the hub contains p.
  std::size_t wedge(const Vec2& p) const {
    const double a = std::atan2(p[1] - hub_[1], p[0] - hub_[0]);
    const std::size_t n = angles_.size();
    std::size_t j;
    if (a < angles_.front() || a >= angles_.back()) {
      j = n - 1;
    } else {
      j = static_cast<std::size_t>(std::upper_bound(angles_.begin(), angles_.end(), a) - angles_.begin()) - 1;
    }
    return (angle_start_ + j) % n;
  }

  /// Forward boundary crossing of x + t v for an interior x: bisection on t
  /// with wedge membership, then exact intersection with the nearby edges.
  double exit_param(const Vec2& x, const Vec2& v) const {
    const std::size_t n = edges_.size();
    auto inside = [&](const Vec2& p) {
      const Edge& e = edges_[wedge(p)];
      return dot(e.normal, p) <= e.offset;
    };
    if (!inside(x)) throw Error(ErrorCode::NotInterior, "chord through a non-interior point");
    double hi = 2.0 * span_ / norm(v);
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(x + mid * v) ? lo : hi) = mid;
    }
    const std::size_t k = wedge(x + hi * v);
    double tp = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 2 * kWindow + 1; ++j) {
      const Edge& e = edges_[(k + n - kWindow + j) % n];
      const double nv = dot(e.normal, v);
      if (nv > 0.0) tp = std::fmin(tp, (e.offset - dot(e.normal, x)) / nv);
    }
    if (!(tp > 0.0) || !std::isfinite(tp)) throw Error(ErrorCode::NotInterior, "chord through a non-interior point");
    return tp;
  }

  Vec2 hub_{0.0, 0.0};
  double span_ = 0.0;
  std::size_t angle_start_ = 0;
  std::vector<double> angles_;

  DomainKind kind_ = DomainKind::Polygon;
  Mat3 conic_{};
  Vec2 center_{0.0, 0.0};
  std::vector<Vec2> vertices_;
  std::vector<Edge> edges_;
  int depth_ = 0;
};

// ---- polar duality ---------------------------------------------------------

/// Polar dual {w : <w, p> < 1 for all p in the domain}. The origin must be
/// interior; use centered() first otherwise.
inline ConvexDomain polar_dual(const ConvexDomain& d) {
  if (!d.interior({0.0, 0.0})) throw Error(ErrorCode::OriginNotInterior, "polar dual needs an interior origin");
  if (d.is_ellipse()) {
    const Mat3& q = d.conic();
    Mat3 inv = adjugate(q);
    const Mat3 j = diag3(1.0, 1.0, -1.0);
    Mat3 dual = j * inv * j;
    if (dual[2][2] > 0.0) dual = -1.0 * dual;
    const double s = 1.0 / max_abs(dual);
    return ConvexDomain::ellipse(s * dual);
  }
  std::vector<Vec2> vs;
  vs.reserve(d.edges().size());
  for (const auto& e : d.edges()) vs.push_back((1.0 / e.offset) * e.normal);
  return ConvexDomain::polygon(convex_hull(std::move(vs)));
}

struct CenteredDomain {
  ConvexDomain domain;
  Vec2 translation;  // domain = original translated by `translation`
};

/// Translates the centroid to the origin.
inline CenteredDomain centered(const ConvexDomain& d) {
  const Vec2 c = d.centroid();
  return {d.translated(-c), -c};
}

// ---- polygon utilities -----------------------------------------------------

/// Counterclockwise strictly convex hull. Points closer than `merge_tol` are
/// merged and vertices whose turning angle has sine below 1e-12 are dropped.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts, double merge_tol) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);

  // Merge near-coincident neighbours, keeping the point farther from the
  // centroid, then drop flat vertices; repeat until stable. Each pass is linear.
  Vec2 c{0.0, 0.0};
  for (const auto& p : h) c = c + p;
  c = (1.0 / static_cast<double>(h.size())) * c;
  bool changed = true;
  while (changed && h.size() >= 3) {
    changed = false;
    std::vector<Vec2> merged;
    merged.reserve(h.size());
    for (const auto& p : h) {
      if (!merged.empty() && norm(p - merged.back()) < merge_tol) {
        if (norm(p - c) > norm(merged.back() - c)) merged.back() = p;
        changed = true;
      } else {
        merged.push_back(p);
      }
    }
    while (merged.size() >= 2 && norm(merged.front() - merged.back()) < merge_tol) {
      if (norm(merged.back() - c) > norm(merged.front() - c)) merged.front() = merged.back();
      merged.pop_back();
      changed = true;
    }
    std::vector<Vec2> kept;
    kept.reserve(merged.size());
    const std::size_t n = merged.size();
    for (std::size_t i = 0; i < n && n >= 3; ++i) {
      const Vec2& prev = kept.empty() ? merged[(i + n - 1) % n] : kept.back();
      const Vec2 e1 = merged[i] - prev;
      const Vec2 e2 = merged[(i + 1) % n] - merged[i];
      if (cross(e1, e2) > 1e-12 * norm(e1) * norm(e2))
        kept.push_back(merged[i]);
      else
        changed = true;
    }
    h = n >= 3 ? std::move(kept) : std::move(merged);
  }
  return h;
}

/// Euclidean distance from p to a domain (0 inside).
inline double distance_to_set(const ConvexDomain& d, const Vec2& p) {
  if (d.contains(p) != Membership::Exterior) return 0.0;
  std::vector<Vec2> sampled;
  if (d.is_ellipse()) sampled = d.boundary_polygon();
  const std::vector<Vec2>& poly = d.is_ellipse() ? sampled : d.vertices();
  const std::size_t n = poly.size();
  auto seg = [&](std::size_t i) {
    const Vec2 a = poly[i % n], b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double t = std::clamp(dot(p - a, e) / dot(e, e), 0.0, 1.0);
    return norm(p - (a + t * e));
  };
  if (n <= 256) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) best = std::fmin(best, seg(i));
    return best;
  }
  // The distance along the visible chain is unimodal; start at the edge facing
  // p from the centroid and descend.
  std::size_t k;
  if (d.is_ellipse()) {
    // boundary_polygon samples uniform angles about the center.
    double a = std::atan2(p[1] - d.centroid()[1], p[0] - d.centroid()[0]);
    if (a < 0.0) a += 2.0 * kPi;
    k = std::min(n - 1, static_cast<std::size_t>(a / (2.0 * kPi) * static_cast<double>(n)));
  } else {
    k = d.edge_facing(p);
  }
  double kd = seg(k);
  for (std::size_t i = k + 1;; ++i) {
    const double dd = seg(i);
    if (dd > kd) break;
    kd = dd;
  }
  for (std::size_t i = k + n - 1;; --i) {
    const double dd = seg(i);
    if (dd > kd) break;
    kd = dd;
  }
  return kd;
}

/// Hausdorff distance between two convex domains (ellipses are sampled by an
/// inscribed 4096-gon).
inline double hausdorff(const ConvexDomain& a, const ConvexDomain& b) {
  double h = 0.0;
  for (const auto& p : a.boundary_polygon()) h = std::fmax(h, distance_to_set(b, p));
  for (const auto& p : b.boundary_polygon()) h = std::fmax(h, distance_to_set(a, p));
  return h;
}

/// True if every vertex of `inner` lies in `outer` up to `tol`.
inline bool contained_in(const ConvexDomain& inner, const ConvexDomain& outer, double tol = 1e-12) {
  for (const auto& p : inner.boundary_polygon())
    if (outer.depth_inside(p) < -tol) return false;
  return true;
}

/// Least-squares conic through the points (unit-norm coefficient vector) and
/// the root-mean-square Sampson distance of the points to it.
struct ConicFit {
  std::array<double, 6> coefficients{};  // a x^2 + b xy + c y^2 + d x + e y + f
  double rms_residual = 0.0;
  double max_residual = 0.0;
};

inline ConicFit fit_conic(const std::vector<Vec2>& pts) {
  if (pts.size() < 6) throw Error(ErrorCode::TooFewPoints, "conic fit needs at least 6 points");
  // Normalize coordinates for conditioning.
  Vec2 c{0.0, 0.0};
  for (const auto& p : pts) c = c + p;
  c = (1.0 / static_cast<double>(pts.size())) * c;
  double scale = 0.0;
  for (const auto& p : pts) scale = std::fmax(scale, norm(p - c));
  Eigen::Matrix<double, 6, 6> scatter = Eigen::Matrix<double, 6, 6>::Zero();
  for (const auto& p : pts) {
    const double x = (p[0] - c[0]) / scale, y = (p[1] - c[1]) / scale;
    Eigen::Matrix<double, 6, 1> row;
    row << x * x, x * y, y * y, x, y, 1.0;
    scatter += row * row.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(scatter);
  const Eigen::Matrix<double, 6, 1> k = es.eigenvectors().col(0);
  ConicFit fit;
  for (int i = 0; i < 6; ++i) fit.coefficients[static_cast<std::size_t>(i)] = k(i);
  double sum = 0.0;
  for (const auto& p : pts) {
    const double x = (p[0] - c[0]) / scale, y = (p[1] - c[1]) / scale;
    const double v = k(0) * x * x + k(1) * x * y + k(2) * y * y + k(3) * x + k(4) * y + k(5);
    const double gx = 2 * k(0) * x + k(1) * y + k(3), gy = k(1) * x + 2 * k(2) * y + k(4);
    const double g = std::hypot(gx, gy);
    const double r = g > 0.0 ? std::fabs(v) / g * scale : std::fabs(v) * scale;
    sum += r * r;
    fit.max_residual = std::fmax(fit.max_residual, r);
  }
  fit.rms_residual = std::sqrt(sum / static_cast<double>(pts.size()));
  return fit;
}

}  // namespace hilbertia
