#pragma once

// The convex solution of det D^2 u = (-1/u)^4 with u = 0 on the boundary, and
// the affine (Blaschke) metric of the radial graph (-1/u)(1, x) it defines.
//
// The solver works with w = u^2, which stays smooth up to the boundary where u
// itself has a square-root singularity. In terms of w the equation reads
//   det(grad w grad w^T - 2 w D^2 w) = 16 w,
// and D^2 u = (grad w grad w^T - 2 w D^2 w) / (4 w^(3/2)). Derivatives of w use
// four directional differences per node, along x, y and both diagonals. Arms
// that cross the boundary are cut at the true crossing, where w = 0
// (Shortley-Weller), and every difference is exact on quadratics.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hilbertia/domain.hpp"
#include "hilbertia/error.hpp"
#include "hilbertia/linalg.hpp"
#include "hilbertia/metric.hpp"

namespace hilbertia {

enum class NodeTag : std::uint8_t { Interior, Boundary, Exterior };

/// Stencil directions: +x, -x, +y, -y, +diag, -diag, +anti, -anti.
inline constexpr std::array<std::array<int, 2>, 8> kStencil = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

/// Weights of one node in the derivatives of w at a stencil centre.
struct StencilWeight {
  std::ptrdiff_t node;  // grid index, or -1 for a boundary crossing (w = 0)
  double w, wx, wy, wxx, wxy, wyy;
};

/// Derivatives of w at a node: value, gradient, Hessian.
struct WDerivs {
  double w, wx, wy, wxx, wxy, wyy;
};

struct GridSolution {
  ConvexDomain domain;
  int nx = 0, ny = 0;
  Vec2 origin{0.0, 0.0};  // lower-left node
  double h = 0.0;
  std::vector<NodeTag> mask;
  std::vector<double> u;
  std::vector<std::array<double, 8>> arms;  // fraction of a full step, in (0, 1]
  std::vector<double> residual_history;     // max |u^4 det D^2u - 1| per Newton step
  double residual = 0.0;                    // max |det D^2u - u^-4| at nodes >= 2h inside
  int iterations = 0;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Vec2 node(int i, int j) const { return {origin[0] + i * h, origin[1] + j * h}; }
  NodeTag tag(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return NodeTag::Exterior;
    return mask[index(i, j)];
  }
  double value(int i, int j) const { return tag(i, j) == NodeTag::Interior ? u[index(i, j)] : 0.0; }

  /// The nine weights for the derivatives of w at interior node (i, j); entry 0
  /// is the node itself.
  std::array<StencilWeight, 9> stencil(int i, int j) const {
    const std::size_t k = index(i, j);
    std::array<StencilWeight, 9> s{};
    s[0] = {static_cast<std::ptrdiff_t>(k), 1.0, 0, 0, 0, 0, 0};
    const double h2 = h * h;
    for (int d = 0; d < 4; ++d) {
      const double ap = arms[k][2 * d], am = arms[k][2 * d + 1];
      // f'' = c0 f0 + cp fp + cm fm and f' = d0 f0 + dp fp + dm fm, in step units.
      const double cp = 2.0 / ((ap + am) * ap), cm = 2.0 / ((ap + am) * am);
      const double den = ap * am * (ap + am);
      const double dp = am * am / den, dm = -ap * ap / den, d0 = (ap * ap - am * am) / den;
      for (int side = 0; side < 2; ++side) {
        const auto& st = kStencil[2 * d + side];
        StencilWeight& e = s[1 + 2 * d + side];
        e = {arms[k][2 * d + side] < 1.0 ? -1 : static_cast<std::ptrdiff_t>(index(i + st[0], j + st[1])), 0, 0, 0,
             0, 0, 0};
        const double c = side == 0 ? cp : cm, dd = side == 0 ? dp : dm;
        switch (d) {
          case 0: e.wx = dd / h, e.wxx = c / h2; break;
          case 1: e.wy = dd / h, e.wyy = c / h2; break;
          case 2: e.wxy = c / (4.0 * h2); break;
          case 3: e.wxy = -c / (4.0 * h2); break;
        }
      }
      const double c0 = -(cp + cm);
      switch (d) {
        case 0: s[0].wx += d0 / h, s[0].wxx += c0 / h2; break;
        case 1: s[0].wy += d0 / h, s[0].wyy += c0 / h2; break;
        case 2: s[0].wxy += c0 / (4.0 * h2); break;
        case 3: s[0].wxy -= c0 / (4.0 * h2); break;
      }
    }
    return s;
  }

  WDerivs w_derivs(int i, int j) const {
    WDerivs r{};
    for (const StencilWeight& e : stencil(i, j)) {
      if (e.node < 0) continue;
      const double w = u[static_cast<std::size_t>(e.node)] * u[static_cast<std::size_t>(e.node)];
      r.w += e.w * w, r.wx += e.wx * w, r.wy += e.wy * w;
      r.wxx += e.wxx * w, r.wxy += e.wxy * w, r.wyy += e.wyy * w;
    }
    return r;
  }

  /// Discrete Hessian {uxx, uxy, uyy} at an interior node, from the chain rule.
  std::array<double, 3> hessian(int i, int j) const {
    const WDerivs d = w_derivs(i, j);
    const double s = 1.0 / (4.0 * d.w * std::sqrt(d.w));
    return {s * (d.wx * d.wx - 2.0 * d.w * d.wxx), s * (d.wx * d.wy - 2.0 * d.w * d.wxy),
            s * (d.wy * d.wy - 2.0 * d.w * d.wyy)};
  }
};

namespace detail {

inline GridSolution make_grid(const ConvexDomain& domain, int resolution) {
  const auto [lo, hi] = domain.bounding_box();
  const double side = std::fmax(hi[0] - lo[0], hi[1] - lo[1]);
  GridSolution g{domain, 0, 0, {0.0, 0.0}, 0.0, {}, {}, {}, {}, 0.0, 0};
  g.h = side / (resolution - 1);
  g.nx = static_cast<int>(std::ceil((hi[0] - lo[0]) / g.h - 1e-9)) + 1;
  g.ny = static_cast<int>(std::ceil((hi[1] - lo[1]) / g.h - 1e-9)) + 1;
  g.origin = lo;
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
  g.mask.assign(n, NodeTag::Exterior);
  g.u.assign(n, 0.0);
  g.arms.assign(n, {1, 1, 1, 1, 1, 1, 1, 1});
  // Nodes this close to the boundary are boundary nodes; the arm cut keeps the
  // stencil consistent either way.
  const double band = 1e-6 * g.h;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = domain.depth_inside(g.node(i, j));
      g.mask[g.index(i, j)] = d > band ? NodeTag::Interior : d >= -band ? NodeTag::Boundary : NodeTag::Exterior;
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (g.mask[k] != NodeTag::Interior) continue;
      for (int d = 0; d < 8; ++d) {
        const auto& s = kStencil[d];
        if (g.tag(i + s[0], j + s[1]) == NodeTag::Interior) continue;
        const Vec2 v{s[0] * g.h, s[1] * g.h};
        const double t = domain.chord_params(g.node(i, j), v).t_plus;
        g.arms[k][d] = std::clamp(t, 1e-6, 1.0 - 1e-12);
      }
    }
  return g;
}

// Scaled residual u^4 det D^2 u - 1 = det M / (16 w) - 1.
inline double scaled_residual(const WDerivs& d) {
  const double m00 = d.wx * d.wx - 2.0 * d.w * d.wxx;
  const double m01 = d.wx * d.wy - 2.0 * d.w * d.wxy;
  const double m11 = d.wy * d.wy - 2.0 * d.w * d.wyy;
  return (m00 * m11 - m01 * m01) / (16.0 * d.w) - 1.0;
}

// Derivative of the scaled residual with respect to the w value weighted by e.
inline double residual_derivative(const WDerivs& d, const StencilWeight& e) {
  const double m00 = d.wx * d.wx - 2.0 * d.w * d.wxx;
  const double m01 = d.wx * d.wy - 2.0 * d.w * d.wxy;
  const double m11 = d.wy * d.wy - 2.0 * d.w * d.wyy;
  const double det = m00 * m11 - m01 * m01;
  const double dm00 = 2.0 * d.wx * e.wx - 2.0 * (e.w * d.wxx + d.w * e.wxx);
  const double dm01 = e.wx * d.wy + d.wx * e.wy - 2.0 * (e.w * d.wxy + d.w * e.wxy);
  const double dm11 = 2.0 * d.wy * e.wy - 2.0 * (e.w * d.wyy + d.w * e.wyy);
  const double ddet = dm00 * m11 + m00 * dm11 - 2.0 * m01 * dm01;
  return ddet / (16.0 * d.w) - det * e.w / (16.0 * d.w * d.w);
}

}  // namespace detail

struct MongeAmpereOptions {
  int max_iterations = 60;
  double step_tol = 1e-12;  // relative Newton update size that counts as converged
  bool keep_convex = true;  // reject steps that add nonconvex nodes
};

/// Solves det D^2 u = u^-4 on the grid by damped Newton on w = u^2 with a
/// sparse LU. Each row is the scaled residual u^4 det D^2 u - 1, so rows near
/// the boundary are comparable to interior rows. The step is halved until the
/// residual norm decreases, w stays positive and no node loses convexity.
inline GridSolution solve_monge_ampere(const ConvexDomain& domain, int resolution, double tol = 1e-6,
                                       const MongeAmpereOptions& opt = {}) {
  if (resolution < 33) throw Error(ErrorCode::InvalidInput, "resolution must be at least 33");
  {
    const auto [lo, hi] = domain.bounding_box();
    if (!std::isfinite(hi[0] - lo[0]) || !std::isfinite(hi[1] - lo[1]))
      throw Error(ErrorCode::NonConvexDomain, "domain is unbounded");
  }
  GridSolution g = detail::make_grid(domain, resolution);

  std::vector<int> unknown(g.u.size(), -1);
  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k < g.u.size(); ++k)
    if (g.mask[k] == NodeTag::Interior) {
      unknown[k] = static_cast<int>(nodes.size());
      nodes.push_back(k);
    }
  if (nodes.size() < 9) throw Error(ErrorCode::InvalidInput, "domain too small for the grid");
  auto ij = [&](std::size_t k) { return std::array<int, 2>{static_cast<int>(k % g.nx), static_cast<int>(k / g.nx)}; };

  // Start from u = -c sqrt(v) with v the torsion function (Laplacian -1, zero
  // on the boundary). sqrt(v) is concave on convex planar domains, so the guess
  // is smooth and strictly convex; on disks it is the exact solution. The scale
  // follows from the residual being c^6 det M(v) / (16 v) - 1.
  {
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trips;
    const auto N = static_cast<Eigen::Index>(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto [i, j] = ij(nodes[n]);
      for (const StencilWeight& e : g.stencil(i, j)) {
        const double c = e.wxx + e.wyy;
        if (e.node < 0 || c == 0.0) continue;
        trips.emplace_back(static_cast<int>(n), unknown[static_cast<std::size_t>(e.node)], -c);
      }
    }
    Eigen::SparseMatrix<double> L(N, N);
    L.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(L);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::NotConverged, "torsion solve failed");
    const Eigen::VectorXd v = lu.solve(Eigen::VectorXd::Ones(N));
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (!(v[static_cast<Eigen::Index>(n)] > 0.0)) throw Error(ErrorCode::NonConvexDomain, "torsion function not positive");
      g.u[nodes[n]] = -std::sqrt(v[static_cast<Eigen::Index>(n)]);
    }
    std::vector<double> ratio;
    ratio.reserve(nodes.size());
    for (std::size_t k : nodes) {
      const auto [i, j] = ij(k);
      const double q = detail::scaled_residual(g.w_derivs(i, j)) + 1.0;
      if (q > 0.0) ratio.push_back(q);
    }
    if (ratio.empty()) throw Error(ErrorCode::NonConvexDomain, "torsion guess is nowhere convex");
    std::nth_element(ratio.begin(), ratio.begin() + ratio.size() / 2, ratio.end());
    const double c = std::pow(ratio[ratio.size() / 2], -1.0 / 6.0);
    for (std::size_t k : nodes) g.u[k] *= c;
  }
  // Scaled residuals, returning the number of nodes where M is not positive
  // definite (the discrete Hessian of u is not convex).
  auto residuals = [&](const GridSolution& s, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(nodes.size()));
    std::size_t bad = 0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto [i, j] = ij(nodes[n]);
      const WDerivs d = s.w_derivs(i, j);
      r[static_cast<Eigen::Index>(n)] = detail::scaled_residual(d);
      if (!(d.wx * d.wx - 2.0 * d.w * d.wxx > 0.0) || !(r[static_cast<Eigen::Index>(n)] > -1.0)) ++bad;
    }
    return bad;
  };

  Eigen::VectorXd r;
  std::size_t nonconvex = residuals(g, r);
  double merit = r.norm();
  g.residual_history.push_back(r.lpNorm<Eigen::Infinity>());

  using Triplet = Eigen::Triplet<double>;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool converged = false;
  const auto N = static_cast<Eigen::Index>(nodes.size());
  for (int it = 0; it < opt.max_iterations && !converged; ++it) {
    std::vector<Triplet> trips;
    trips.reserve(nodes.size() * 9);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const auto [i, j] = ij(nodes[n]);
      const auto st = g.stencil(i, j);
      const WDerivs d = g.w_derivs(i, j);
      for (const StencilWeight& e : st) {
        if (e.node < 0) continue;
        trips.emplace_back(static_cast<int>(n), unknown[static_cast<std::size_t>(e.node)],
                           detail::residual_derivative(d, e));
      }
    }
    Eigen::SparseMatrix<double> J(N, N);
    J.setFromTriplets(trips.begin(), trips.end());
    if (it == 0) lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::NotConverged, "singular Newton system");
    const Eigen::VectorXd dw = lu.solve(-r);

    double wmax = 0.0;
    for (std::size_t k : nodes) wmax = std::fmax(wmax, g.u[k] * g.u[k]);
    GridSolution trial = g;
    Eigen::VectorXd rt;
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half, step *= 0.5) {
      bool positive = true;
      for (std::size_t n = 0; n < nodes.size() && positive; ++n) {
        const double w = g.u[nodes[n]] * g.u[nodes[n]] + step * dw[static_cast<Eigen::Index>(n)];
        if (!(w > 0.0)) positive = false;
        trial.u[nodes[n]] = -std::sqrt(w);
      }
      if (!positive) continue;
      const std::size_t bad = residuals(trial, rt);
      if (rt.norm() < merit && (!opt.keep_convex || bad <= nonconvex)) {
        nonconvex = bad;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    g.u.swap(trial.u);
    r = rt;
    merit = r.norm();
    g.residual_history.push_back(r.lpNorm<Eigen::Infinity>());
    g.iterations = it + 1;
    converged = step * dw.lpNorm<Eigen::Infinity>() <= opt.step_tol * wmax;
  }

  // Report the unscaled residual away from the boundary.
  double res = 0.0;
  for (std::size_t k : nodes) {
    const auto [i, j] = ij(k);
    if (domain.depth_inside(g.node(i, j)) < 2.0 * g.h) continue;
    const auto H = g.hessian(i, j);
    res = std::fmax(res, std::fabs(H[0] * H[2] - H[1] * H[1] - std::pow(g.u[k], -4)));
  }
  g.residual = res;
  if (!(res < tol))
    throw Error(ErrorCode::NotConverged,
                "residual " + std::to_string(res) + " after " + std::to_string(g.iterations) + " Newton steps");
  return g;
}

// ---- affine metric ----------------------------------------------------------

struct Jet {
  double u;
  Vec2 grad;
  std::array<double, 3> hess;  // uxx, uxy, uyy
};

struct BlaschkeData {
  Vec2 point;
  std::array<double, 3> h_metric;  // h00, h01, h11
  Vec3 xi;                         // affine normal
  double scale;                    // phi with xi = phi F + tangent part
};

namespace detail {

struct Frame {
  Vec3 F, Fx, Fy;
  std::array<Vec3, 3> Fij;  // xx, xy, yy
};

// F = phi (1, x, y) with phi = -1/u.
inline Frame radial_frame(const Jet& j, const Vec2& x) {
  const double phi = -1.0 / j.u;
  const double u2 = j.u * j.u;
  const Vec2 dphi{j.grad[0] / u2, j.grad[1] / u2};
  // d2 phi = D2u / u^2 - 2 du du^T / u^3
  const double p00 = j.hess[0] / u2 - 2.0 * j.grad[0] * j.grad[0] / (u2 * j.u);
  const double p01 = j.hess[1] / u2 - 2.0 * j.grad[0] * j.grad[1] / (u2 * j.u);
  const double p11 = j.hess[2] / u2 - 2.0 * j.grad[1] * j.grad[1] / (u2 * j.u);
  const Vec3 P{1.0, x[0], x[1]};
  const Vec3 ex{0.0, 1.0, 0.0}, ey{0.0, 0.0, 1.0};
  Frame f;
  f.F = phi * P;
  f.Fx = dphi[0] * P + phi * ex;
  f.Fy = dphi[1] * P + phi * ey;
  f.Fij[0] = p00 * P + 2.0 * dphi[0] * ex;
  f.Fij[1] = p01 * P + dphi[0] * ey + dphi[1] * ex;
  f.Fij[2] = p11 * P + 2.0 * dphi[1] * ey;
  return f;
}

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

}  // namespace detail

struct AffineMetric {
  std::array<double, 3> h;
  double phi;  // rescaling of the transversal
};

/// Affine metric from a frame and any transversal field. With h~ the second
/// fundamental form relative to the transversal and D~ = det(Fx, Fy, xi~),
/// the Blaschke normal is phi xi~ + tangent part with h = h~ / phi; the volume
/// condition |det(Fx, Fy, xi)| = sqrt(det h) gives phi^4 = det h~ / D~^2, so
/// h = h~ |D~|^(1/2) (det h~)^(-1/4).
inline AffineMetric affine_metric(const Vec3& Fx, const Vec3& Fy, const std::array<Vec3, 3>& Fij,
                                  const Vec3& transversal) {
  const double D = detail::det3(Fx, Fy, transversal);
  if (!(std::fabs(D) > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "transversal is tangent");
  std::array<double, 3> ht;
  for (int k = 0; k < 3; ++k) ht[k] = detail::det3(Fx, Fy, Fij[k]) / D;
  // Orient the transversal so that h~ is positive.
  if (ht[0] + ht[2] < 0.0)
    for (double& v : ht) v = -v;
  const double dh = ht[0] * ht[2] - ht[1] * ht[1];
  if (!(ht[0] > 0.0) || !(dh > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "second fundamental form is indefinite");
  const double factor = std::sqrt(std::fabs(D)) * std::pow(dh, -0.25);
  return {{ht[0] * factor, ht[1] * factor, ht[2] * factor}, 1.0 / factor};
}

/// Affine metric of the radial graph of u from its jet, without the normal.
inline std::array<double, 3> blaschke_from_jet(const Jet& j, const Vec2& x, double transversal_scale = 1.0) {
  const detail::Frame f = detail::radial_frame(j, x);
  return affine_metric(f.Fx, f.Fy, f.Fij, transversal_scale * f.F).h;
}

namespace detail {

// Cubic least-squares fit of w = u^2 over the 5x5 block of nodes nearest to p,
// converted to the jet of u = -sqrt(w).
inline Jet local_jet(const GridSolution& s, const Vec2& p) {
  const int ci = static_cast<int>(std::lround((p[0] - s.origin[0]) / s.h));
  const int cj = static_cast<int>(std::lround((p[1] - s.origin[1]) / s.h));
  Eigen::Matrix<double, 25, 10> A;
  Eigen::Matrix<double, 25, 1> b;
  int row = 0;
  for (int dj = -2; dj <= 2; ++dj)
    for (int di = -2; di <= 2; ++di, ++row) {
      const int i = ci + di, j = cj + dj;
      if (s.tag(i, j) != NodeTag::Interior)
        throw Error(ErrorCode::TooCloseToBoundary, "stencil leaves the domain");
      const Vec2 q = s.node(i, j);
      const double x = (q[0] - p[0]) / s.h, y = (q[1] - p[1]) / s.h;
      A.row(row) << 1, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y;
      b[row] = s.u[s.index(i, j)] * s.u[s.index(i, j)];
    }
  const Eigen::Matrix<double, 10, 1> c = A.colPivHouseholderQr().solve(b);
  const double h2 = s.h * s.h;
  const double w = c[0], wx = c[1] / s.h, wy = c[2] / s.h;
  const double wxx = 2.0 * c[3] / h2, wxy = c[4] / h2, wyy = 2.0 * c[5] / h2;
  const double sw = std::sqrt(w), k = 1.0 / (4.0 * w * sw);
  return {-sw,
          {-wx / (2.0 * sw), -wy / (2.0 * sw)},
          {k * (wx * wx - 2.0 * w * wxx), k * (wx * wy - 2.0 * w * wxy), k * (wy * wy - 2.0 * w * wyy)}};
}

inline void require_deep(const GridSolution& s, const Vec2& p) {
  if (!(s.domain.depth_inside(p) >= 3.0 * s.h))
    throw Error(ErrorCode::TooCloseToBoundary, "point is less than 3h inside the domain");
}

}  // namespace detail

/// Affine metric and affine normal at an interior point. The tangent part of
/// the normal, -Fx,Fy (h~^-1 grad phi), removes the transversal component of
/// D xi; grad phi comes from central differences one grid step apart.
inline BlaschkeData blaschke_metric(const GridSolution& s, const Vec2& p) {
  detail::require_deep(s, p);
  const Jet j = detail::local_jet(s, p);
  const detail::Frame f = detail::radial_frame(j, p);
  const AffineMetric am = affine_metric(f.Fx, f.Fy, f.Fij, f.F);

  auto phi_at = [&](const Vec2& q) {
    const Jet jq = detail::local_jet(s, q);
    const detail::Frame fq = detail::radial_frame(jq, q);
    return affine_metric(fq.Fx, fq.Fy, fq.Fij, fq.F).phi;
  };
  const double dx = s.h;
  const Vec2 grad{(phi_at({p[0] + dx, p[1]}) - phi_at({p[0] - dx, p[1]})) / (2.0 * dx),
                  (phi_at({p[0], p[1] + dx}) - phi_at({p[0], p[1] - dx})) / (2.0 * dx)};
  // h~ = phi h; solve h~ z = -grad phi.
  const double a = am.phi * am.h[0], b = am.phi * am.h[1], c = am.phi * am.h[2];
  const double det = a * c - b * b;
  const Vec2 z{-(c * grad[0] - b * grad[1]) / det, -(a * grad[1] - b * grad[0]) / det};
  const Vec3 xi = am.phi * f.F + z[0] * f.Fx + z[1] * f.Fy;
  return {p, am.h, xi, am.phi};
}

inline double affine_norm(const std::array<double, 3>& h, const Vec2& v) {
  return std::sqrt(h[0] * v[0] * v[0] + 2.0 * h[1] * v[0] * v[1] + h[2] * v[1] * v[1]);
}

// ---- comparison with the Hilbert metric --------------------------------------

struct ComparisonReport {
  int samples = 0;
  double ratio_min = 0.0, ratio_max = 0.0, ratio_mean = 0.0;  // ||X||_h / ||X||_F
  std::vector<double> volume_ratios;                          // Vol_A / Vol_H on nested rectangles
  double volume_min = 0.0, volume_max = 0.0;
  bool bounded = false;  // every norm ratio in [1/10, 10]
};

/// Norm ratios at `samples` random points at least 3h inside, and volume ratios
/// on rectangles centred at the centroid, scaled by 0.2, 0.35 and 0.5 of the
/// largest inscribed square there. Volumes use a midpoint rule on a 6x6 grid.
inline ComparisonReport compare_hilbert_affine(const ConvexDomain& domain, const GridSolution& sol, int samples = 200,
                                               std::uint64_t seed = 1) {
  if (samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  ComparisonReport rep;
  std::mt19937_64 rng(seed);
  const auto [lo, hi] = domain.bounding_box();
  std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]), ang(0.0, 2.0 * kPi);
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  double sum = 0.0;
  int tries = 0;
  while (rep.samples < samples) {
    if (++tries > 1000 * samples) throw Error(ErrorCode::InsufficientData, "no interior sample points");
    const Vec2 p{ux(rng), uy(rng)};
    if (domain.depth_inside(p) < 3.0 * sol.h + 2.0 * sol.h) continue;
    const double t = ang(rng);
    const Vec2 v{std::cos(t), std::sin(t)};
    BlaschkeData b;
    try {
      b = blaschke_metric(sol, p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TooCloseToBoundary) continue;
      throw;
    }
    const double r = affine_norm(b.h_metric, v) / finsler_norm(domain, p, v);
    rep.ratio_min = std::fmin(rep.ratio_min, r);
    rep.ratio_max = std::fmax(rep.ratio_max, r);
    sum += r;
    ++rep.samples;
  }
  rep.ratio_mean = sum / rep.samples;
  rep.bounded = rep.ratio_min >= 0.1 && rep.ratio_max <= 10.0;

  const Vec2 c = domain.centroid();
  double half = domain.depth_inside(c) / std::sqrt(2.0);
  constexpr int kCells = 6;
  rep.volume_min = std::numeric_limits<double>::infinity();
  rep.volume_max = 0.0;
  for (double f : {0.2, 0.35, 0.5}) {
    const double a = f * half;
    const double cell = 2.0 * a / kCells;
    double va = 0.0, vh = 0.0;
    for (int j = 0; j < kCells; ++j)
      for (int i = 0; i < kCells; ++i) {
        const Vec2 p{c[0] - a + (i + 0.5) * cell, c[1] - a + (j + 0.5) * cell};
        const auto h = blaschke_metric(sol, p).h_metric;
        va += std::sqrt(h[0] * h[2] - h[1] * h[1]);
        vh += busemann_density(domain, p);
      }
    // Both densities are 1 at the centre of the unit disk.
    const double ratio = va / vh;
    rep.volume_ratios.push_back(ratio);
    rep.volume_min = std::fmin(rep.volume_min, ratio);
    rep.volume_max = std::fmax(rep.volume_max, ratio);
  }
  return rep;
}

}  // namespace hilbertia
