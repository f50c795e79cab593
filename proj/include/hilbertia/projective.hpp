#pragma once

// 3x3 projective transformations of the real projective plane: normalization to
// |det| = 1, spectral classification, fixed points, translation lengths and duals.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hilbertia/error.hpp"
#include "hilbertia/linalg.hpp"

namespace hilbertia {

/// A point of RP^2, stored in canonical form: the first coordinate of largest
/// magnitude equals +1.
class ProjPoint {
 public:
  ProjPoint() : h_{0.0, 0.0, 1.0} {}

  explicit ProjPoint(const Vec3& h) : h_(canonicalize(h)) {}
  ProjPoint(double x, double y, double z) : ProjPoint(Vec3{x, y, z}) {}

  static ProjPoint from_affine(const Vec2& p) { return ProjPoint(lift(p)); }

  const Vec3& h() const { return h_; }
  double operator[](std::size_t i) const { return h_[i]; }

  /// Affine chart z = 1.
  Vec2 affine() const {
    if (h_[2] == 0.0) throw Error(ErrorCode::DegenerateImage, "point at infinity has no affine chart");
    return {h_[0] / h_[2], h_[1] / h_[2]};
  }

  /// Same projective point iff the representatives are parallel.
  bool same_point(const ProjPoint& other, double tol = 1e-12) const {
    return norm(cross(h_, other.h_)) <= tol * norm(h_) * norm(other.h_);
  }

  static Vec3 canonicalize(const Vec3& h) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (std::fabs(h[i]) > std::fabs(h[k])) k = i;
    const double s = h[k];
    if (s == 0.0 || !std::isfinite(s))
      throw Error(ErrorCode::DegenerateImage, "zero or non-finite homogeneous triple");
    return {h[0] / s, h[1] / s, h[2] / s};
  }

 private:
  Vec3 h_;
};

/// A projective transformation represented by a matrix with |det| = 1. The
/// inverse travels with the matrix: products multiply both, so long words keep
/// an accurate inverse even when the adjugate would cancel catastrophically.
class ProjMap {
 public:
  ProjMap() : m_(identity3()), inv_(identity3()), det_sign_(1) {}

  /// Normalizes by the real cube root of |det|; throws NonInvertible when the
  /// determinant is numerically zero.
  explicit ProjMap(const Mat3& m) : m_(m), det_sign_(1) {
    const double d = det(m_);
    if (!std::isfinite(d) || std::fabs(d) < 1e-14)
      throw Error(ErrorCode::NonInvertible, "|det| below 1e-14");
    det_sign_ = d > 0 ? 1 : -1;
    const double ad = std::fabs(d);
    // Leave matrices that are unimodular up to the rounding of det alone, so
    // that serialized maps read back bit for bit.
    const double scale = max_abs(m_);
    if (std::fabs(ad - 1.0) > 1e-13 * std::fmax(1.0, scale * scale * scale)) m_ = (1.0 / std::cbrt(ad)) * m_;
    inv_ = (1.0 / det(m_)) * adjugate(m_);
  }

  /// Trusted constructor for a matrix and its inverse, both already unimodular.
  static ProjMap from_pair(const Mat3& m, const Mat3& inv, int det_sign) {
    ProjMap g;
    g.m_ = m;
    g.inv_ = inv;
    g.det_sign_ = det_sign;
    return g;
  }

  static ProjMap identity() { return ProjMap(); }
  static ProjMap diagonal(double a, double b, double c) { return ProjMap(diag3(a, b, c)); }

  const Mat3& m() const { return m_; }
  const Mat3& inv() const { return inv_; }
  int det_sign() const { return det_sign_; }
  double operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }

  /// Re-normalizing an already normalized map is a no-op.
  ProjMap normalized() const { return *this; }

  ProjMap inverse() const { return from_pair(inv_, m_, det_sign_); }

  /// Inverse-transpose: the induced action on the dual projective plane.
  ProjMap dual() const { return from_pair(transpose(inv_), transpose(m_), det_sign_); }

  friend ProjMap operator*(const ProjMap& a, const ProjMap& b) {
    return from_pair(a.m_ * b.m_, b.inv_ * a.inv_, a.det_sign_ * b.det_sign_);
  }

  Vec3 apply(const Vec3& v) const { return m_ * v; }

  /// Equality in PGL(3): the matrices agree up to a nonzero scalar.
  bool same_map(const ProjMap& other, double tol = 1e-9) const {
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (std::fabs(m_[i][j]) > std::fabs(m_[bi][bj])) {
          bi = i;
          bj = j;
        }
    const double s = other.m_[bi][bj] / m_[bi][bj];
    return max_abs_diff(s * m_, other.m_) <= tol * max_abs(other.m_);
  }

 private:
  Mat3 m_, inv_;
  int det_sign_;
};

inline ProjPoint act(const ProjMap& g, const ProjPoint& p) { return ProjPoint(g.apply(p.h())); }

enum class SpectralKind { PositiveHyperbolic, Other };

inline std::string to_string(SpectralKind k) {
  return k == SpectralKind::PositiveHyperbolic ? "positive-hyperbolic" : "other";
}

struct FixedPoints {
  ProjPoint attracting;
  ProjPoint saddle;
  ProjPoint repelling;
};

struct SpectralData {
  /// Descending; for the Other kind these are the real parts of the eigenvalues.
  std::array<double, 3> lambdas{};
  SpectralKind kind = SpectralKind::Other;
  /// Present only for positive-hyperbolic maps.
  std::optional<FixedPoints> fixed_points;
  /// Eigenvector basis (columns: attracting, saddle, repelling) with the
  /// attracting and repelling columns canonical and determinant +1.
  std::optional<Mat3> eigenbasis;

  bool positive_hyperbolic() const { return kind == SpectralKind::PositiveHyperbolic; }
};

namespace detail {

struct CubicRoots {
  int real_count = 0;  // 1 or 3
  std::array<double, 3> real{};
  double complex_re = 0.0;
  double complex_mod = 0.0;
};

/// Roots of x^3 + c2 x^2 + c1 x + c0 by the trigonometric / Cardano closed form.
inline CubicRoots solve_cubic(double c2, double c1, double c0) {
  CubicRoots out;
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (p == 0.0 && q == 0.0) {
    out.real_count = 3;
    out.real = {-shift, -shift, -shift};
    return out;
  }
  if (disc <= 0.0) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    out.real_count = 3;
    for (int k = 0; k < 3; ++k) out.real[k] = r * std::cos(phi - 2.0 * kPi * k / 3.0) - shift;
    return out;
  }
  const double s = std::sqrt(disc);
  const double u = std::cbrt(-q / 2.0 + s);
  const double v = std::cbrt(-q / 2.0 - s);
  out.real_count = 1;
  out.real[0] = u + v - shift;
  out.complex_re = -(u + v) / 2.0 - shift;
  out.complex_mod = std::sqrt(out.complex_re * out.complex_re + 0.75 * (u - v) * (u - v));
  return out;
}

inline void characteristic(const Mat3& m, double& c2, double& c1, double& c0) {
  c2 = -trace(m);
  c1 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
       m[1][1] * m[2][2] - m[1][2] * m[2][1];
  c0 = -det(m);
}

inline double newton_polish(double x, double c2, double c1, double c0) {
  const double f = ((x + c2) * x + c1) * x + c0;
  const double df = (3.0 * x + 2.0 * c2) * x + c1;
  if (df == 0.0 || !std::isfinite(df)) return x;
  const double y = x - f / df;
  return std::isfinite(y) ? y : x;
}

/// The eigenvalue of largest modulus when it is real and strictly dominant.
inline std::optional<double> dominant_real_eigenvalue(const Mat3& m) {
  double c2, c1, c0;
  characteristic(m, c2, c1, c0);
  const CubicRoots r = solve_cubic(c2, c1, c0);
  if (r.real_count == 3) {
    double best = r.real[0];
    for (double x : r.real)
      if (std::fabs(x) > std::fabs(best)) best = x;
    return newton_polish(best, c2, c1, c0);
  }
  if (std::fabs(r.real[0]) > r.complex_mod) return newton_polish(r.real[0], c2, c1, c0);
  return std::nullopt;
}

inline std::array<double, 3> real_parts_descending(const Mat3& m) {
  double c2, c1, c0;
  characteristic(m, c2, c1, c0);
  const CubicRoots r = solve_cubic(c2, c1, c0);
  std::array<double, 3> out = r.real_count == 3
                                  ? r.real
                                  : std::array<double, 3>{r.real[0], r.complex_re, r.complex_re};
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline Mat3 shifted(const Mat3& m, double lambda) {
  Mat3 r = m;
  for (std::size_t i = 0; i < 3; ++i) r[i][i] -= lambda;
  return r;
}

inline bool distinct(double a, double b) {
  return std::fabs(a - b) > 1e-8 * std::fmax(std::fabs(a), std::fabs(b));
}

}  // namespace detail

/// Spectral classification. The top eigenvalue is read from the map and the
/// bottom one from its inverse so that both keep full relative precision for
/// badly conditioned products; the middle one follows from the determinant.
inline SpectralData classify(const ProjMap& g) {
  SpectralData out;
  const Mat3& m = g.m();
  const Mat3& inv = g.inv();
  const auto top = detail::dominant_real_eigenvalue(m);
  const auto top_inv = detail::dominant_real_eigenvalue(inv);
  if (!top || !top_inv) {
    out.lambdas = detail::real_parts_descending(m);
    return out;
  }
  const double l1 = *top;
  const double l3 = 1.0 / *top_inv;
  const double l2 = g.det_sign() / (l1 * l3);
  out.lambdas = {l1, l2, l3};
  std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
  const bool hyperbolic = l3 > 0.0 && l2 > 0.0 && l1 > 0.0 && l1 >= l2 && l2 >= l3 &&
                          detail::distinct(l1, l2) && detail::distinct(l2, l3);
  if (!hyperbolic) return out;
  out.lambdas = {l1, l2, l3};
  out.kind = SpectralKind::PositiveHyperbolic;

  const Vec3 e1 = ProjPoint::canonicalize(null_direction(detail::shifted(m, l1)));
  const Vec3 e3 = ProjPoint::canonicalize(null_direction(detail::shifted(inv, *top_inv)));
  // Saddle direction: orthogonal to the left eigenvectors of the extreme eigenvalues.
  const Vec3 f1 = null_direction(detail::shifted(transpose(m), l1));
  const Vec3 f3 = null_direction(detail::shifted(transpose(inv), *top_inv));
  Vec3 e2 = cross(f1, f3);
  const double scale = max_abs(e2);
  if (scale == 0.0 || !std::isfinite(scale)) {
    out.kind = SpectralKind::Other;
    return out;
  }
  e2 = (1.0 / scale) * e2;
  const double basis_det = det(from_columns(e1, e2, e3));
  e2 = (1.0 / basis_det) * e2;
  out.fixed_points = FixedPoints{ProjPoint(e1), ProjPoint(e2), ProjPoint(e3)};
  out.eigenbasis = from_columns(e1, e2, e3);
  return out;
}

/// Hilbert translation length (1/2) log(lambda1 / lambda3).
inline double translation_length(const SpectralData& s) {
  if (!s.positive_hyperbolic()) throw Error(ErrorCode::NotHyperbolic, "map is not positive hyperbolic");
  return 0.5 * std::log(s.lambdas[0] / s.lambdas[2]);
}

inline double translation_length(const ProjMap& g) { return translation_length(classify(g)); }

/// Goldman's second boundary invariant, log(lambda2), and its rescaled form.
inline double log_middle_eigenvalue(const SpectralData& s) {
  if (!s.positive_hyperbolic()) throw Error(ErrorCode::NotHyperbolic, "map is not positive hyperbolic");
  return std::log(s.lambdas[1]);
}
inline double three_log_middle_eigenvalue(const SpectralData& s) { return 3.0 * log_middle_eigenvalue(s); }

inline ProjMap dual_map(const ProjMap& g) { return g.dual(); }

}  // namespace hilbertia
