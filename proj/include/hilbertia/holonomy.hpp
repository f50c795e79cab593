#pragma once

// Marked representations of the free group <a, b> into SL(3,R): Fuchsian pants
// and once-punctured tori pushed through the adjoint representation of SL(2,R),
// earthquake (twist) and bulging deformations along marked curves, and duals.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hilbertia/error.hpp"
#include "hilbertia/linalg.hpp"
#include "hilbertia/projective.hpp"

namespace hilbertia {

/// Freely reduced word over {a, A, b, B}, A = a^-1 and B = b^-1.
class Word {
 public:
  Word() = default;
  explicit Word(std::string letters) : letters_(std::move(letters)) {
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (!is_letter(letters_[i]))
        throw Error(ErrorCode::InvalidWord, "letter '" + std::string(1, letters_[i]) + "' not in {a,A,b,B}");
      if (i > 0 && letters_[i] == inverse_letter(letters_[i - 1]))
        throw Error(ErrorCode::InvalidWord, "word '" + letters_ + "' is not freely reduced");
    }
  }

  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  char operator[](std::size_t i) const { return letters_[i]; }

  Word inverse() const {
    std::string r(letters_.rbegin(), letters_.rend());
    for (char& c : r) c = inverse_letter(c);
    Word w;
    w.letters_ = std::move(r);
    return w;
  }

  /// Concatenation followed by free reduction.
  friend Word operator*(const Word& u, const Word& v) {
    std::string r = u.letters_;
    for (char c : v.letters_) {
      if (!r.empty() && r.back() == inverse_letter(c))
        r.pop_back();
      else
        r.push_back(c);
    }
    Word w;
    w.letters_ = std::move(r);
    return w;
  }

  friend bool operator==(const Word& u, const Word& v) { return u.letters_ == v.letters_; }
  friend bool operator<(const Word& u, const Word& v) { return u.letters_ < v.letters_; }

  static bool is_letter(char c) { return c == 'a' || c == 'A' || c == 'b' || c == 'B'; }
  static char inverse_letter(char c) {
    switch (c) {
      case 'a': return 'A';
      case 'A': return 'a';
      case 'b': return 'B';
      case 'B': return 'b';
    }
    return '?';
  }

 private:
  std::string letters_;
};

enum class Topology { Pants, PuncturedTorus };

inline std::string to_string(Topology t) { return t == Topology::Pants ? "pants" : "punctured-torus"; }

struct DeformationRecord {
  std::string curve;
  double twist = 0.0;
  double bulge = 0.0;
};

class HolonomyRep {
 public:
  HolonomyRep(Topology topology, ProjMap a, ProjMap b, std::map<std::string, Word> marking,
              std::vector<DeformationRecord> log = {})
      : topology_(topology), a_(std::move(a)), b_(std::move(b)), marking_(std::move(marking)), log_(std::move(log)) {
    refresh_inverses();
  }

  Topology topology() const { return topology_; }
  const ProjMap& a() const { return a_; }
  const ProjMap& b() const { return b_; }
  const std::map<std::string, Word>& marking() const { return marking_; }
  const std::vector<DeformationRecord>& log() const { return log_; }

  const ProjMap& generator(char c) const {
    switch (c) {
      case 'a': return a_;
      case 'A': return a_inv_;
      case 'b': return b_;
      case 'B': return b_inv_;
    }
    throw Error(ErrorCode::InvalidWord, "unknown generator");
  }

  const Word& curve(const std::string& name) const {
    const auto it = marking_.find(name);
    if (it == marking_.end()) throw Error(ErrorCode::UnknownCurve, "no marked curve named '" + name + "'");
    return it->second;
  }

  /// Product of generator images, left to right; the empty word maps to the identity.
  ProjMap evaluate(const Word& w) const {
    ProjMap m;
    for (std::size_t i = 0; i < w.size(); ++i) m = i == 0 ? generator(w[0]) : m * generator(w[i]);
    return m;
  }

  HolonomyRep with_generators(ProjMap a, ProjMap b, DeformationRecord rec) const {
    std::vector<DeformationRecord> log = log_;
    log.push_back(std::move(rec));
    return HolonomyRep(topology_, std::move(a), std::move(b), marking_, std::move(log));
  }

  HolonomyRep with_log(std::vector<DeformationRecord> log) const {
    return HolonomyRep(topology_, a_, b_, marking_, std::move(log));
  }

 private:
  void refresh_inverses() {
    a_inv_ = a_.inverse();
    b_inv_ = b_.inverse();
  }

  Topology topology_;
  ProjMap a_, b_;
  ProjMap a_inv_, b_inv_;
  std::map<std::string, Word> marking_;
  std::vector<DeformationRecord> log_;
};

inline ProjMap evaluate(const HolonomyRep& rep, const Word& w) { return rep.evaluate(w); }

// ---- Fuchsian seeds --------------------------------------------------------

namespace detail {

using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 mul2(const Mat2& x, const Mat2& y) {
  return {{{x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]},
           {x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]}}};
}

/// Adjoint action of SL(2,R) on sl(2,R) in the basis in which
/// X = [[x, y + z], [y - z, -x]] has -det X = x^2 + y^2 - z^2. The image
/// preserves the unit disk x^2 + y^2 < z^2.
inline Mat3 adjoint(const Mat2& m) {
  const Mat2 inv{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
  const Mat2 basis[3] = {{{{1, 0}, {0, -1}}}, {{{0, 1}, {1, 0}}}, {{{0, 1}, {-1, 0}}}};
  Mat3 out{};
  for (std::size_t j = 0; j < 3; ++j) {
    const Mat2 y = mul2(mul2(m, basis[j]), inv);
    out[0][j] = y[0][0];
    out[1][j] = 0.5 * (y[0][1] + y[1][0]);
    out[2][j] = 0.5 * (y[0][1] - y[1][0]);
  }
  return out;
}

/// SL(2,R) pair (A, B) with tr A = x, tr B = y, tr AB = z and A diagonal.
inline std::pair<Mat2, Mat2> sl2_pair(double x, double y, double z) {
  const double mu = 0.5 * (x + std::sqrt(x * x - 4.0));
  const Mat2 a{{{mu, 0.0}, {0.0, 1.0 / mu}}};
  const double b11 = (z - y / mu) / (mu - 1.0 / mu);
  const double b22 = y - b11;
  const double off = b11 * b22 - 1.0;
  const double r = std::sqrt(std::fabs(off));
  const Mat2 b = off >= 0.0 ? Mat2{{{b11, r}, {r, b22}}} : Mat2{{{b11, r}, {-r, b22}}};
  return {a, b};
}

}  // namespace detail

/// Hyperbolic pair of pants with boundary lengths (l1, l2, l3) for a, b and
/// (ab)^-1, built in SL(2,R) from 2 cosh(L/2) = |tr| with tr(AB) < 0 and
/// embedded in SO(2,1).
inline HolonomyRep fuchsian_pants(double l1, double l2, double l3) {
  if (!(l1 > 0.0 && l2 > 0.0 && l3 > 0.0)) throw Error(ErrorCode::InvalidInput, "pants lengths must be positive");
  const double x = 2.0 * std::cosh(0.5 * l1), y = 2.0 * std::cosh(0.5 * l2), z = -2.0 * std::cosh(0.5 * l3);
  const auto [a, b] = detail::sl2_pair(x, y, z);
  return HolonomyRep(Topology::Pants, ProjMap(detail::adjoint(a)), ProjMap(detail::adjoint(b)),
                     {{"a", Word("a")}, {"b", Word("b")}, {"c", Word("BA")}});
}

/// Once-punctured torus with l(a) = l_a, l(b) = l_b and parabolic commutator:
/// traces satisfy x^2 + y^2 + z^2 = xyz. A real solution exists iff
/// 1/x^2 + 1/y^2 <= 1/4; otherwise the lengths are too short.
inline HolonomyRep fuchsian_punctured_torus(double l_a, double l_b) {
  if (!(l_a > 0.0 && l_b > 0.0)) throw Error(ErrorCode::TooShort, "lengths must be positive");
  const double x = 2.0 * std::cosh(0.5 * l_a), y = 2.0 * std::cosh(0.5 * l_b);
  const double disc = x * x * y * y - 4.0 * (x * x + y * y);
  if (disc < 0.0)
    throw Error(ErrorCode::TooShort, "no punctured-torus structure with lengths (" + std::to_string(l_a) + ", " +
                                         std::to_string(l_b) + ")");
  const double z = 0.5 * (x * y + std::sqrt(disc));
  const auto [a, b] = detail::sl2_pair(x, y, z);
  return HolonomyRep(Topology::PuncturedTorus, ProjMap(detail::adjoint(a)), ProjMap(detail::adjoint(b)),
                     {{"a", Word("a")}, {"b", Word("b")}, {"ab", Word("ab")}});
}

// ---- deformations ----------------------------------------------------------

/// gamma_t = diag(e^t, 1, e^-t).
inline Mat3 twist_matrix(double t) { return diag3(std::exp(t), 1.0, std::exp(-t)); }

/// O_s = diag(e^{-s/3}, e^{2s/3}, e^{-s/3}).
inline Mat3 bulge_matrix(double s) { return diag3(std::exp(-s / 3.0), std::exp(2.0 * s / 3.0), std::exp(-s / 3.0)); }

/// A diagonal matrix in the eigenbasis of a positive-hyperbolic map, expressed
/// in standard coordinates. It commutes with the map.
inline ProjMap in_eigenbasis(const ProjMap& g, const Mat3& diagonal) {
  const SpectralData s = classify(g);
  if (!s.positive_hyperbolic()) throw Error(ErrorCode::NotHyperbolic, "curve holonomy is not positive hyperbolic");
  const Mat3& e = *s.eigenbasis;
  return ProjMap(e * diagonal * ((1.0 / det(e)) * adjugate(e)));
}

/// Combined twist t and bulge s along a marked curve. For the punctured torus
/// the generator crossing the curve is multiplied by the deformation (HNN
/// recipe); for pants the generators on the far side of the curve are conjugated
/// (amalgam recipe), with (ab)^-1 held fixed for the curve c.
inline HolonomyRep deform(const HolonomyRep& rep, const std::string& curve, double t, double s) {
  const Word& w = rep.curve(curve);
  const ProjMap g = rep.evaluate(w);
  DeformationRecord rec{curve, t, s};
  if (t == 0.0 && s == 0.0) {
    if (!classify(g).positive_hyperbolic())
      throw Error(ErrorCode::NotHyperbolic, "curve holonomy is not positive hyperbolic");
    return rep.with_generators(rep.a(), rep.b(), rec);
  }
  const ProjMap d = in_eigenbasis(g, twist_matrix(t) * bulge_matrix(s));
  const ProjMap d_inv = d.inverse();
  if (rep.topology() == Topology::PuncturedTorus) {
    if (curve == "a") return rep.with_generators(rep.a(), d * rep.b(), rec);
    if (curve == "b") return rep.with_generators(d * rep.a(), rep.b(), rec);
    throw Error(ErrorCode::UnknownCurve, "punctured-torus deformations are defined along a or b");
  }
  if (curve == "a") return rep.with_generators(rep.a(), d * rep.b() * d_inv, rec);
  if (curve == "b") return rep.with_generators(d * rep.a() * d_inv, rep.b(), rec);
  if (curve == "c") {
    const ProjMap a2 = d * rep.a() * d_inv;
    return rep.with_generators(a2, a2.inverse() * g.inverse(), rec);
  }
  throw Error(ErrorCode::UnknownCurve, "pants deformations are defined along a, b or c");
}

inline HolonomyRep twist_deform(const HolonomyRep& rep, const std::string& curve, double t) {
  return deform(rep, curve, t, 0.0);
}

inline HolonomyRep bulge_deform(const HolonomyRep& rep, const std::string& curve, double s) {
  return deform(rep, curve, 0.0, s);
}

/// Every generator replaced by its inverse-transpose.
inline HolonomyRep dual_structure(const HolonomyRep& rep) {
  return HolonomyRep(rep.topology(), rep.a().dual(), rep.b().dual(), rep.marking(), rep.log());
}

/// Conjugate representation g rho g^-1.
inline HolonomyRep conjugated(const HolonomyRep& rep, const ProjMap& g) {
  const ProjMap gi = g.inverse();
  return HolonomyRep(rep.topology(), g * rep.a() * gi, g * rep.b() * gi, rep.marking(), rep.log());
}

// ---- word enumeration ------------------------------------------------------

/// Depth-first visit of all nonempty reduced words of length <= maxlen together
/// with their holonomy. Order is deterministic.
inline void for_each_reduced_word(const HolonomyRep& rep, int maxlen,
                                  const std::function<void(const std::string&, const ProjMap&)>& visit) {
  static constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};
  std::string word;
  std::vector<ProjMap> stack;
  std::function<void()> recurse = [&]() {
    for (char c : kLetters) {
      if (!word.empty() && word.back() == Word::inverse_letter(c)) continue;
      const ProjMap& g = rep.generator(c);
      word.push_back(c);
      stack.push_back(stack.empty() ? g : stack.back() * g);
      visit(word, stack.back());
      if (static_cast<int>(word.size()) < maxlen) recurse();
      word.pop_back();
      stack.pop_back();
    }
  };
  if (maxlen > 0) recurse();
}

}  // namespace hilbertia
