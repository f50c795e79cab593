#pragma once

// Counting and measures on the free group <a, b>: unoriented conjugacy
// classes, marked length spectra, growth-rate estimators, the Busemann
// cocycle, Patterson-Sullivan and Bowen-Margulis measures, and geodesic
// currents with their intersection form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hilbertia/domain.hpp"
#include "hilbertia/error.hpp"
#include "hilbertia/holonomy.hpp"
#include "hilbertia/metric.hpp"
#include "hilbertia/orbit.hpp"
#include "hilbertia/projective.hpp"

namespace hilbertia {

// ---- conjugacy classes -----------------------------------------------------

namespace detail {

// Letter order a < A < b < B, so that canonical names read naturally ("ab",
// "aB", "aa").
inline int letter_rank(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
  }
  return 4;
}

inline bool rotation_less(const std::string& s, std::size_t i, std::size_t j) {
  const std::size_t n = s.size();
  for (std::size_t k = 0; k < n; ++k) {
    const int x = letter_rank(s[(i + k) % n]), y = letter_rank(s[(j + k) % n]);
    if (x != y) return x < y;
  }
  return false;
}

inline std::string min_rotation(const std::string& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (rotation_less(s, i, best)) best = i;
  return s.substr(best) + s.substr(0, best);
}

inline bool ranked_less(const std::string& x, const std::string& y) {
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    const int p = letter_rank(x[k]), q = letter_rank(y[k]);
    if (p != q) return p < q;
  }
  return x.size() < y.size();
}

}  // namespace detail

/// Removes matching first/last letters until the word is cyclically reduced.
inline Word cyclic_reduce(const Word& w) {
  const std::string& s = w.letters();
  std::size_t i = 0, j = s.size();
  while (j - i >= 2 && s[j - 1] == Word::inverse_letter(s[i])) {
    ++i;
    --j;
  }
  return Word(s.substr(i, j - i));
}

/// Unoriented conjugacy class of a nontrivial element, named by the least
/// rotation of the cyclically reduced word or of its inverse.
struct ConjClass {
  Word representative;

  friend bool operator==(const ConjClass& x, const ConjClass& y) { return x.representative == y.representative; }
  friend bool operator<(const ConjClass& x, const ConjClass& y) {
    return x.representative.size() != y.representative.size()
               ? x.representative.size() < y.representative.size()
               : detail::ranked_less(x.representative.letters(), y.representative.letters());
  }
};

inline ConjClass conj_class(const Word& w) {
  const Word r = cyclic_reduce(w);
  if (r.empty()) throw Error(ErrorCode::InvalidWord, "the trivial class has no representative");
  const std::string p = detail::min_rotation(r.letters());
  const std::string q = detail::min_rotation(r.inverse().letters());
  return {Word(detail::ranked_less(q, p) ? q : p)};
}

/// One representative per unoriented class of cyclic length <= maxlen, ordered
/// by length and then by letter rank.
inline std::vector<ConjClass> conjugacy_classes(int maxlen) {
  std::vector<ConjClass> out;
  static constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};
  std::string w;
  std::function<void(std::size_t)> grow = [&](std::size_t n) {
    if (w.size() == n) {
      if (w.size() > 1 && w.back() == Word::inverse_letter(w.front())) return;
      // Canonical iff no rotation of w or of its inverse is smaller.
      for (std::size_t i = 1; i < n; ++i)
        if (detail::rotation_less(w, i, 0)) return;
      std::string inv(w.rbegin(), w.rend());
      for (char& c : inv) c = Word::inverse_letter(c);
      if (detail::ranked_less(detail::min_rotation(inv), w)) return;
      out.push_back({Word(w)});
      return;
    }
    for (char c : kLetters) {
      if (!w.empty() && w.back() == Word::inverse_letter(c)) continue;
      // A canonical word starts with its least letter.
      if (!w.empty() && detail::letter_rank(c) < detail::letter_rank(w.front())) continue;
      w.push_back(c);
      grow(n);
      w.pop_back();
    }
  };
  for (int n = 1; n <= maxlen; ++n) grow(static_cast<std::size_t>(n));
  return out;
}

// ---- length spectra --------------------------------------------------------

struct SpectrumEntry {
  ConjClass cls;
  double length = 0.0;
};

struct LengthSpectrum {
  std::vector<SpectrumEntry> entries;
  std::vector<ConjClass> skipped;  // classes whose holonomy is not positive hyperbolic
  int max_word_length = 0;

  /// Smallest length among classes of the maximal word length; classes shorter
  /// than this are (heuristically) all present.
  double completeness_length() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : entries)
      if (static_cast<int>(e.cls.representative.size()) == max_word_length) m = std::fmin(m, e.length);
    return m;
  }
};

inline LengthSpectrum length_spectrum(const HolonomyRep& rep, int maxlen) {
  LengthSpectrum s;
  s.max_word_length = maxlen;
  for (const auto& c : conjugacy_classes(maxlen)) {
    const ProjMap g = rep.evaluate(c.representative);
    // Round-off splits the spectrum of a cusp by about eps^(1/3), enough to
    // pass for hyperbolic; the Jordan-block test does not look at eigenvalues.
    const SpectralData sd = parabolic_fixed_point(g) ? SpectralData{} : classify(g);
    if (sd.positive_hyperbolic())
      s.entries.push_back({c, translation_length(sd)});
    else
      s.skipped.push_back(c);
  }
  return s;
}

// ---- growth rates ----------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
  std::size_t points = 0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  LinearFit f;
  f.points = n;
  if (n < 3) throw Error(ErrorCode::InsufficientData, "line fit needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientData, "degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.slope_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return f;
}

struct EntropyEstimate {
  double value = 0.0;       // slope of log N(s)
  double std_error = 0.0;   // regression standard error of the slope
  double bowen = 0.0;       // h solving log(N h s) ~ h s + c
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t classes_in_window = 0;
};

namespace detail {

/// Growth rate of the counting function of sorted values over [lo, hi],
/// sampled at `nodes` evenly spaced abscissae.
inline EntropyEstimate growth_fit(const std::vector<double>& sorted, double lo, double hi, int nodes = 64) {
  EntropyEstimate e;
  e.window_lo = lo;
  e.window_hi = hi;
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  const auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
  e.classes_in_window = static_cast<std::size_t>(last - first);
  if (e.classes_in_window < 20 || !(hi > lo))
    throw Error(ErrorCode::InsufficientData,
                std::to_string(e.classes_in_window) + " values in window [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "], need 20");
  std::vector<double> xs, ys, ns;
  for (int i = 0; i < nodes; ++i) {
    const double s = lo + (hi - lo) * i / (nodes - 1);
    const auto n = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), s) - sorted.begin());
    if (n <= 0.0) continue;
    xs.push_back(s);
    ys.push_back(std::log(n));
    ns.push_back(n);
  }
  const LinearFit f = fit_line(xs, ys);
  e.value = f.slope;
  e.std_error = f.slope_error;
  // Bowen: N(s) ~ e^{hs} / (hs). Fixed point of h -> slope of log(N h s).
  double h = std::fmax(f.slope, 1e-3);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> yb(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) yb[i] = ys[i] + std::log(h * xs[i]);
    const double next = fit_line(xs, yb).slope;
    if (std::fabs(next - h) < 1e-12) {
      h = next;
      break;
    }
    h = std::fmax(next, 1e-3);
  }
  e.bowen = h;
  return e;
}

}  // namespace detail

/// Slope of log #{classes : length <= s} over the window. The default window
/// is [0.3 L, 0.9 L] with L the completeness length of the spectrum.
inline EntropyEstimate entropy_estimate(const LengthSpectrum& spectrum, std::optional<std::pair<double, double>> window = {}) {
  std::vector<double> lengths;
  lengths.reserve(spectrum.entries.size());
  for (const auto& e : spectrum.entries) lengths.push_back(e.length);
  std::sort(lengths.begin(), lengths.end());
  if (!window) {
    const double l = spectrum.completeness_length();
    if (!std::isfinite(l)) throw Error(ErrorCode::InsufficientData, "empty spectrum");
    window = {0.3 * l, 0.9 * l};
  }
  return detail::growth_fit(lengths, window->first, window->second);
}

namespace detail {

/// d(o, g o) for words g of a representation preserving `domain`. When the
/// domain is an ellipse whose conic the generators preserve, Q(g o) = Q(o)
/// exactly, so cosh d = |B(o, g o)| / |Q(o)| keeps full precision for long
/// words. Otherwise the image is dehomogenized; images that are no longer
/// representable as interior points get +infinity.
class OrbitMetric {
 public:
  OrbitMetric(const HolonomyRep& rep, const ConvexDomain& domain, const Vec2& o)
      : domain_(domain), o_(o), oh_(lift(o)) {
    domain.require_interior(o, "o");
    if (domain.is_ellipse()) {
      const Mat3& q = domain.conic();
      auto preserves = [&](const ProjMap& g) {
        return max_abs_diff(transpose(g.m()) * q * g.m(), q) <= 1e-9 * max_abs(q);
      };
      conic_invariant_ = preserves(rep.a()) && preserves(rep.b());
      qo_ = dot(oh_, q * oh_);
    }
  }

  double operator()(const ProjMap& g) const {
    const Vec3 go = g.apply(oh_);
    if (conic_invariant_) {
      const double c = std::fabs(dot(oh_, domain_.conic() * go) / qo_);
      if (c > 1.5) return std::acosh(c);
      return ellipse_distance_h(domain_.conic(), oh_, go);
    }
    if (!(std::fabs(go[2]) > 0.0)) return std::numeric_limits<double>::infinity();
    const Vec2 y{go[0] / go[2], go[1] / go[2]};
    if (!domain_.interior(y)) return std::numeric_limits<double>::infinity();
    if (domain_.is_ellipse()) return ellipse_distance_h(domain_.conic(), oh_, go);
    return distance(domain_, o_, y);
  }

  bool conic_invariant() const { return conic_invariant_; }

 private:
  const ConvexDomain& domain_;
  Vec2 o_;
  Vec3 oh_;
  bool conic_invariant_ = false;
  double qo_ = 0.0;
};

}  // namespace detail

struct OrbitCount {
  std::vector<double> distances;  // sorted d(o, g o) over nontrivial words
  double complete_radius = 0.0;   // all elements with d <= this have word length <= maxlen
};

/// Distances d(o, g o) for all reduced words of length <= maxlen. The
/// completeness radius is the smallest distance at the maximal word length,
/// capped below the first distance lost to floating point.
inline OrbitCount orbit_distances(const HolonomyRep& rep, const ConvexDomain& domain, const Vec2& o, int maxlen) {
  const detail::OrbitMetric metric(rep, domain, o);
  OrbitCount c;
  c.complete_radius = std::numeric_limits<double>::infinity();
  double lost_after = std::numeric_limits<double>::infinity();
  for_each_reduced_word(rep, maxlen, [&](const std::string& w, const ProjMap& g) {
    const double d = metric(g);
    if (!std::isfinite(d)) {
      // Shorter prefixes of this word were still representable.
      lost_after = std::fmin(lost_after, c.distances.empty() ? 0.0 : c.distances.back());
      return;
    }
    c.distances.push_back(d);
    if (static_cast<int>(w.size()) == maxlen) c.complete_radius = std::fmin(c.complete_radius, d);
  });
  c.complete_radius = std::fmin(c.complete_radius, lost_after);
  std::sort(c.distances.begin(), c.distances.end());
  return c;
}

/// Growth rate of #{g : d(o, g o) <= R} over [0.3, 0.9] of the completeness
/// radius unless a window is given.
inline EntropyEstimate critical_exponent_estimate(const HolonomyRep& rep, const ConvexDomain& domain, const Vec2& o,
                                                  int maxlen,
                                                  std::optional<std::pair<double, double>> window = {}) {
  const OrbitCount c = orbit_distances(rep, domain, o, maxlen);
  if (!window) window = {0.3 * c.complete_radius, 0.9 * c.complete_radius};
  return detail::growth_fit(c.distances, window->first, window->second);
}

inline double critical_exponent(const HolonomyRep& rep, const ConvexDomain& domain, const Vec2& o, int maxlen) {
  return critical_exponent_estimate(rep, domain, o, maxlen).value;
}

// ---- Busemann cocycle ------------------------------------------------------

/// c(g, xi) = B_xi(o, g^-1 o).
inline double busemann_cocycle(const ConvexDomain& domain, const HolonomyRep& rep, const Word& w, const Vec2& xi,
                               const Vec2& o, const BusemannOptions& opt = {}) {
  if (w.empty()) return 0.0;
  const Vec3 y = rep.evaluate(w).inverse().apply(lift(o));
  if (domain.is_ellipse()) {
    if (std::fabs(domain.depth_inside(xi)) > 1e-8) throw Error(ErrorCode::NotOnBoundary, "xi is not on the boundary");
    return busemann_ellipse_h(domain.conic(), lift(o), y, lift(xi));
  }
  return busemann_function(domain, o, {y[0] / y[2], y[1] / y[2]}, xi, opt);
}

/// Uniformly random nonempty reduced word of length 1..maxlen.
template <class Rng>
Word random_word(Rng& rng, int maxlen) {
  static constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};
  std::uniform_int_distribution<int> len(1, maxlen), pick(0, 3), next(0, 2);
  std::string w(1, kLetters[pick(rng)]);
  const int n = len(rng);
  while (static_cast<int>(w.size()) < n) {
    // Three choices avoid the inverse of the last letter.
    const int k = next(rng);
    std::string ok;
    for (char c : kLetters)
      if (c != Word::inverse_letter(w.back())) ok.push_back(c);
    w.push_back(ok[static_cast<std::size_t>(k)]);
  }
  return Word(w);
}

struct CocycleReport {
  int triples = 0;
  double max_cocycle_error = 0.0;  // |c(g0 g1, xi) - c(g0, g1 xi) - c(g1, xi)|
  double max_period_error = 0.0;   // |c(g, g+) - l(g)| over positive-hyperbolic g0
  int periods = 0;
};

/// Cocycle and period identities over random triples (g0, g1, xi): words of
/// length <= maxlen and xi the boundary point in a uniformly random direction
/// from o.
inline CocycleReport cocycle_check(const HolonomyRep& rep, const ConvexDomain& domain, const Vec2& o, int triples,
                                   std::uint64_t seed = 0xC0FFEE, int maxlen = 3, const BusemannOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  CocycleReport r;
  for (int k = 0; k < triples; ++k) {
    const Word g0 = random_word(rng, maxlen), g1 = random_word(rng, maxlen);
    const double th = angle(rng);
    const Vec2 v{std::cos(th), std::sin(th)};
    const Vec2 xi = o + domain.chord_params(o, v).t_plus * v;
    const Vec3 h = rep.evaluate(g1).apply(lift(xi));
    const Vec2 g1xi{h[0] / h[2], h[1] / h[2]};
    const double lhs = busemann_cocycle(domain, rep, g0 * g1, xi, o, opt);
    const double rhs = busemann_cocycle(domain, rep, g0, g1xi, o, opt) + busemann_cocycle(domain, rep, g1, xi, o, opt);
    r.max_cocycle_error = std::fmax(r.max_cocycle_error, std::fabs(lhs - rhs));
    ++r.triples;
    const SpectralData sd = classify(rep.evaluate(g0));
    if (sd.positive_hyperbolic()) {
      const Vec2 plus = sd.fixed_points->attracting.affine();
      const double period = busemann_cocycle(domain, rep, g0, plus, o, opt);
      r.max_period_error = std::fmax(r.max_period_error, std::fabs(period - translation_length(sd)));
      ++r.periods;
    }
  }
  return r;
}

// ---- boundary measures -----------------------------------------------------

struct BoundaryAtom {
  Vec2 point;
  double weight = 0.0;
};

struct BoundaryMeasure {
  std::vector<BoundaryAtom> atoms;
  double total = 0.0;
  /// Share of the mass carried by words of the maximal length; a large value
  /// means the truncated Poincare series is far from its limit.
  double tail_share = 0.0;

  /// Mass of atoms whose angle about c lies in the arc from a0 counterclockwise to a1.
  double arc_mass(const Vec2& c, double a0, double a1) const {
    const double span = std::fmod(std::fmod(a1 - a0, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    double m = 0.0;
    for (const auto& at : atoms) {
      const double r = std::fmod(std::fmod(angle_about(c, at.point) - a0, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
      if (r < span) m += at.weight;
    }
    return m;
  }
};

/// Discrete Patterson-Sullivan measure: an atom of weight e^{-exponent d(o, g o)}
/// at the shadow of g o (the chord endpoint from o through g o) for every word
/// of length <= maxlen. Normalized to total mass 1.
inline BoundaryMeasure patterson_sullivan(const HolonomyRep& rep, const ConvexDomain& domain, double exponent,
                                          const Vec2& o, int maxlen) {
  const detail::OrbitMetric metric(rep, domain, o);
  BoundaryMeasure mu;
  double tail = 0.0;
  const Vec3 oh = lift(o);
  for_each_reduced_word(rep, maxlen, [&](const std::string& w, const ProjMap& g) {
    const Vec3 go = g.apply(oh);
    const Vec2 y{go[0] / go[2], go[1] / go[2]};
    if (norm(y - o) < 1e-14) return;
    const double d = metric(g);
    if (!std::isfinite(d)) return;
    const double wt = std::exp(-exponent * d);
    const Vec2 v = y - o;
    mu.atoms.push_back({o + domain.chord_params(o, v).t_plus * v, wt});
    mu.total += wt;
    if (static_cast<int>(w.size()) == maxlen) tail += wt;
  });
  if (mu.atoms.size() < 2) throw Error(ErrorCode::InsufficientData, "too few orbit points");
  for (auto& at : mu.atoms) at.weight /= mu.total;
  mu.tail_share = tail / mu.total;
  mu.total = 1.0;
  return mu;
}

// ---- geodesic currents -----------------------------------------------------

struct CurrentAtom {
  Vec2 xi_minus;
  Vec2 xi_plus;
  double w = 0.0;
};

/// The lift of a closed curve that a class current is built around: its axis
/// endpoints, holonomy and translation length.
struct CurrentBase {
  Vec2 p_minus;
  Vec2 p_plus;
  ProjMap gamma;
  double length = 0.0;
  double weight = 1.0;
};

struct GeodesicCurrent {
  std::vector<CurrentAtom> atoms;
  std::uint64_t domain_key = 0;  // fingerprint of the boundary the atoms lie on
  Vec2 center{0.0, 0.0};         // interior point used for cyclic order
  std::optional<CurrentBase> base;

  GeodesicCurrent scaled(double lambda) const {
    GeodesicCurrent c = *this;
    for (auto& a : c.atoms) a.w *= lambda;
    if (c.base) c.base->weight *= lambda;
    return c;
  }
};

/// FNV-1a over the defining numbers of a domain.
inline std::uint64_t domain_fingerprint(const ConvexDomain& d) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  if (d.is_ellipse()) {
    for (const auto& row : d.conic())
      for (double x : row) mix(x);
  } else {
    mix(static_cast<double>(d.vertices().size()));
    for (const auto& v : d.vertices()) {
      mix(v[0]);
      mix(v[1]);
    }
  }
  return h;
}

/// Bowen-Margulis current: weight e^{2 exponent gp(z, e)} w_z w_e on every
/// unordered pair of distinct atoms, where gp is the Gromov product at o of
/// points pulled 1e-4 inside from the atoms along chords from o.
inline GeodesicCurrent bowen_margulis_current(const BoundaryMeasure& mu, const ConvexDomain& domain, const Vec2& o,
                                              double exponent) {
  if (mu.atoms.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least 2 atoms");
  std::vector<Vec2> inner;
  std::vector<double> d_o;
  inner.reserve(mu.atoms.size());
  for (const auto& at : mu.atoms) {
    const Vec2 p = o + (1.0 - 1e-4) * (at.point - o);
    inner.push_back(p);
    d_o.push_back(distance(domain, o, p));
  }
  GeodesicCurrent c;
  c.domain_key = domain_fingerprint(domain);
  c.center = o;
  for (std::size_t i = 0; i < inner.size(); ++i)
    for (std::size_t j = i + 1; j < inner.size(); ++j) {
      if (norm(mu.atoms[i].point - mu.atoms[j].point) < 1e-12) continue;
      const double gp = 0.5 * (d_o[i] + d_o[j] - distance(domain, inner[i], inner[j]));
      c.atoms.push_back(
          {mu.atoms[i].point, mu.atoms[j].point, std::exp(2.0 * exponent * gp) * mu.atoms[i].weight * mu.atoms[j].weight});
    }
  return c;
}

/// Unit atoms at the axes of the distinct conjugates w g w^-1 over reduced
/// words w of length <= maxlen (w empty included). Each conjugate is reduced to
/// u r u^-1 with r a cyclic rotation of the representative and no cancellation;
/// distinct conjugates are exactly distinct reduced words, and the endpoints
/// are u applied to the fixed points of r, which keeps them well conditioned
/// (u never ends in a power of r).
inline GeodesicCurrent current_from_class(const HolonomyRep& rep, const ConvexDomain& domain, const ConjClass& cls,
                                          int maxlen) {
  const Word& r0 = cls.representative;
  const ProjMap g = rep.evaluate(r0);
  const SpectralData sd = classify(g);
  if (!sd.positive_hyperbolic()) throw Error(ErrorCode::NotHyperbolic, "class holonomy is not positive hyperbolic");
  GeodesicCurrent c;
  c.domain_key = domain_fingerprint(domain);
  c.center = domain.centroid();
  c.base = CurrentBase{sd.fixed_points->repelling.affine(), sd.fixed_points->attracting.affine(), g,
                       translation_length(sd), 1.0};

  std::map<std::string, std::pair<Vec3, Vec3>> rotation_axes;  // core word -> (repelling, attracting)
  auto axis_of_core = [&](const std::string& core) {
    auto it = rotation_axes.find(core);
    if (it != rotation_axes.end()) return it->second;
    const SpectralData s = classify(rep.evaluate(Word(core)));
    if (!s.positive_hyperbolic()) throw Error(ErrorCode::NotHyperbolic, "rotated class holonomy is not hyperbolic");
    const auto v = std::make_pair(s.fixed_points->repelling.h(), s.fixed_points->attracting.h());
    rotation_axes.emplace(core, v);
    return v;
  };
  std::set<std::string> seen;
  auto add = [&](const Word& w) {
    const std::string conj = (w * r0 * w.inverse()).letters();
    if (!seen.insert(conj).second) return;
    std::size_t k = 0;
    while (2 * k + 2 <= conj.size() && conj[conj.size() - 1 - k] == Word::inverse_letter(conj[k])) ++k;
    const std::string core = conj.substr(k, conj.size() - 2 * k);
    const ProjMap u = rep.evaluate(Word(conj.substr(0, k)));
    const auto [rp, at] = axis_of_core(core);
    const Vec3 p = u.apply(rp), q = u.apply(at);
    c.atoms.push_back({{p[0] / p[2], p[1] / p[2]}, {q[0] / q[2], q[1] / q[2]}, 1.0});
  };
  add(Word());
  for_each_reduced_word(rep, maxlen, [&](const std::string& w, const ProjMap&) { add(Word(w)); });
  return c;
}

enum class IntersectionScale {
  Raw,        // total product mass of linked atom pairs
  PerPeriod,  // crossings of one lift per fundamental segment, symmetrized
};

namespace detail {

inline bool atoms_link(const Vec2& c, const CurrentAtom& x, const CurrentAtom& y) {
  return chords_linked(c, x.xi_minus, x.xi_plus, y.xi_minus, y.xi_plus);
}

/// Weighted count of atoms of `other` crossing the base axis of `cur` inside
/// one fundamental segment of its holonomy.
inline double crossings_per_period(const GeodesicCurrent& cur, const GeodesicCurrent& other) {
  const CurrentBase& b = *cur.base;
  const Vec2 axis = b.p_plus - b.p_minus;
  const Vec2 mid = b.p_minus + 0.5 * axis;
  // Signed Hilbert position along the axis, up to an additive constant.
  auto position = [&](const Vec2& z) {
    return 0.5 * std::log(norm(z - b.p_minus) / norm(z - b.p_plus));
  };
  // Segment start offset by an irrational fraction of the period so that
  // symmetric configurations do not put crossings on the segment ends.
  const double origin = position(mid) - 0.3819660112501051 * b.length;
  const CurrentAtom base_atom{b.p_minus, b.p_plus, b.weight};
  double sum = 0.0;
  for (const auto& a : other.atoms) {
    if (!atoms_link(cur.center, base_atom, a)) continue;
    const Vec2 e = a.xi_plus - a.xi_minus;
    const double den = cross(axis, e);
    if (den == 0.0) continue;
    const double t = cross(a.xi_minus - b.p_minus, e) / den;
    const double s = position(b.p_minus + t * axis) - origin;
    if (s >= 0.0 && s < b.length) sum += a.w;
  }
  return b.weight * sum;
}

}  // namespace detail

/// Intersection form. Raw sums w_x w_y over linked atom pairs; PerPeriod needs
/// class currents and counts the lifts of each curve crossing one fundamental
/// segment of the other's axis, averaged over the two directions.
inline double intersection_number(const GeodesicCurrent& a, const GeodesicCurrent& b,
                                  IntersectionScale scale = IntersectionScale::PerPeriod) {
  if (a.domain_key != b.domain_key)
    throw Error(ErrorCode::MismatchedBoundary, "currents live on different boundaries");
  if (scale == IntersectionScale::Raw) {
    // Fixed summation order so that i(A, B) and i(B, A) agree bit for bit.
    const bool swap = b.atoms.size() < a.atoms.size() ||
                      (b.atoms.size() == a.atoms.size() && !b.atoms.empty() &&
                       std::tie(b.atoms[0].xi_minus, b.atoms[0].xi_plus) < std::tie(a.atoms[0].xi_minus, a.atoms[0].xi_plus));
    const GeodesicCurrent& x = swap ? b : a;
    const GeodesicCurrent& y = swap ? a : b;
    double s = 0.0;
    for (const auto& p : x.atoms)
      for (const auto& q : y.atoms)
        if (detail::atoms_link(x.center, p, q)) s += p.w * q.w;
    return s;
  }
  if (!a.base || !b.base) throw Error(ErrorCode::InvalidInput, "per-period normalization needs class currents");
  return 0.5 * (detail::crossings_per_period(a, b) + detail::crossings_per_period(b, a));
}

}  // namespace hilbertia
