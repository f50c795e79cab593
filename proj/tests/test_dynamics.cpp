#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

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

std::string invert(const std::string& w) {
  std::string r(w.rbegin(), w.rend());
  for (char& c : r) c = Word::inverse_letter(c);
  return r;
}

// Unoriented classes by brute force: every cyclically reduced word, keyed by
// the least rotation of itself or its inverse in plain string order.
std::size_t brute_class_count(int maxlen) {
  std::set<std::string> keys;
  const std::string letters = "aAbB";
  std::vector<std::string> layer = {""};
  for (int n = 1; n <= maxlen; ++n) {
    std::vector<std::string> next;
    for (const auto& w : layer)
      for (char c : letters)
        if (w.empty() || w.back() != Word::inverse_letter(c)) next.push_back(w + c);
    for (const auto& w : next) {
      if (w.size() > 1 && w.back() == Word::inverse_letter(w.front())) continue;
      std::string best = w;
      for (const std::string& v : {w, invert(w)})
        for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, v.substr(i) + v.substr(0, i));
      keys.insert(best);
    }
    layer = std::move(next);
  }
  return keys.size();
}

// Largest s with Z_n(s) >= Z_{n-1}(s), Z_k the Poincare sum over the words of
// length exactly k, for a representation preserving the unit disk.
double shell_ratio_exponent(const HolonomyRep& rep, int n) {
  const Mat3 q = ConvexDomain::disk().conic();
  const Vec3 o{0, 0, 1};
  std::vector<double> last, prev;
  for_each_reduced_word(rep, n, [&](const std::string& w, const ProjMap& g) {
    const double d = std::acosh(std::fabs(dot(o, q * g.apply(o)) / dot(o, q * o)));
    if (static_cast<int>(w.size()) == n) last.push_back(d);
    if (static_cast<int>(w.size()) == n - 1) prev.push_back(d);
  });
  auto Z = [](const std::vector<double>& ds, double s) {
    double z = 0;
    for (double d : ds) z += std::exp(-s * d);
    return z;
  };
  double lo = 0.01, hi = 2.0;
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (lo + hi);
    (Z(last, m) > Z(prev, m) ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(ConjugacyClasses, CountMatchesBruteForce) {
  for (int l = 1; l <= 7; ++l) EXPECT_EQ(conjugacy_classes(l).size(), brute_class_count(l)) << "maxlen " << l;
}

TEST(ConjugacyClasses, RepresentativesAreDistinctAndCanonical) {
  const auto cs = conjugacy_classes(6);
  std::set<std::string> seen;
  for (const auto& c : cs) {
    EXPECT_TRUE(seen.insert(c.representative.letters()).second);
    EXPECT_EQ(conj_class(c.representative), c);
  }
}

TEST(ConjClass, InvariantUnderRotationAndInverse) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const Word w = random_word(rng, 9);
    const ConjClass c = conj_class(w * w);  // squares are never trivial
    const std::string s = (w * w).letters();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string r = s.substr(i) + s.substr(0, i);
      bool reduced = true;
      for (std::size_t j = 0; j + 1 < r.size(); ++j) reduced &= r[j + 1] != Word::inverse_letter(r[j]);
      if (reduced) EXPECT_EQ(conj_class(Word(r)), c);
    }
    EXPECT_EQ(conj_class((w * w).inverse()), c);
    EXPECT_EQ(conj_class(Word("b") * w * w * Word("B")), c);
  }
}

TEST(ConjClass, TrivialClassIsRejected) { EXPECT_EQ(code_of([] { conj_class(Word("")); }), ErrorCode::InvalidWord); }

TEST(LengthSpectrum, FuchsianPantsAreAllHyperbolic) {
  const LengthSpectrum s = length_spectrum(fuchsian_pants(2, 2, 2), 2);
  EXPECT_EQ(s.entries.size(), conjugacy_classes(2).size());
  EXPECT_TRUE(s.skipped.empty());
}

TEST(LengthSpectrum, TorusCommutatorIsSkipped) {
  const LengthSpectrum s = length_spectrum(fuchsian_punctured_torus(2, 2), 4);
  ASSERT_EQ(s.skipped.size(), 1u);
  EXPECT_EQ(s.skipped[0], conj_class(Word("abAB")));
}

TEST(Entropy, ScalesInverselyWithLength) {
  const LengthSpectrum s = length_spectrum(fuchsian_pants(2, 2, 2), 10);
  LengthSpectrum t = s;
  for (auto& e : t.entries) e.length *= 2;
  const EntropyEstimate a = entropy_estimate(s, std::make_pair(3.0, 9.0));
  const EntropyEstimate b = entropy_estimate(t, std::make_pair(6.0, 18.0));
  EXPECT_NEAR(b.value, 0.5 * a.value, 1e-12);
  EXPECT_NEAR(b.bowen, 0.5 * a.bowen, 1e-6);
}

TEST(Entropy, InsufficientData) {
  LengthSpectrum empty;
  empty.max_word_length = 3;
  EXPECT_EQ(code_of([&] { entropy_estimate(empty); }), ErrorCode::InsufficientData);
  const LengthSpectrum s = length_spectrum(fuchsian_pants(2, 2, 2), 3);
  EXPECT_EQ(code_of([&] { entropy_estimate(s, std::make_pair(100.0, 200.0)); }), ErrorCode::InsufficientData);
}

TEST(CriticalExponent, AgreesWithShellRatio) {
  const HolonomyRep rep = fuchsian_pants(2, 2, 2);
  const double oracle = shell_ratio_exponent(rep, 12);
  EXPECT_NEAR(critical_exponent(rep, ConvexDomain::disk(), {0, 0}, 12), oracle, 0.05);
  EXPECT_LT(oracle, 1.0);
}

TEST(CriticalExponent, IndependentOfBasepoint) {
  const HolonomyRep rep = fuchsian_pants(2, 2, 2);
  const ConvexDomain disk = ConvexDomain::disk();
  const auto w = std::make_pair(4.0, 12.0);
  const double x = critical_exponent_estimate(rep, disk, {0, 0}, 12, w).value;
  const double y = critical_exponent_estimate(rep, disk, {0.2, -0.1}, 12, w).value;
  EXPECT_LT(std::fabs(x - y), 0.02);
}

TEST(Cocycle, IdentitiesHoldOnTheDisk) {
  const CocycleReport r = cocycle_check(fuchsian_pants(2, 2, 2), ConvexDomain::disk(), {0.1, -0.05}, 50, 7, 2);
  EXPECT_EQ(r.triples, 50);
  EXPECT_GT(r.periods, 0);
  EXPECT_LT(r.max_cocycle_error, 1e-6);
  EXPECT_LT(r.max_period_error, 1e-8);
}

TEST(Cocycle, EmptyWordIsZero) {
  EXPECT_EQ(busemann_cocycle(ConvexDomain::disk(), fuchsian_pants(1, 1, 1), Word(""), {1, 0}, {0, 0}), 0.0);
}

TEST(PattersonSullivan, ProbabilityMeasure) {
  const BoundaryMeasure mu = patterson_sullivan(fuchsian_pants(2, 2, 2), ConvexDomain::disk(), 0.57, {0, 0}, 6);
  double sum = 0;
  for (const auto& a : mu.atoms) {
    sum += a.weight;
    EXPECT_NEAR(norm(a.point), 1.0, 1e-9);
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(mu.total, 1.0, 1e-12);
  EXPECT_NEAR(mu.arc_mass({0, 0}, 0.0, 2 * kPi - 1e-12), 1.0, 1e-9);
}

TEST(Currents, IntersectionNumbers) {
  const ConvexDomain disk = ConvexDomain::disk();
  const HolonomyRep pants = fuchsian_pants(2, 2, 2), torus = fuchsian_punctured_torus(2, 2);
  auto cur = [&](const HolonomyRep& r, const char* w) { return current_from_class(r, disk, conj_class(Word(w)), 6); };
  EXPECT_EQ(intersection_number(cur(pants, "a"), cur(pants, "a")), 0.0);
  EXPECT_EQ(intersection_number(cur(pants, "a"), cur(pants, "b")), 0.0);
  EXPECT_EQ(intersection_number(cur(torus, "a"), cur(torus, "b")), 1.0);
  EXPECT_EQ(intersection_number(cur(torus, "a").scaled(2.0), cur(torus, "b")), 2.0);
}

TEST(Currents, RawIsSymmetric) {
  const ConvexDomain disk = ConvexDomain::disk();
  const HolonomyRep torus = fuchsian_punctured_torus(2, 2);
  const GeodesicCurrent a = current_from_class(torus, disk, conj_class(Word("a")), 5);
  const GeodesicCurrent b = current_from_class(torus, disk, conj_class(Word("aab")), 5);
  const double ab = intersection_number(a, b, IntersectionScale::Raw);
  EXPECT_GT(ab, 0.0);
  EXPECT_EQ(ab, intersection_number(b, a, IntersectionScale::Raw));
}

TEST(Currents, MismatchedBoundary) {
  const HolonomyRep torus = fuchsian_punctured_torus(2, 2);
  const GeodesicCurrent a = current_from_class(torus, ConvexDomain::disk(), conj_class(Word("a")), 4);
  const GeodesicCurrent b = current_from_class(torus, orbit_hull(torus, 6), conj_class(Word("b")), 4);
  EXPECT_EQ(code_of([&] { intersection_number(a, b); }), ErrorCode::MismatchedBoundary);
}

TEST(Currents, ParabolicClassIsRejected) {
  const HolonomyRep torus = fuchsian_punctured_torus(2, 2);
  EXPECT_EQ(code_of([&] { current_from_class(torus, ConvexDomain::disk(), conj_class(Word("abAB")), 4); }),
            ErrorCode::NotHyperbolic);
}
