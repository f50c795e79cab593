#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "hilbertia/hilbertia.hpp"

using namespace hilbertia;

namespace {

double eigen_length(const ProjMap& g) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = g.m()[i][j];
  const Eigen::Vector3cd ev = m.eigenvalues();
  double lo = 1e300, hi = 0;
  for (int k = 0; k < 3; ++k) lo = std::fmin(lo, std::abs(ev[k])), hi = std::fmax(hi, std::abs(ev[k]));
  return 0.5 * std::log(hi / lo);
}

bool preserves_disk(const ProjMap& g) {
  const Mat3 q = diag3(1, 1, -1);
  return max_abs_diff(transpose(g.m()) * q * g.m(), q) < 1e-10;
}

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

TEST(Word, ReducedOnly) {
  EXPECT_EQ(code_of([] { Word("aA"); }), ErrorCode::InvalidWord);
  EXPECT_EQ(code_of([] { Word("ax"); }), ErrorCode::InvalidWord);
  EXPECT_EQ((Word("ab") * Word("Ba")).letters(), "aa");
}

TEST(Word, Inverse) {
  EXPECT_EQ(Word("aab").inverse().letters(), "BAA");
  EXPECT_TRUE((Word("abAB") * Word("abAB").inverse()).empty());
}

TEST(Pants, BoundaryLengths) {
  const HolonomyRep p = fuchsian_pants(1.0, 2.0, 3.0);
  EXPECT_NEAR(eigen_length(p.evaluate(p.curve("a"))), 1.0, 1e-10);
  EXPECT_NEAR(eigen_length(p.evaluate(p.curve("b"))), 2.0, 1e-10);
  EXPECT_NEAR(eigen_length(p.evaluate(p.curve("c"))), 3.0, 1e-10);
  EXPECT_TRUE(preserves_disk(p.a()));
  EXPECT_TRUE(preserves_disk(p.b()));
}

TEST(Pants, MaxlenTwoSpectrum) {
  const LengthSpectrum s = length_spectrum(fuchsian_pants(2, 2, 2), 2);
  for (const auto& e : s.entries)
    if (e.cls.representative.size() == 1 || e.cls.representative.letters() == "ab")
      EXPECT_NEAR(e.length, 2.0, 1e-12) << e.cls.representative.letters();
}

TEST(Pants, InvalidLengths) { EXPECT_EQ(code_of([] { fuchsian_pants(-1, 1, 1); }), ErrorCode::InvalidInput); }

TEST(Torus, LengthsAndParabolicCommutator) {
  const HolonomyRep t = fuchsian_punctured_torus(2.0, 3.0);
  EXPECT_NEAR(eigen_length(t.a()), 2.0, 1e-12);
  EXPECT_NEAR(eigen_length(t.b()), 3.0, 1e-12);
  const ProjMap k = t.evaluate(Word("abAB"));
  EXPECT_NEAR(trace(k.m()), 3.0, 1e-9);
  EXPECT_TRUE(parabolic_fixed_point(k).has_value());
  EXPECT_TRUE(preserves_disk(t.a()));
}

TEST(Torus, CollarBound) {
  EXPECT_EQ(code_of([] { fuchsian_punctured_torus(0.1, 2.0); }), ErrorCode::TooShort);
  EXPECT_NO_THROW(fuchsian_punctured_torus(0.15, 7.0));
}

TEST(Deform, ZeroIsExactIdentity) {
  const HolonomyRep t = fuchsian_punctured_torus(2.0, 2.0);
  const HolonomyRep d = deform(t, "a", 0.0, 0.0);
  EXPECT_EQ(d.a().m(), t.a().m());
  EXPECT_EQ(d.b().m(), t.b().m());
  ASSERT_EQ(d.log().size(), 1u);
  EXPECT_EQ(d.log()[0].curve, "a");
}

TEST(Deform, CurveLengthIsInvariant) {
  for (const HolonomyRep& rep : {fuchsian_punctured_torus(2.0, 2.5), fuchsian_pants(1.0, 2.0, 3.0)})
    for (const char* c : {"a", "b"})
      for (double t : {-0.7, 0.4})
        for (double s : {0.0, 1.0}) {
          const HolonomyRep d = deform(rep, c, t, s);
          EXPECT_NEAR(eigen_length(d.evaluate(d.curve(c))), eigen_length(rep.evaluate(rep.curve(c))), 1e-10);
        }
}

TEST(Deform, BulgeLeavesTheFuchsianLocus) {
  const HolonomyRep t = fuchsian_punctured_torus(2.0, 2.0);
  EXPECT_LT(fit_conic(orbit_hull(t, 8).vertices()).rms_residual, 1e-6);
  const HolonomyRep b = bulge_deform(t, "a", 1.0);
  EXPECT_GT(fit_conic(orbit_hull(b, 8).vertices()).rms_residual, 1e-2);
  EXPECT_FALSE(preserves_disk(b.b()));
}

TEST(Deform, EarthquakeKeepsTheDomain) {
  const HolonomyRep t = fuchsian_punctured_torus(2.0, 2.0);
  EXPECT_LT(hausdorff(orbit_hull(t, 8), orbit_hull(twist_deform(t, "a", 0.7), 8)), 2e-2);
}

TEST(Deform, PantsBoundaryDeformationIsAConjugation) {
  const HolonomyRep p = fuchsian_pants(2.0, 2.0, 2.0);
  const HolonomyRep d = deform(p, "a", 0.3, 0.8);
  const LengthSpectrum x = length_spectrum(p, 5), y = length_spectrum(d, 5);
  ASSERT_EQ(x.entries.size(), y.entries.size());
  for (std::size_t i = 0; i < x.entries.size(); ++i) EXPECT_NEAR(x.entries[i].length, y.entries[i].length, 1e-9);
}

TEST(Deform, Errors) {
  const HolonomyRep t = fuchsian_punctured_torus(2.0, 2.0);
  EXPECT_EQ(code_of([&] { deform(t, "ab", 0.1, 0); }), ErrorCode::UnknownCurve);
  EXPECT_EQ(code_of([&] { deform(t, "zz", 0.1, 0); }), ErrorCode::UnknownCurve);
  const Mat3 r{{{std::cos(0.3), -std::sin(0.3), 0}, {std::sin(0.3), std::cos(0.3), 0}, {0, 0, 1}}};
  const HolonomyRep e(Topology::PuncturedTorus, ProjMap(r), t.b(), {{"a", Word("a")}, {"b", Word("b")}});
  EXPECT_EQ(code_of([&] { deform(e, "a", 0.1, 0); }), ErrorCode::NotHyperbolic);
}

TEST(Dual, DoubleDualIsOriginal) {
  const HolonomyRep b = bulge_deform(fuchsian_punctured_torus(2.0, 2.0), "a", 0.6);
  const HolonomyRep dd = dual_structure(dual_structure(b));
  EXPECT_TRUE(dd.a().same_map(b.a()));
  EXPECT_TRUE(dd.b().same_map(b.b()));
}

TEST(Dual, OrbitHullIsPolarDualOfHull) {
  const HolonomyRep b = bulge_deform(fuchsian_punctured_torus(2.0, 2.0), "a", 0.6);
  const CenteredDomain c = centered(orbit_hull(b, 10));
  // Covectors pair as <y, x> + 1, so the dual domain is minus the polar body.
  std::vector<Vec2> flipped;
  for (const auto& v : polar_dual(c.domain).vertices()) flipped.push_back(-1.0 * v);
  const ConvexDomain polar = ConvexDomain::polygon(convex_hull(flipped));
  const Mat3 shift{{{1, 0, c.translation[0]}, {0, 1, c.translation[1]}, {0, 0, 1}}};
  const HolonomyRep dual = dual_structure(conjugated(b, ProjMap(shift)));
  EXPECT_LT(hausdorff(orbit_hull(dual, 10), polar), 1e-2);
}

TEST(Conjugation, SpectrumIsInvariant) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 1);
  Mat3 m;
  for (auto& r : m)
    for (double& x : r) x = n(rng);
  const HolonomyRep t = bulge_deform(fuchsian_punctured_torus(2.0, 2.0), "a", 0.6);
  const LengthSpectrum x = length_spectrum(t, 6), y = length_spectrum(conjugated(t, ProjMap(m)), 6);
  ASSERT_EQ(x.entries.size(), y.entries.size());
  for (std::size_t i = 0; i < x.entries.size(); ++i) EXPECT_NEAR(x.entries[i].length, y.entries[i].length, 1e-8);
}
