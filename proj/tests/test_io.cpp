#include <gtest/gtest.h>

#include <sstream>

#include "hilbertia/hilbertia.hpp"

using namespace hilbertia;

namespace {

// Through text, as the CLI and server see it.
Json reparse(const Json& j) { return Json::parse(j.dump()); }

}  // namespace

TEST(Json, RepRoundTripIsBitExact) {
  const HolonomyRep r = deform(bulge_deform(fuchsian_punctured_torus(2.0, 2.5), "a", 0.6), "b", 0.3, -0.2);
  const HolonomyRep s = io::rep_from(reparse(io::to_json(r)));
  EXPECT_EQ(s.a().m(), r.a().m());
  EXPECT_EQ(s.b().m(), r.b().m());
  EXPECT_EQ(s.topology(), r.topology());
  ASSERT_EQ(s.marking().size(), r.marking().size());
  for (const auto& [name, w] : r.marking()) EXPECT_EQ(s.marking().at(name).letters(), w.letters());
  ASSERT_EQ(s.log().size(), 2u);
  EXPECT_EQ(s.log()[1].twist, 0.3);
  EXPECT_EQ(io::to_json(s).dump(), io::to_json(r).dump());
}

TEST(Json, DomainRoundTrips) {
  const ConvexDomain e = ConvexDomain::ellipse({{{0.5, 0.1, 0}, {0.1, 1.0, 0.1}, {0, 0.1, -0.8}}});
  EXPECT_EQ(io::domain_from(reparse(io::to_json(e))).conic(), e.conic());
  const ConvexDomain h = orbit_hull(fuchsian_pants(2, 2, 2), 5);
  const ConvexDomain g = io::domain_from(reparse(io::to_json(h)));
  EXPECT_EQ(g.vertices(), h.vertices());
  EXPECT_EQ(g.kind(), DomainKind::OrbitHull);
  EXPECT_EQ(g.depth(), 5);
}

TEST(Json, UnknownTypesAreRejected) {
  EXPECT_THROW(io::domain_from(Json{{"type", "blob"}}), Error);
  Json r = io::to_json(fuchsian_pants(1, 1, 1));
  r["topology"] = "genus-two";
  EXPECT_THROW(io::rep_from(r), Error);
}

TEST(Json, GridRoundTripIsBitExact) {
  const GridSolution s = solve_monge_ampere(ConvexDomain::square(), 33);
  const GridSolution t = io::grid_from(reparse(io::to_json(s)));
  EXPECT_EQ(t.u, s.u);
  EXPECT_EQ(t.nx, s.nx);
  EXPECT_EQ(t.h, s.h);
  EXPECT_EQ(t.mask, s.mask);
  EXPECT_EQ(t.arms, s.arms);
}

TEST(Json, GridSizeMismatch) {
  Json j = io::to_json(solve_monge_ampere(ConvexDomain::square(), 33));
  j["u"].erase(0);
  EXPECT_THROW(io::grid_from(j), Error);
}

TEST(Json, CurrentRoundTripKeepsIntersections) {
  const HolonomyRep t = fuchsian_punctured_torus(2, 2);
  const ConvexDomain disk = ConvexDomain::disk();
  const GeodesicCurrent a = current_from_class(t, disk, conj_class(Word("a")), 5);
  const GeodesicCurrent b = current_from_class(t, disk, conj_class(Word("b")), 5);
  const GeodesicCurrent a2 = io::current_from(reparse(io::to_json(a)));
  EXPECT_EQ(a2.domain_key, a.domain_key);
  ASSERT_EQ(a2.atoms.size(), a.atoms.size());
  EXPECT_EQ(a2.atoms.back().xi_plus, a.atoms.back().xi_plus);
  EXPECT_EQ(intersection_number(a2, b), intersection_number(a, b));
}

TEST(Csv, SpectrumIsSortedByLength) {
  const LengthSpectrum s = length_spectrum(fuchsian_pants(1, 2, 3), 3);
  std::istringstream in(io::spectrum_csv(s));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "class,word,length");
  double last = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const double len = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_GE(len, last);
    last = len;
    ++rows;
  }
  EXPECT_EQ(rows, s.entries.size());
}

TEST(Csv, FullPrecision) { EXPECT_EQ(std::stod(io::fmt(0.1 + 0.2)), 0.1 + 0.2); }

TEST(Svg, OutlineChordsAndPoints) {
  const std::string svg = io::to_svg(ConvexDomain::square(), {{{-1, -1}, {1, 1}}}, {{0, 0}, {0.5, 0.2}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<polygon"), std::string::npos);
  EXPECT_NE(svg.find("<line"), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++circles;
  EXPECT_EQ(circles, 2u);
  // The centre of the square lands in the middle of the canvas.
  EXPECT_NE(svg.find("cx=\"256\" cy=\"256\""), std::string::npos);
}
