#pragma once

// JSON, CSV and SVG forms of the library types. Doubles are written with
// round-trip precision, so parse(dump(x)) reproduces x bit for bit.

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hilbertia/affine_sphere.hpp"
#include "hilbertia/domain.hpp"
#include "hilbertia/dynamics.hpp"
#include "hilbertia/holonomy.hpp"
#include "hilbertia/metric.hpp"
#include "hilbertia/projective.hpp"

namespace hilbertia {

using Json = nlohmann::json;

namespace io {

inline Json mat_json(const Mat3& m) {
  Json a = Json::array();
  for (const auto& row : m)
    for (double x : row) a.push_back(x);
  return a;
}

inline Mat3 mat_from(const Json& j) {
  if (!j.is_array() || j.size() != 9) throw Error(ErrorCode::InvalidInput, "matrix must be 9 numbers");
  Mat3 m{};
  for (std::size_t k = 0; k < 9; ++k) m[k / 3][k % 3] = j.at(k).get<double>();
  return m;
}

inline Json vec_json(const Vec2& v) { return Json::array({v[0], v[1]}); }

inline Vec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "point must be [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json to_json(const ProjMap& g) { return mat_json(g.m()); }
inline ProjMap projmap_from(const Json& j) { return ProjMap(mat_from(j)); }

inline Json to_json(const ProjPoint& p) { return Json::array({p[0], p[1], p[2]}); }

inline ProjPoint projpoint_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::InvalidInput, "projective point must be 3 numbers");
  return ProjPoint(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

inline Json to_json(const ConvexDomain& d) {
  if (d.is_ellipse()) return {{"type", "ellipse"}, {"conic", mat_json(d.conic())}};
  Json v = Json::array();
  for (const auto& p : d.vertices()) v.push_back(vec_json(p));
  Json j = {{"type", "polygon"}, {"vertices", v}};
  if (d.kind() == DomainKind::OrbitHull) j["depth"] = d.depth();
  return j;
}

inline ConvexDomain domain_from(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "ellipse") return ConvexDomain::ellipse(mat_from(j.at("conic")));
  if (type == "polygon") {
    std::vector<Vec2> vs;
    for (const auto& p : j.at("vertices")) vs.push_back(vec_from(p));
    if (j.contains("depth")) return ConvexDomain::orbit_hull(std::move(vs), j.at("depth").get<int>());
    return ConvexDomain::polygon(std::move(vs));
  }
  throw Error(ErrorCode::InvalidInput, "unknown domain type '" + type + "'");
}

inline Json to_json(const HolonomyRep& r) {
  Json marking = Json::object();
  for (const auto& [name, w] : r.marking()) marking[name] = w.letters();
  Json log = Json::array();
  for (const auto& rec : r.log()) log.push_back({{"curve", rec.curve}, {"twist", rec.twist}, {"bulge", rec.bulge}});
  return {{"topology", to_string(r.topology())}, {"a", to_json(r.a())}, {"b", to_json(r.b())},
          {"marking", marking}, {"log", log}};
}

inline HolonomyRep rep_from(const Json& j) {
  const std::string t = j.at("topology").get<std::string>();
  Topology top;
  if (t == "pants")
    top = Topology::Pants;
  else if (t == "punctured-torus")
    top = Topology::PuncturedTorus;
  else
    throw Error(ErrorCode::InvalidInput, "unknown topology '" + t + "'");
  std::map<std::string, Word> marking;
  for (const auto& [name, w] : j.at("marking").items()) marking.emplace(name, Word(w.get<std::string>()));
  std::vector<DeformationRecord> log;
  if (j.contains("log"))
    for (const auto& e : j.at("log"))
      log.push_back({e.at("curve").get<std::string>(), e.value("twist", 0.0), e.value("bulge", 0.0)});
  return HolonomyRep(top, projmap_from(j.at("a")), projmap_from(j.at("b")), std::move(marking), std::move(log));
}

inline Json to_json(const VolumeEstimate& v) {
  return {{"value", v.value}, {"std_error", v.std_error}, {"samples", v.samples}};
}

inline Json to_json(const EntropyEstimate& e) {
  return {{"value", e.value},         {"std_error", e.std_error}, {"bowen", e.bowen},
          {"window_lo", e.window_lo}, {"window_hi", e.window_hi}, {"classes_in_window", e.classes_in_window}};
}

inline Json to_json(const GeodesicCurrent& c) {
  Json atoms = Json::array();
  for (const auto& a : c.atoms)
    atoms.push_back({{"xi_minus", vec_json(a.xi_minus)}, {"xi_plus", vec_json(a.xi_plus)}, {"w", a.w}});
  Json j = {{"atoms", atoms}, {"domain_key", c.domain_key}, {"center", vec_json(c.center)}};
  if (c.base)
    j["base"] = {{"p_minus", vec_json(c.base->p_minus)},
                 {"p_plus", vec_json(c.base->p_plus)},
                 {"gamma", to_json(c.base->gamma)},
                 {"length", c.base->length},
                 {"weight", c.base->weight}};
  return j;
}

inline GeodesicCurrent current_from(const Json& j) {
  GeodesicCurrent c;
  for (const auto& a : j.at("atoms"))
    c.atoms.push_back({vec_from(a.at("xi_minus")), vec_from(a.at("xi_plus")), a.at("w").get<double>()});
  c.domain_key = j.value("domain_key", std::uint64_t{0});
  if (j.contains("center")) c.center = vec_from(j.at("center"));
  if (j.contains("base")) {
    const Json& b = j.at("base");
    c.base = CurrentBase{vec_from(b.at("p_minus")), vec_from(b.at("p_plus")), projmap_from(b.at("gamma")),
                         b.at("length").get<double>(), b.at("weight").get<double>()};
  }
  return c;
}

/// Header {resolution, bbox, spacing, nx, ny, domain} and the row-major u
/// values (0 off the interior). Reading rebuilds the mask and stencil arms
/// from the domain, which reproduces them exactly.
inline Json to_json(const GridSolution& s) {
  const auto [lo, hi] = s.domain.bounding_box();
  const double side = std::fmax(hi[0] - lo[0], hi[1] - lo[1]);
  const int resolution = static_cast<int>(std::lround(side / s.h)) + 1;
  return {{"resolution", resolution},
          {"bbox", Json::array({lo[0], lo[1], hi[0], hi[1]})},
          {"spacing", s.h},
          {"nx", s.nx},
          {"ny", s.ny},
          {"residual", s.residual},
          {"iterations", s.iterations},
          {"domain", to_json(s.domain)},
          {"u", s.u}};
}

inline GridSolution grid_from(const Json& j) {
  GridSolution s = detail::make_grid(domain_from(j.at("domain")), j.at("resolution").get<int>());
  const auto u = j.at("u").get<std::vector<double>>();
  if (u.size() != s.u.size()) throw Error(ErrorCode::InvalidInput, "grid size does not match its header");
  s.u = u;
  s.residual = j.value("residual", 0.0);
  s.iterations = j.value("iterations", 0);
  return s;
}

inline Json to_json(const ComparisonReport& r) {
  return {{"samples", r.samples},       {"ratio_min", r.ratio_min},   {"ratio_max", r.ratio_max},
          {"ratio_mean", r.ratio_mean}, {"volume_ratios", r.volume_ratios}, {"volume_min", r.volume_min},
          {"volume_max", r.volume_max}, {"bounded", r.bounded}};
}

// ---- CSV ---------------------------------------------------------------------

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// One row per class, ordered by length then by word.
inline std::string spectrum_csv(const LengthSpectrum& s) {
  std::vector<SpectrumEntry> e = s.entries;
  std::stable_sort(e.begin(), e.end(), [](const SpectrumEntry& x, const SpectrumEntry& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.cls < y.cls;
  });
  std::string out = "class,word,length\n";
  for (std::size_t i = 0; i < e.size(); ++i)
    out += std::to_string(i) + "," + e[i].cls.representative.letters() + "," + fmt(e[i].length) + "\n";
  return out;
}

inline std::string comparison_csv(const ComparisonReport& r) {
  std::string out = "quantity,value\n";
  out += "samples," + std::to_string(r.samples) + "\n";
  out += "ratio_min," + fmt(r.ratio_min) + "\nratio_max," + fmt(r.ratio_max) + "\nratio_mean," + fmt(r.ratio_mean) + "\n";
  for (std::size_t i = 0; i < r.volume_ratios.size(); ++i)
    out += "volume_ratio_" + std::to_string(i) + "," + fmt(r.volume_ratios[i]) + "\n";
  return out;
}

// ---- SVG ---------------------------------------------------------------------

struct SvgSegment {
  Vec2 from, to;
};

/// Domain outline in a 512 px square, y up, with optional chords and points.
inline std::string to_svg(const ConvexDomain& d, const std::vector<SvgSegment>& chords = {},
                          const std::vector<Vec2>& points = {}) {
  const std::vector<Vec2> outline = d.is_ellipse() ? d.boundary_polygon(512) : d.vertices();
  auto [lo, hi] = d.bounding_box();
  const double span = std::fmax(hi[0] - lo[0], hi[1] - lo[1]);
  const double px = 512.0, pad = 16.0, k = (px - 2.0 * pad) / span;
  auto X = [&](const Vec2& p) { return fmt(pad + (p[0] - lo[0]) * k); };
  auto Y = [&](const Vec2& p) { return fmt(px - pad - (p[1] - lo[1]) * k); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  s << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  // Thin out very large hulls; the outline only needs pixel accuracy.
  const std::size_t stride = std::max<std::size_t>(1, outline.size() / 4096);
  for (std::size_t i = 0; i < outline.size(); i += stride) s << X(outline[i]) << "," << Y(outline[i]) << " ";
  s << "\"/>\n";
  for (const auto& c : chords)
    s << "<line x1=\"" << X(c.from) << "\" y1=\"" << Y(c.from) << "\" x2=\"" << X(c.to) << "\" y2=\"" << Y(c.to)
      << "\" stroke=\"steelblue\" stroke-width=\"1\"/>\n";
  for (const auto& p : points)
    s << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"2\" fill=\"crimson\"/>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace io
}  // namespace hilbertia
