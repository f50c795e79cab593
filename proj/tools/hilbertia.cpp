// hilbertia command-line tool. Exit codes: 0 success, 2 usage or I/O error,
// 3 numerical failure (the error name is printed).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "server.hpp"

using namespace hilbertia;

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct UsageError {
  std::string what;
};

std::vector<double> parse_numbers(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError{std::string(flag) + ": cannot parse '" + s + "'"};
    }
  }
  return out;
}

Vec2 parse_point(const std::string& s, const char* flag) {
  const auto v = parse_numbers(s, flag);
  if (v.size() != 2) throw UsageError{std::string(flag) + ": expected x,y but got '" + s + "'"};
  return {v[0], v[1]};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError{"cannot open '" + path + "'"};
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError{"'" + path + "' is not valid JSON"};
  return j;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError{"cannot write '" + out + "'"};
  f << text;
}

void emit_json(const std::string& out, Json j, std::uint64_t seed) {
  if (j.is_object()) j["seed"] = seed;
  emit(out, j.dump(2) + "\n");
}

HolonomyRep load_rep(const std::string& path) {
  if (path.empty()) throw UsageError{"--rep is required"};
  return io::rep_from(read_json(path));
}

/// disk | square | polygon:FILE | hull:REP. FILE holds a domain JSON or a bare
/// vertex list.
ConvexDomain load_domain(const std::string& spec, int depth) {
  if (spec == "disk") return ConvexDomain::disk();
  if (spec == "square") return ConvexDomain::square();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError{"--domain: unknown domain '" + spec + "'"};
  const std::string kind = spec.substr(0, colon), path = spec.substr(colon + 1);
  if (kind == "polygon") {
    const Json j = read_json(path);
    if (j.is_array()) {
      std::vector<Vec2> vs;
      for (const auto& p : j) vs.push_back(io::vec_from(p));
      return ConvexDomain::polygon(std::move(vs));
    }
    return io::domain_from(j);
  }
  if (kind == "hull") return orbit_hull(load_rep(path), depth);
  throw UsageError{"--domain: unknown domain kind '" + kind + "'"};
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hilbertia: Hilbert geometry and convex projective structures"};
  app.require_subcommand(1);

  std::string domain_spec = "disk", out, rep_path;
  std::uint64_t seed = kDefaultSeed;
  int depth = 8, maxlen = 8, resolution = 129, digits = 6;
  double tol = 1e-6;

  auto add_domain = [&](CLI::App* c) { c->add_option("--domain", domain_spec, "disk|square|polygon:FILE|hull:REP"); };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", seed, "random seed");
    c->add_option("--out", out, "output file (default stdout)");
  };

  // domain
  auto* c_domain = app.add_subcommand("domain", "Write a domain as JSON");
  add_domain(c_domain);
  add_common(c_domain);
  c_domain->add_option("--depth", depth, "orbit-hull depth");

  // dist / norm
  std::string from, to, at, dir;
  auto* c_dist = app.add_subcommand("dist", "Hilbert distance between two points");
  add_domain(c_dist);
  c_dist->add_option("--from", from)->required();
  c_dist->add_option("--to", to)->required();
  c_dist->add_option("--depth", depth);
  c_dist->add_option("--digits", digits);

  auto* c_norm = app.add_subcommand("norm", "Finsler norm of a tangent vector");
  add_domain(c_norm);
  c_norm->add_option("--at", at)->required();
  c_norm->add_option("--dir", dir)->required();
  c_norm->add_option("--depth", depth);
  c_norm->add_option("--digits", digits);

  // volume
  std::string region;
  std::int64_t samples = 20000;
  auto* c_volume = app.add_subcommand("volume", "Busemann volume of a rectangle x0,y0,x1,y1 or polygon FILE");
  add_domain(c_volume);
  add_common(c_volume);
  c_volume->add_option("--region", region)->required();
  c_volume->add_option("--samples", samples);
  c_volume->add_option("--depth", depth);

  // holonomy
  std::string lengths, curve;
  double twist = 0.0, bulge = 0.0;
  auto* c_hol = app.add_subcommand("holonomy", "Build or deform holonomy representations");
  c_hol->require_subcommand(1);
  auto* c_pants = c_hol->add_subcommand("pants", "Fuchsian pair of pants");
  c_pants->add_option("--lengths", lengths, "l1,l2,l3")->required();
  add_common(c_pants);
  auto* c_torus = c_hol->add_subcommand("torus", "Fuchsian once-punctured torus");
  c_torus->add_option("--lengths", lengths, "la,lb")->required();
  add_common(c_torus);
  auto add_deform = [&](CLI::App* c) {
    c->add_option("--rep", rep_path)->required();
    c->add_option("--curve", curve)->required();
    c->add_option("--twist", twist);
    c->add_option("--bulge", bulge);
    add_common(c);
  };
  auto* c_hdeform = c_hol->add_subcommand("deform", "Twist and bulge along a marked curve");
  add_deform(c_hdeform);
  auto* c_deform = app.add_subcommand("deform", "Twist and bulge along a marked curve");
  add_deform(c_deform);

  // hull
  auto* c_hull = app.add_subcommand("hull", "Orbit hull of a representation");
  c_hull->add_option("--rep", rep_path)->required();
  c_hull->add_option("--depth", depth);
  add_common(c_hull);

  // spectrum / entropy
  auto* c_spec = app.add_subcommand("spectrum", "Marked length spectrum as CSV");
  c_spec->add_option("--rep", rep_path)->required();
  c_spec->add_option("--maxlen", maxlen);
  add_common(c_spec);

  std::string window;
  bool with_critical = false;
  auto* c_ent = app.add_subcommand("entropy", "Growth rate of the length spectrum");
  c_ent->add_option("--rep", rep_path)->required();
  c_ent->add_option("--maxlen", maxlen, "default 10");
  c_ent->add_option("--window", window, "lo,hi");
  c_ent->add_flag("--critical", with_critical, "also estimate the critical exponent on --domain");
  add_domain(c_ent);
  c_ent->add_option("--depth", depth);
  add_common(c_ent);

  // cocycle-check
  int triples = 100, wordlen = 2;
  auto* c_coc = app.add_subcommand("cocycle-check", "Busemann cocycle and period identities on random triples");
  c_coc->add_option("--rep", rep_path)->required();
  add_domain(c_coc);
  c_coc->add_option("--triples", triples);
  c_coc->add_option("--wordlen", wordlen);
  c_coc->add_option("--at", at, "base point (default centroid)");
  c_coc->add_option("--depth", depth);
  add_common(c_coc);

  // ps / current / intersect
  double exponent = -1.0;
  auto* c_ps = app.add_subcommand("ps", "Patterson-Sullivan measure from the orbit of a point");
  c_ps->add_option("--rep", rep_path)->required();
  add_domain(c_ps);
  c_ps->add_option("--exponent", exponent, "default: critical exponent estimate");
  c_ps->add_option("--maxlen", maxlen);
  c_ps->add_option("--at", at);
  c_ps->add_option("--depth", depth);
  add_common(c_ps);

  std::string word;
  auto* c_cur = app.add_subcommand("current", "Geodesic current of a conjugacy class");
  c_cur->add_option("--rep", rep_path)->required();
  c_cur->add_option("--class", word)->required();
  add_domain(c_cur);
  c_cur->add_option("--maxlen", maxlen);
  c_cur->add_option("--depth", depth);
  add_common(c_cur);

  std::string cur_a, cur_b;
  bool raw = false;
  auto* c_int = app.add_subcommand("intersect", "Intersection number of two currents");
  c_int->add_option("--a", cur_a)->required();
  c_int->add_option("--b", cur_b)->required();
  c_int->add_flag("--raw", raw, "unnormalized double sum over linked atom pairs");
  c_int->add_option("--digits", digits);

  // Monge-Ampere
  auto* c_ma = app.add_subcommand("ma-solve", "Solve the affine-sphere Monge-Ampere equation");
  add_domain(c_ma);
  c_ma->add_option("--resolution", resolution);
  c_ma->add_option("--tol", tol);
  c_ma->add_option("--depth", depth);
  add_common(c_ma);

  std::string grid_path;
  bool csv = false;
  int nsamples = 200;
  auto* c_mac = app.add_subcommand("ma-compare", "Compare affine and Hilbert norms and volumes");
  add_domain(c_mac);
  c_mac->add_option("--grid", grid_path, "solution from ma-solve (otherwise solved here)");
  c_mac->add_option("--resolution", resolution);
  c_mac->add_option("--tol", tol);
  c_mac->add_option("--samples", nsamples);
  c_mac->add_option("--depth", depth);
  c_mac->add_flag("--csv", csv);
  add_common(c_mac);

  // serve
  int port = 8080;
  std::string host = "127.0.0.1";
  auto* c_serve = app.add_subcommand("serve", "HTTP API under /api");
  c_serve->add_option("--port", port);
  c_serve->add_option("--host", host);

  // export-svg
  std::vector<std::string> chords, points;
  auto* c_svg = app.add_subcommand("export-svg", "Draw a domain with optional chords and points");
  add_domain(c_svg);
  c_svg->add_option("--chord", chords, "x0,y0,x1,y1 (repeatable)");
  c_svg->add_option("--point", points, "x,y (repeatable)");
  c_svg->add_option("--depth", depth);
  add_common(c_svg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_domain) {
      emit_json(out, io::to_json(load_domain(domain_spec, depth)), seed);
    } else if (*c_dist) {
      const ConvexDomain d = load_domain(domain_spec, depth);
      std::cout << fixed(distance(d, parse_point(from, "--from"), parse_point(to, "--to")), digits) << "\n";
    } else if (*c_norm) {
      const ConvexDomain d = load_domain(domain_spec, depth);
      std::cout << fixed(finsler_norm(d, parse_point(at, "--at"), parse_point(dir, "--dir")), digits) << "\n";
    } else if (*c_volume) {
      const ConvexDomain d = load_domain(domain_spec, depth);
      ConvexDomain r = ConvexDomain::square();
      if (region.rfind("rect:", 0) == 0 || region.find(',') != std::string::npos) {
        const auto v = parse_numbers(region.rfind("rect:", 0) == 0 ? region.substr(5) : region, "--region");
        if (v.size() != 4) throw UsageError{"--region: expected x0,y0,x1,y1"};
        r = rectangle({v[0], v[1]}, {v[2], v[3]});
      } else {
        r = load_domain("polygon:" + region, depth);
      }
      VolumeOptions opt;
      opt.samples = samples;
      opt.seed = seed;
      emit_json(out, io::to_json(busemann_volume(d, r, opt)), seed);
    } else if (*c_pants || *c_torus) {
      const auto l = parse_numbers(lengths, "--lengths");
      if (*c_pants && l.size() != 3) throw UsageError{"--lengths: pants need l1,l2,l3"};
      if (*c_torus && l.size() != 2) throw UsageError{"--lengths: a punctured torus needs la,lb"};
      const HolonomyRep rep = *c_pants ? fuchsian_pants(l[0], l[1], l[2]) : fuchsian_punctured_torus(l[0], l[1]);
      emit_json(out, io::to_json(rep), seed);
    } else if (*c_hdeform || *c_deform) {
      emit_json(out, io::to_json(deform(load_rep(rep_path), curve, twist, bulge)), seed);
    } else if (*c_hull) {
      emit_json(out, io::to_json(orbit_hull(load_rep(rep_path), depth)), seed);
    } else if (*c_spec) {
      emit(out, io::spectrum_csv(length_spectrum(load_rep(rep_path), maxlen)));
    } else if (*c_ent) {
      if (c_ent->count("--maxlen") == 0) maxlen = 10;
      const HolonomyRep rep = load_rep(rep_path);
      const LengthSpectrum s = length_spectrum(rep, maxlen);
      std::optional<std::pair<double, double>> w;
      if (!window.empty()) {
        const auto v = parse_numbers(window, "--window");
        if (v.size() != 2) throw UsageError{"--window: expected lo,hi"};
        w = std::make_pair(v[0], v[1]);
      }
      Json j = {{"maxlen", maxlen},
                {"classes", s.entries.size()},
                {"completeness_length", s.completeness_length()},
                {"entropy", io::to_json(entropy_estimate(s, w))}};
      if (with_critical) {
        const ConvexDomain d = load_domain(domain_spec, depth);
        j["critical_exponent"] = io::to_json(critical_exponent_estimate(rep, d, d.centroid(), maxlen));
      }
      emit_json(out, j, seed);
    } else if (*c_coc) {
      const HolonomyRep rep = load_rep(rep_path);
      const ConvexDomain d = load_domain(domain_spec, depth);
      const Vec2 o = at.empty() ? d.centroid() : parse_point(at, "--at");
      const CocycleReport r = cocycle_check(rep, d, o, triples, seed, wordlen);
      emit_json(out,
                {{"triples", r.triples},
                 {"periods", r.periods},
                 {"max_cocycle_error", r.max_cocycle_error},
                 {"max_period_error", r.max_period_error}},
                seed);
    } else if (*c_ps) {
      const HolonomyRep rep = load_rep(rep_path);
      const ConvexDomain d = load_domain(domain_spec, depth);
      const Vec2 o = at.empty() ? d.centroid() : parse_point(at, "--at");
      const double delta = exponent > 0.0 ? exponent : critical_exponent(rep, d, o, maxlen);
      const BoundaryMeasure mu = patterson_sullivan(rep, d, delta, o, maxlen);
      Json atoms = Json::array();
      for (const auto& a : mu.atoms) atoms.push_back({{"point", io::vec_json(a.point)}, {"w", a.weight}});
      emit_json(out, {{"exponent", delta}, {"tail_share", mu.tail_share}, {"atoms", atoms}}, seed);
    } else if (*c_cur) {
      const HolonomyRep rep = load_rep(rep_path);
      const ConvexDomain d = load_domain(domain_spec, depth);
      emit_json(out, io::to_json(current_from_class(rep, d, conj_class(Word(word)), maxlen)), seed);
    } else if (*c_int) {
      const GeodesicCurrent a = io::current_from(read_json(cur_a)), b = io::current_from(read_json(cur_b));
      std::cout << fixed(intersection_number(a, b, raw ? IntersectionScale::Raw : IntersectionScale::PerPeriod), digits)
                << "\n";
    } else if (*c_ma) {
      const ConvexDomain d = load_domain(domain_spec, depth);
      emit_json(out, io::to_json(solve_monge_ampere(d, resolution, tol)), seed);
    } else if (*c_mac) {
      const ConvexDomain d = load_domain(domain_spec, depth);
      const GridSolution g = grid_path.empty() ? solve_monge_ampere(d, resolution, tol) : io::grid_from(read_json(grid_path));
      const ComparisonReport r = compare_hilbert_affine(grid_path.empty() ? d : g.domain, g, nsamples, seed);
      if (csv)
        emit(out, io::comparison_csv(r));
      else
        emit_json(out, io::to_json(r), seed);
    } else if (*c_serve) {
      httplib::Server srv;
      server::Store store;
      server::register_routes(srv, store);
      std::cerr << "serving on http://" << host << ":" << port << "/api\n";
      if (!srv.listen(host, port)) throw UsageError{"cannot listen on " + host + ":" + std::to_string(port)};
    } else if (*c_svg) {
      const ConvexDomain d = load_domain(domain_spec, depth);
      std::vector<io::SvgSegment> segs;
      for (const auto& c : chords) {
        const auto v = parse_numbers(c, "--chord");
        if (v.size() != 4) throw UsageError{"--chord: expected x0,y0,x1,y1"};
        segs.push_back({{v[0], v[1]}, {v[2], v[3]}});
      }
      std::vector<Vec2> pts;
      for (const auto& p : points) pts.push_back(parse_point(p, "--point"));
      emit(out, io::to_svg(d, segs, pts));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Json::exception& e) {
    std::cerr << "usage error: malformed input: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
