#pragma once

// JSON-over-HTTP front end: a synchronized store of named representations
// and the /api routes. Computation runs outside the lock.

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <string>

// Eigen first: httplib pulls in <resolv.h>, whose _res macro breaks Eigen.
#include "hilbertia/hilbertia.hpp"
#include "httplib.h"

namespace hilbertia::server {

class Store {
 public:
  std::string put(HolonomyRep rep) {
    std::lock_guard<std::mutex> lock(mu_);
    std::string id = "r" + std::to_string(++next_id_);
    reps_.emplace(id, std::move(rep));
    return id;
  }

  std::optional<HolonomyRep> get(const std::string& id) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = reps_.find(id);
    if (it == reps_.end()) return std::nullopt;
    return it->second;
  }

  /// Strictly increasing across all responses.
  std::uint64_t bump() { return ++revision_; }

 private:
  mutable std::mutex mu_;
  std::map<std::string, HolonomyRep> reps_;
  std::uint64_t next_id_ = 0;
  std::atomic<std::uint64_t> revision_{0};
};

inline Json marked_lengths(const HolonomyRep& rep) {
  Json out = Json::object();
  for (const auto& [name, w] : rep.marking()) {
    const SpectralData s = classify(rep.evaluate(w));
    out[name] = s.positive_hyperbolic() ? Json(translation_length(s)) : Json(nullptr);
  }
  return out;
}

inline Json hull_json(const HolonomyRep& rep, int depth) {
  Json v = Json::array();
  for (const auto& p : orbit_hull(rep, depth).vertices()) v.push_back(io::vec_json(p));
  return v;
}

inline HolonomyRep seed_from(const Json& body) {
  if (body.contains("a")) return io::rep_from(body);
  const std::string top = body.value("topology", "pants");
  const auto l = body.value("lengths", std::vector<double>{});
  if (top == "pants") {
    if (l.size() != 3) throw Error(ErrorCode::InvalidInput, "pants need three lengths");
    return fuchsian_pants(l[0], l[1], l[2]);
  }
  if (top == "punctured-torus" || top == "torus") {
    if (l.size() != 2) throw Error(ErrorCode::InvalidInput, "a punctured torus needs two lengths");
    return fuchsian_punctured_torus(l[0], l[1]);
  }
  throw Error(ErrorCode::InvalidInput, "unknown topology '" + top + "'");
}

namespace detail {

struct BadRequest {
  std::string what;
};

struct NotFound {
  std::string what;
};

inline Json parse_body(const httplib::Request& req) {
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest{"body is not a JSON object"};
  return j;
}

template <class F>
void respond(Store& store, httplib::Response& res, F&& body) {
  Json out;
  try {
    out = body();
    res.status = 200;
  } catch (const BadRequest& e) {
    out = {{"error", "BadRequest"}, {"detail", e.what}};
    res.status = 400;
  } catch (const NotFound& e) {
    out = {{"error", "NotFound"}, {"detail", e.what}};
    res.status = 404;
  } catch (const Json::exception& e) {
    out = {{"error", "BadRequest"}, {"detail", e.what()}};
    res.status = 400;
  } catch (const Error& e) {
    out = {{"error", std::string(error_name(e.code()))}, {"detail", e.what()}};
    res.status = 422;
  }
  out["revision"] = store.bump();
  res.set_content(out.dump(), "application/json");
}

}  // namespace detail

struct Limits {
  int default_depth = 8;
  int max_depth = 12;
  int entropy_maxlen = 10;
};

inline void register_routes(httplib::Server& srv, Store& store, Limits lim = {}) {
  using detail::BadRequest;
  using detail::NotFound;

  srv.Get("/api/health", [&store](const httplib::Request&, httplib::Response& res) {
    detail::respond(store, res, [] { return Json{{"ok", true}}; });
  });

  srv.Post("/api/rep", [&store](const httplib::Request& req, httplib::Response& res) {
    detail::respond(store, res, [&] {
      const HolonomyRep rep = seed_from(detail::parse_body(req));
      const std::string id = store.put(rep);
      return Json{{"rep_id", id}, {"rep", io::to_json(rep)}, {"lengths", marked_lengths(rep)}};
    });
  });

  srv.Post("/api/deform", [&store, lim](const httplib::Request& req, httplib::Response& res) {
    detail::respond(store, res, [&] {
      const Json body = detail::parse_body(req);
      if (!body.contains("rep_id") || !body.contains("curve")) throw BadRequest{"rep_id and curve are required"};
      const std::string parent = body.at("rep_id").get<std::string>();
      const auto rep = store.get(parent);
      if (!rep) throw NotFound{"unknown rep_id '" + parent + "'"};
      const int depth = body.value("depth", lim.default_depth);
      if (depth < 1 || depth > lim.max_depth) throw BadRequest{"depth out of range"};
      const HolonomyRep child =
          deform(*rep, body.at("curve").get<std::string>(), body.value("twist", 0.0), body.value("bulge", 0.0));
      Json out{{"rep_id", store.put(child)},
               {"parent", parent},
               {"rep", io::to_json(child)},
               {"lengths", marked_lengths(child)},
               {"hull", hull_json(child, depth)}};
      try {
        out["entropy"] = io::to_json(entropy_estimate(length_spectrum(child, lim.entropy_maxlen)));
      } catch (const Error& e) {
        out["entropy"] = nullptr;
        out["entropy_error"] = std::string(error_name(e.code()));
      }
      return out;
    });
  });

  srv.Get(R"(/api/hull/([^/]+))", [&store, lim](const httplib::Request& req, httplib::Response& res) {
    detail::respond(store, res, [&] {
      const std::string id = req.matches[1];
      const auto rep = store.get(id);
      if (!rep) throw NotFound{"unknown rep_id '" + id + "'"};
      int depth = lim.default_depth;
      if (req.has_param("depth")) {
        try {
          depth = std::stoi(req.get_param_value("depth"));
        } catch (const std::exception&) {
          throw BadRequest{"depth must be an integer"};
        }
      }
      if (depth < 1 || depth > lim.max_depth) throw BadRequest{"depth out of range"};
      return Json{{"rep_id", id}, {"depth", depth}, {"vertices", hull_json(*rep, depth)}};
    });
  });
}

}  // namespace hilbertia::server
