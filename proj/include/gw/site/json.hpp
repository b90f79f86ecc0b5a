#pragma once

#include "gw/psh/json.hpp"
#include "gw/site/sheaf.hpp"
#include "gw/site/space.hpp"

namespace gw {

/// {"category": ref, "covers": {"obj": [[arrowIds]...]}}; families are closed to sieves.
inline Topology site_from_json(const Json &j, const CategoryResolver &resolve = {}) {
  CatPtr C = category_ref_from_json(json_field(j, "category"), resolve);
  const Json &cv = json_field(j, "covers");
  if (!cv.is_object()) throw InputError("\"covers\" must be an object");
  std::vector<std::vector<std::vector<std::size_t>>> fams(C->object_count());
  for (const auto &[k, v] : cv.items()) {
    std::size_t a = C->object(k);
    if (!v.is_array()) throw InputError("covers of " + k + " must be an array of families");
    for (const auto &fam : v) {
      if (!fam.is_array()) throw InputError("a covering family must be an array of arrow ids");
      fams[a].emplace_back();
      for (const auto &f : fam) fams[a].back().push_back(C->arrow(json_string(f, "arrow id")));
    }
  }
  return topology_from_families(C, fams);
}

inline Json site_to_json(const Topology &J, const std::string &ref = "") {
  const FinCategory &C = *J.category();
  Json j;
  j["category"] = ref.empty() ? category_to_json(C) : Json(ref);
  Json cv = Json::object();
  for (std::size_t a = 0; a < C.object_count(); ++a) {
    Json fams = Json::array();
    for (const auto &s : J.covers(a)) {
      Json f = Json::array();
      for (std::size_t x : s.arrows) f.push_back(C.arrow_name(x));
      fams.push_back(f);
    }
    cv[C.object_name(a)] = fams;
  }
  j["covers"] = cv;
  return j;
}

inline FiniteSpace space_from_json(const Json &j) {
  const Json &pts = json_field(j, "points");
  if (!pts.is_array()) throw InputError("\"points\" must be an array");
  std::vector<std::string> points;
  for (const auto &p : pts) points.push_back(json_string(p, "point"));
  const Json &os = json_field(j, "opens");
  if (!os.is_array()) throw InputError("\"opens\" must be an array");
  std::vector<std::vector<std::string>> opens;
  for (const auto &o : os) {
    if (!o.is_array()) throw InputError("each open must be an array of points");
    opens.emplace_back();
    for (const auto &p : o) opens.back().push_back(json_string(p, "point"));
  }
  return FiniteSpace::validate(points, opens);
}

inline Json space_to_json(const FiniteSpace &X) {
  Json j;
  j["points"] = X.points();
  Json os = Json::array();
  for (auto u : X.opens()) os.push_back(X.open_points(u));
  j["opens"] = os;
  return j;
}

} // namespace gw
