#pragma once

#include <functional>

#include "gw/fincat/json.hpp"
#include "gw/psh/presheaf.hpp"

namespace gw {

/// Resolves a string category reference (a catalog name).
using CategoryResolver = std::function<CatPtr(const std::string &)>;

/// categoryRef is either an inline category object or a name passed to `resolve`.
inline CatPtr category_ref_from_json(const Json &j, const CategoryResolver &resolve) {
  if (j.is_object()) return share(category_from_json(j));
  if (j.is_string()) {
    if (!resolve) throw InputError("category reference \"" + j.get<std::string>() + "\" cannot be resolved here");
    return resolve(j.get<std::string>());
  }
  throw InputError("\"over\" must be a category object or a name");
}

inline Presheaf presheaf_from_json(const Json &j, const CategoryResolver &resolve = {}) {
  CatPtr C = category_ref_from_json(json_field(j, "over"), resolve);
  const Json &fib = json_field(j, "fibers");
  if (!fib.is_object()) throw InputError("\"fibers\" must be an object");
  Presheaf::Raw raw;
  raw.fibers.resize(C->object_count());
  for (const auto &[k, v] : fib.items()) {
    std::size_t a = C->object(k);
    if (!v.is_array()) throw InputError("fiber of " + k + " must be an array");
    for (const auto &x : v) raw.fibers[a].push_back(json_string(x, "element id"));
  }
  if (j.contains("action")) {
    const Json &act = j.at("action");
    if (!act.is_array()) throw InputError("\"action\" must be an array");
    for (const auto &t : act) {
      if (!t.is_array() || t.size() != 3) throw InputError("action entries are [x, f, x·f] triples");
      raw.action.push_back({json_string(t[0], "element"), json_string(t[1], "arrow"), json_string(t[2], "element")});
    }
  }
  return Presheaf::from_raw(C, raw);
}

/// `over` is written inline unless `ref` names it.
inline Json presheaf_to_json(const Presheaf &F, const std::string &ref = "") {
  Json j;
  j["over"] = ref.empty() ? category_to_json(*F.category()) : Json(ref);
  Presheaf::Raw raw = F.to_raw();
  Json fib = Json::object();
  for (std::size_t a = 0; a < raw.fibers.size(); ++a) fib[F.category()->object_name(a)] = raw.fibers[a];
  j["fibers"] = fib;
  Json act = Json::array();
  for (const auto &[x, f, y] : raw.action) act.push_back({x, f, y});
  j["action"] = act;
  return j;
}

} // namespace gw
