#pragma once

#include <json.hpp>

#include "gw/fincat/functor.hpp"

namespace gw {

using Json = nlohmann::ordered_json;

inline std::string json_string(const Json &j, const char *what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline const Json &json_field(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline RawCategory raw_category_from_json(const Json &j) {
  RawCategory r;
  const Json &objs = json_field(j, "objects");
  if (!objs.is_array()) throw InputError("\"objects\" must be an array");
  for (const auto &o : objs) r.objects.push_back(json_string(o, "object id"));
  const Json &arrows = json_field(j, "arrows");
  if (!arrows.is_array()) throw InputError("\"arrows\" must be an array");
  for (const auto &a : arrows)
    r.arrows.push_back({json_string(json_field(a, "id"), "arrow id"), json_string(json_field(a, "dom"), "dom"),
                        json_string(json_field(a, "cod"), "cod")});
  const Json &comp = json_field(j, "compose");
  if (!comp.is_array()) throw InputError("\"compose\" must be an array");
  for (const auto &t : comp) {
    if (!t.is_array() || t.size() != 3) throw InputError("compose entries are [g, f, gf] triples");
    r.compose.push_back({json_string(t[0], "arrow"), json_string(t[1], "arrow"), json_string(t[2], "arrow")});
  }
  const Json &ids = json_field(j, "identities");
  if (!ids.is_object()) throw InputError("\"identities\" must be an object");
  for (const auto &[k, v] : ids.items()) r.identities.emplace_back(k, json_string(v, "identity arrow"));
  return r;
}

inline FinCategory category_from_json(const Json &j) { return validate_category(raw_category_from_json(j)); }

inline Json category_to_json(const FinCategory &c) {
  RawCategory r = c.to_raw();
  Json j;
  j["objects"] = r.objects;
  Json arrows = Json::array();
  for (const auto &a : r.arrows) arrows.push_back({{"id", a.id}, {"dom", a.dom}, {"cod", a.cod}});
  j["arrows"] = arrows;
  Json comp = Json::array();
  for (const auto &t : r.compose) comp.push_back({t[0], t[1], t[2]});
  j["compose"] = comp;
  Json ids = Json::object();
  for (const auto &[o, f] : r.identities) ids[o] = f;
  j["identities"] = ids;
  return j;
}

} // namespace gw
