#pragma once

#include "gw/frac/fraction.hpp"
#include "gw/psh/json.hpp"

namespace gw {

/// {"category": categoryRef, "sigma": [arrow ids]}
inline ArrowClass arrow_class_from_json(const Json &j, const CategoryResolver &resolve = {}) {
  CatPtr C = category_ref_from_json(json_field(j, "category"), resolve);
  const Json &s = json_field(j, "sigma");
  if (!s.is_array()) throw InputError("\"sigma\" must be an array of arrow ids");
  std::vector<std::string> names;
  for (const auto &a : s) names.push_back(json_string(a, "arrow id"));
  return ArrowClass::from_names(C, names);
}

inline Json arrow_class_to_json(const ArrowClass &S) {
  return {{"category", category_to_json(S.base())}, {"sigma", S.names()}};
}

/// Hom table as {"A => B": [class ids]} plus the arrow part of Q.
inline Json localized_to_json(const LocalizedCategory &L) {
  const FinCategory &C = *L.Q.source(), &D = *L.category;
  Json homs = Json::object();
  for (std::size_t A = 0; A < D.object_count(); ++A)
    for (std::size_t B = 0; B < D.object_count(); ++B) {
      Json ids = Json::array();
      for (auto k : D.hom(A, B)) ids.push_back(D.arrow_name(k));
      homs[D.object_name(A) + " => " + D.object_name(B)] = ids;
    }
  Json q = Json::object();
  for (std::size_t f = 0; f < C.arrow_count(); ++f) q[C.arrow_name(f)] = D.arrow_name(L.Q.on_arrow(f));
  return {{"category", category_to_json(D)}, {"homs", homs}, {"functor", q}};
}

} // namespace gw
