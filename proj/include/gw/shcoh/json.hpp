#pragma once

#include <functional>

#include "gw/exactlin/json.hpp"
#include "gw/shcoh/sheaf.hpp"
#include "gw/site/json.hpp"

namespace gw {

using SpaceResolver = std::function<FiniteSpace(const std::string &)>;

inline FiniteSpace space_ref_from_json(const Json &j, const SpaceResolver &resolve) {
  if (j.is_object()) return space_from_json(j);
  if (j.is_string()) {
    if (!resolve) throw InputError("space reference \"" + j.get<std::string>() + "\" cannot be resolved here");
    return resolve(j.get<std::string>());
  }
  throw InputError("\"space\" must be a space object or a name");
}

namespace detail {
inline std::vector<std::int64_t> factors_from_json(const Json &j) {
  if (!j.is_array()) throw InputError("a group is an array of invariant factors");
  std::vector<std::int64_t> f;
  for (const auto &v : j) {
    Int d = int_from_json(v);
    if (d < 2 || !d.fits_slong_p()) throw InputError("invariant factors must be integers ≥ 2");
    f.push_back(d.get_si());
  }
  return f;
}
} // namespace detail

/// {"space", "stalks": {pt: [factors]}, "restrictions": [{"from", "to", "matrix"}]},
/// or the shorthands {"space", "constant": [factors]} and
/// {"space", "skyscraper": {"point", "group"}}. Missing stalks are 0.
inline AbelianSheaf sheaf_from_json(const Json &j, const SpaceResolver &resolve = {}) {
  if (!j.is_object()) throw InputError("sheaf must be an object");
  FiniteSpace X = space_ref_from_json(json_field(j, "space"), resolve);
  if (j.contains("constant")) return constant_sheaf(X, detail::factors_from_json(j.at("constant")));
  if (j.contains("skyscraper")) {
    const Json &s = j.at("skyscraper");
    return skyscraper(X, X.point(json_string(json_field(s, "point"), "point")),
                      detail::factors_from_json(json_field(s, "group")));
  }
  std::vector<CyclicProduct> st(X.point_count());
  const Json &sj = json_field(j, "stalks");
  if (!sj.is_object()) throw InputError("\"stalks\" must be an object");
  for (const auto &[k, v] : sj.items()) st[X.point(k)] = CyclicProduct(detail::factors_from_json(v));
  std::vector<AbelianSheaf::Restriction> rs;
  if (j.contains("restrictions")) {
    for (const auto &r : j.at("restrictions")) {
      std::size_t q = X.point(json_string(json_field(r, "from"), "point"));
      std::size_t p = X.point(json_string(json_field(r, "to"), "point"));
      IntMatrix m = int_matrix_from_json(json_field(r, "matrix"), st[q].rank());
      Mat64 a(m.rows(), m.cols());
      for (std::size_t x = 0; x < m.rows(); ++x)
        for (std::size_t y = 0; y < m.cols(); ++y) {
          if (!m(x, y).fits_slong_p()) throw InputError("restriction entry too large");
          a(x, y) = m(x, y).get_si();
        }
      rs.push_back({q, p, a});
    }
  }
  return AbelianSheaf::make(X, st, rs);
}

inline Json sheaf_to_json(const AbelianSheaf &F, const std::string &space_ref = "") {
  const FiniteSpace &X = F.space();
  Json j;
  j["space"] = space_ref.empty() ? space_to_json(X) : Json(space_ref);
  Json st = Json::object();
  for (std::size_t p = 0; p < F.point_count(); ++p) st[X.point_name(p)] = F.stalk(p).m;
  j["stalks"] = st;
  Json rs = Json::array();
  for (std::size_t q = 0; q < F.point_count(); ++q)
    for (std::size_t p : F.star(q))
      if (p != q) rs.push_back({{"from", X.point_name(q)}, {"to", X.point_name(p)},
                                {"matrix", matrix_to_json(F.restriction(q, p).to_int())}});
  j["restrictions"] = rs;
  return j;
}

} // namespace gw
