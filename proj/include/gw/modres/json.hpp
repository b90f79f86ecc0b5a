#pragma once

#include <functional>

#include "gw/exactlin/json.hpp"
#include "gw/fincat/json.hpp"
#include "gw/modres/ring.hpp"

namespace gw {

using RingResolver = std::function<RingPtr(const std::string &)>;

namespace detail {
inline std::size_t json_index(const Json &j, std::size_t bound) {
  if (!j.is_number_integer() || j.get<long long>() < 0 || std::size_t(j.get<long long>()) >= bound)
    throw InputError("element index out of range: " + j.dump());
  return std::size_t(j.get<long long>());
}

inline CyclicProduct invariants_from_json(const Json &j) {
  const Json &inv = json_field(j, "invariants");
  if (!inv.is_array()) throw InputError("\"invariants\" must be an array");
  std::vector<std::int64_t> f;
  for (const auto &v : inv) {
    Int d = int_from_json(v);
    if (d < 2 || !d.fits_slong_p()) throw InputError("invariant factors must be integers ≥ 2");
    f.push_back(d.get_si());
  }
  return CyclicProduct(f);
}

/// Reads [a, b, c] triples of element indices into a full table t[a * cols + b] = c.
inline std::vector<std::size_t> triple_table(const Json &j, const char *key, std::size_t rows, std::size_t cols,
                                             std::size_t range) {
  const Json &t = json_field(j, key);
  if (!t.is_array()) throw InputError(std::string("\"") + key + "\" must be an array of triples");
  std::vector<std::size_t> out(rows * cols, SIZE_MAX);
  for (const auto &e : t) {
    if (!e.is_array() || e.size() != 3) throw InputError(std::string(key) + " entries are [a, b, c] triples");
    std::size_t a = json_index(e[0], rows), b = json_index(e[1], cols), c = json_index(e[2], range);
    if (out[a * cols + b] != SIZE_MAX && out[a * cols + b] != c)
      throw InputError(std::string(key) + ": conflicting entries for " + std::to_string(a) + ", " + std::to_string(b));
    out[a * cols + b] = c;
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] == SIZE_MAX)
      throw InputError(std::string(key) + ": missing entry for " + std::to_string(i / cols) + ", " + std::to_string(i % cols));
  return out;
}
} // namespace detail

inline FiniteRing ring_from_json(const Json &j) {
  if (!j.is_object()) throw InputError("ring must be an object");
  CyclicProduct add = detail::invariants_from_json(j);
  const std::size_t n = add.order();
  if (n > 4096) throw ResourceCapExceeded("ring too large");
  auto mul = detail::triple_table(j, "mul", n, n, n);
  std::size_t one = detail::json_index(json_field(j, "one"), n);
  std::vector<std::string> names;
  if (j.contains("names")) {
    for (const auto &s : j.at("names")) names.push_back(json_string(s, "element name"));
  }
  return FiniteRing::from_tables(add, mul, one, names);
}

inline Json ring_to_json(const FiniteRing &R) {
  Json j;
  j["invariants"] = R.additive().m;
  Json mul = Json::array();
  for (std::size_t a = 0; a < R.size(); ++a)
    for (std::size_t b = 0; b < R.size(); ++b) mul.push_back({a, b, R.mul(a, b)});
  j["mul"] = mul;
  j["one"] = R.one();
  if (!R.names().empty()) j["names"] = R.names();
  return j;
}

inline RingPtr ring_ref_from_json(const Json &j, const RingResolver &resolve) {
  if (j.is_object()) return share(ring_from_json(j));
  if (j.is_string()) {
    if (!resolve) throw InputError("ring reference \"" + j.get<std::string>() + "\" cannot be resolved here");
    return resolve(j.get<std::string>());
  }
  throw InputError("\"ring\" must be a ring object or a name");
}

inline FiniteModule module_from_json(const Json &j, const RingResolver &resolve = {}) {
  if (!j.is_object()) throw InputError("module must be an object");
  RingPtr R = ring_ref_from_json(json_field(j, "ring"), resolve);
  CyclicProduct add = detail::invariants_from_json(j);
  const std::size_t n = add.order();
  if (n > 65536) throw ResourceCapExceeded("module too large");
  auto table = detail::triple_table(j, "action", R->size(), n, n);
  return FiniteModule::from_table(R, add, table);
}

inline Json module_to_json(const FiniteModule &M, const std::string &ring_ref = "") {
  Json j;
  j["ring"] = ring_ref.empty() ? ring_to_json(*M.ring()) : Json(ring_ref);
  j["invariants"] = M.additive().m;
  Json act = Json::array();
  for (std::size_t r = 0; r < M.ring()->size(); ++r)
    for (std::size_t x = 0; x < M.size(); ++x) act.push_back({r, x, M.act(r, x)});
  j["action"] = act;
  return j;
}

} // namespace gw
