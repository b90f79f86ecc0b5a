#pragma once

#include <json.hpp>

#include "gw/exactlin/subgroup.hpp"

namespace gw {

using Json = nlohmann::ordered_json;

/// Matrices travel as arrays of rows of decimal strings; plain JSON integers
/// are accepted on input.
inline Int int_from_json(const Json &j) {
  if (j.is_string()) {
    Int v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw InputError("not a decimal integer: " + j.dump());
    return v;
  }
  if (j.is_number_integer()) return Int(j.get<long>());
  throw InputError("expected an integer, got " + j.dump());
}

inline Rat rat_from_json(const Json &j) {
  if (j.is_string()) {
    Rat v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw InputError("not a rational: " + j.dump());
    v.canonicalize();
    return v;
  }
  return Rat(int_from_json(j));
}

template <class T> Json matrix_to_json(const Matrix<T> &m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
    rows.push_back(std::move(r));
  }
  return rows;
}

inline IntMatrix int_matrix_from_json(const Json &j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  std::size_t cols = j.empty() ? cols_if_empty : j[0].size();
  IntMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
  }
  return m;
}

inline RatMatrix rat_matrix_from_json(const Json &j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  std::size_t cols = j.empty() ? cols_if_empty : j[0].size();
  RatMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rat_from_json(j[i][c]);
  }
  return m;
}

inline Json factors_to_json(const std::vector<Int> &fs) {
  Json a = Json::array();
  for (const auto &f : fs) a.push_back(f.get_str());
  return a;
}

} // namespace gw
