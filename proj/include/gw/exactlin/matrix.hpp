#pragma once

#include <gmpxx.h>

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gw/error.hpp"

namespace gw {

using Int = mpz_class;
using Rat = mpq_class;
using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

/// Dense row-major matrix over an exact ring (Int or Rat).
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
      if (r.size() != cols_) throw InputError("ragged matrix literal");
      for (long v : r) data_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix diagonal(const std::vector<T> &d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(std::size_t rows, const std::vector<std::vector<T>> &cols) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw InputError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<std::vector<T>> columns() const {
    std::vector<std::vector<T>> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns of `this` followed by columns of `other`.
  Matrix hstack(const Matrix &other) const {
    if (other.rows_ != rows_ && other.cols_ != 0 && cols_ != 0)
      throw InputError("hstack row mismatch");
    std::size_t r = cols_ ? rows_ : other.rows_;
    Matrix m(r, cols_ + other.cols_);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
    }
    return m;
  }

  Matrix vstack(const Matrix &other) const {
    if (other.cols_ != cols_ && other.rows_ != 0 && rows_ != 0)
      throw InputError("vstack column mismatch");
    std::size_t c = rows_ ? cols_ : other.cols_;
    Matrix m(rows_ + other.rows_, c);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < other.rows_; ++i)
      for (std::size_t j = 0; j < c; ++j) m(rows_ + i, j) = other(i, j);
    return m;
  }

  Matrix select_columns(const std::vector<std::size_t> &idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }
  Matrix select_rows(const std::vector<std::size_t> &idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  /// Copy `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Matrix &block) {
    for (std::size_t i = 0; i < block.rows(); ++i)
      for (std::size_t j = 0; j < block.cols(); ++j) (*this)(r0 + i, c0 + j) = block(i, j);
  }

  bool is_zero() const {
    for (const auto &v : data_)
      if (v != 0) return false;
    return true;
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix &a, const std::vector<T> &x) {
    if (a.cols_ != x.size()) throw InputError("matrix-vector dimension mismatch");
    std::vector<T> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (x[k] != 0) y[i] += a(i, k) * x[k];
    return y;
  }

  friend Matrix operator+(const Matrix &a, const Matrix &b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix sum dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix &a, const Matrix &b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix difference dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }

  friend std::ostream &operator<<(std::ostream &os, const Matrix &m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << "]";
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

/// n/d in lowest terms (the raw mpq constructor does not canonicalize).
inline Rat make_rat(const Int &n, const Int &d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline RatMatrix to_rational(const IntMatrix &a) {
  RatMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  return r;
}

inline RatVector to_rational(const IntVector &v) { return RatVector(v.begin(), v.end()); }

inline Int lcm_int(const Int &a, const Int &b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int gcd_int(const Int &a, const Int &b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Floor division and the matching nonnegative remainder (for b > 0).
inline Int floor_div(const Int &a, const Int &b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline Int mod_nonneg(const Int &a, const Int &b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Least common multiple of all denominators of a rational matrix.
inline Int common_denominator(const RatMatrix &a) {
  Int d = 1;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = lcm_int(d, a(i, j).get_den());
  return d;
}

/// Exact integer matrix `scale * a`; requires `scale` to clear all denominators.
inline IntMatrix scaled_to_integer(const RatMatrix &a, const Int &scale) {
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rat v = a(i, j) * scale;
      if (v.get_den() != 1) throw Error("scale does not clear denominators");
      r(i, j) = v.get_num();
    }
  return r;
}

inline bool is_integral(const RatVector &v) {
  for (const auto &x : v)
    if (x.get_den() != 1) return false;
  return true;
}

inline IntVector to_integer(const RatVector &v) {
  IntVector r;
  r.reserve(v.size());
  for (const auto &x : v) {
    if (x.get_den() != 1) throw Error("non-integral vector");
    r.push_back(x.get_num());
  }
  return r;
}

} // namespace gw
