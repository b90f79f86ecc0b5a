#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "gw/exactlin/matrix.hpp"

namespace gw {

namespace detail {

// row_i -= q * row_t, restricted to columns [from, cols)
inline void row_submul(IntMatrix &m, std::size_t i, std::size_t t, const Int &q, std::size_t from = 0) {
  for (std::size_t j = from; j < m.cols(); ++j)
    if (m(t, j) != 0) mpz_submul(m(i, j).get_mpz_t(), q.get_mpz_t(), m(t, j).get_mpz_t());
}
// col_j -= q * col_t
inline void col_submul(IntMatrix &m, std::size_t j, std::size_t t, const Int &q, std::size_t from = 0) {
  for (std::size_t i = from; i < m.rows(); ++i)
    if (m(i, t) != 0) mpz_submul(m(i, j).get_mpz_t(), q.get_mpz_t(), m(i, t).get_mpz_t());
}
inline void negate_row(IntMatrix &m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}
inline void negate_col(IntMatrix &m, std::size_t j) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
}
inline Int tdiv(const Int &a, const Int &b) {
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

} // namespace detail

/// Smith normal form with transforms: U * A * V = D, U and V unimodular,
/// D diagonal with nonnegative entries d_0 | d_1 | ... (zeros last).
/// `Uinv` is the inverse of U, kept so callers can lift canonical coordinates.
struct SmithForm {
  IntMatrix D, U, V, Uinv;

  std::size_t rank() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (D(i, i) != 0) ++r;
    return r;
  }
  /// Diagonal entry at row i, 0 beyond the square part.
  Int diag(std::size_t i) const { return i < D.cols() ? D(i, i) : Int(0); }
};

inline SmithForm smith_normal_form(const IntMatrix &a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm s{a, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(m)};
  IntMatrix &D = s.D;

  // Row op helpers keep U and Uinv in sync.
  auto row_sub = [&](std::size_t i, std::size_t t, const Int &q) {
    detail::row_submul(D, i, t, q);
    detail::row_submul(s.U, i, t, q);
    // Uinv <- Uinv * (I + q e_i e_t^T): col_t += q col_i
    Int mq = -q;
    detail::col_submul(s.Uinv, t, i, mq);
  };
  auto row_swap = [&](std::size_t i, std::size_t t) {
    D.swap_rows(i, t);
    s.U.swap_rows(i, t);
    s.Uinv.swap_cols(i, t);
  };
  auto col_sub = [&](std::size_t j, std::size_t t, const Int &q) {
    detail::col_submul(D, j, t, q);
    detail::col_submul(s.V, j, t, q);
  };
  auto col_swap = [&](std::size_t j, std::size_t t) {
    D.swap_cols(j, t);
    s.V.swap_cols(j, t);
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the trailing block
    bool found = false;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (D(i, j) != 0 && (!found || abs(D(i, j)) < abs(D(bi, bj)))) {
          found = true;
          bi = i;
          bj = j;
        }
    if (!found) break;
    row_swap(t, bi);
    col_swap(t, bj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int q = detail::tdiv(D(i, t), D(t, t));
        if (q != 0) row_sub(i, t, q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int q = detail::tdiv(D(t, j), D(t, t));
        if (q != 0) col_sub(j, t, q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) {
        // move the smallest remainder in row/column t to the pivot
        std::size_t pi = t, pj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (D(i, t) != 0 && abs(D(i, t)) < abs(D(pi, pj))) { pi = i; pj = t; }
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(t, j) != 0 && abs(D(t, j)) < abs(D(pi, pj))) { pi = t; pj = j; }
        row_swap(t, pi);
        col_swap(t, pj);
        continue;
      }
      // divisibility: the pivot must divide the whole trailing block
      bool bad = false;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(i, j) != 0 && !mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            // row_t += row_i
            row_sub(t, i, Int(-1));
            bad = true;
            break;
          }
      if (!bad) break;
    }
    if (D(t, t) < 0) {
      detail::negate_row(D, t);
      detail::negate_row(s.U, t);
      detail::negate_col(s.Uinv, t);
    }
  }
  return s;
}

/// Column-style Hermite form with transform: A * T = H. The first `pivots.size()`
/// columns of H are echelon (pivot rows strictly increasing, positive pivots,
/// entries left of each pivot reduced into [0, pivot)); the remaining columns are zero.
struct HermiteForm {
  IntMatrix H, T;
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return pivots.size(); }
  /// Basis of the integer kernel of A (columns of T with zero image).
  IntMatrix kernel() const {
    std::vector<std::size_t> idx;
    for (std::size_t j = pivots.size(); j < T.cols(); ++j) idx.push_back(j);
    return T.select_columns(idx);
  }
  /// Echelon basis of the column lattice of A.
  IntMatrix basis() const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < pivots.size(); ++j) idx.push_back(j);
    return H.select_columns(idx);
  }
};

inline HermiteForm hermite_normal_form(const IntMatrix &a, bool with_transform = true) {
  const std::size_t m = a.rows(), n = a.cols();
  HermiteForm h{a, with_transform ? IntMatrix::identity(n) : IntMatrix(), {}};
  IntMatrix &H = h.H;
  auto col_sub = [&](std::size_t j, std::size_t t, const Int &q) {
    detail::col_submul(H, j, t, q);
    if (with_transform) detail::col_submul(h.T, j, t, q);
  };
  auto col_swap = [&](std::size_t j, std::size_t t) {
    H.swap_cols(j, t);
    if (with_transform) h.T.swap_cols(j, t);
  };
  std::size_t c = 0;
  for (std::size_t i = 0; i < m && c < n; ++i) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t j = c; j < n; ++j)
        if (H(i, j) != 0 && (best == n || abs(H(i, j)) < abs(H(i, best)))) best = j;
      if (best == n) break;
      col_swap(c, best);
      bool clean = true;
      for (std::size_t j = c + 1; j < n; ++j) {
        if (H(i, j) == 0) continue;
        Int q = detail::tdiv(H(i, j), H(i, c));
        col_sub(j, c, q);
        if (H(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (H(i, c) == 0) continue;
    if (H(i, c) < 0) {
      detail::negate_col(H, c);
      if (with_transform) detail::negate_col(h.T, c);
    }
    for (std::size_t k = 0; k < c; ++k) {
      Int q = floor_div(H(i, k), H(i, c));
      if (q != 0) col_sub(k, c, q);
    }
    h.pivots.push_back(i);
    ++c;
  }
  return h;
}

/// Basis of the integer kernel {x in Z^n : A x = 0}.
inline IntMatrix integer_kernel(const IntMatrix &a) { return hermite_normal_form(a).kernel(); }

/// Some integer solution x of A x = b, if one exists.
inline std::optional<IntVector> integer_solve(const HermiteForm &h, const IntVector &b) {
  const IntMatrix &H = h.H;
  if (b.size() != H.rows()) throw InputError("integer_solve: length mismatch");
  IntVector y(H.cols());
  IntVector residual = b;
  std::size_t k = 0;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    if (k < h.pivots.size() && h.pivots[k] == i) {
      if (!mpz_divisible_p(residual[i].get_mpz_t(), H(i, k).get_mpz_t())) return std::nullopt;
      y[k] = residual[i] / H(i, k);
      for (std::size_t r = i; r < H.rows(); ++r)
        if (H(r, k) != 0) residual[r] -= y[k] * H(r, k);
      ++k;
    } else if (residual[i] != 0) {
      return std::nullopt;
    }
  }
  return h.T * y;
}

inline std::optional<IntVector> integer_solve(const IntMatrix &a, const IntVector &b) {
  return integer_solve(hermite_normal_form(a), b);
}

// ---------------------------------------------------------------------------
// Rational linear algebra

/// Reduced row echelon form; `pivots` lists pivot columns.
struct RowEchelon {
  RatMatrix R;
  std::vector<std::size_t> pivots;
};

inline RowEchelon rref(RatMatrix a) {
  RowEchelon e;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    Rat inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < r; ++i) keep.push_back(i);
  e.R = a.select_rows(keep);
  if (keep.empty()) e.R = RatMatrix(0, a.cols());
  return e;
}

inline std::size_t rank(const RatMatrix &a) { return rref(a).pivots.size(); }

/// Basis (as columns) of the rational nullspace of A.
inline RatMatrix nullspace(const RatMatrix &a) {
  RowEchelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(a.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.R(k, f);
    basis.push_back(std::move(v));
  }
  return RatMatrix::from_columns(a.cols(), basis);
}

/// Some rational solution of A x = b, if consistent.
inline std::optional<RatVector> rational_solve(const RatMatrix &a, const RatVector &b) {
  if (b.size() != a.rows()) throw InputError("rational_solve: length mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols()) = b[i];
  RowEchelon e = rref(aug);
  RatVector x(a.cols());
  for (std::size_t k = 0; k < e.pivots.size(); ++k) {
    if (e.pivots[k] == a.cols()) return std::nullopt;
    x[e.pivots[k]] = e.R(k, a.cols());
  }
  return x;
}

/// Integer solution of A x = b for rational A and b (scaled row by row).
inline std::optional<IntVector> integer_solve(const RatMatrix &a, const RatVector &b) {
  RatMatrix aug(a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols()) = b[i];
  IntMatrix ai(a.rows(), a.cols());
  IntVector bi(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Int d = 1;
    for (std::size_t j = 0; j <= a.cols(); ++j) d = lcm_int(d, aug(i, j).get_den());
    for (std::size_t j = 0; j < a.cols(); ++j) ai(i, j) = Rat(aug(i, j) * d).get_num();
    bi[i] = Rat(b[i] * d).get_num();
  }
  return integer_solve(ai, bi);
}

/// Integer kernel of a rational matrix (row scaling leaves the kernel unchanged).
inline IntMatrix integer_kernel(const RatMatrix &a) {
  IntMatrix ai(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Int d = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) d = lcm_int(d, a(i, j).get_den());
    for (std::size_t j = 0; j < a.cols(); ++j) ai(i, j) = Rat(a(i, j) * d).get_num();
  }
  return integer_kernel(ai);
}

/// Determinant by fraction-free elimination (tests use it to confirm unimodularity).
inline Int determinant(const IntMatrix &a) {
  if (a.rows() != a.cols()) throw InputError("determinant of non-square matrix");
  RatMatrix m = to_rational(a);
  Rat det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det.get_num();
}

} // namespace gw
