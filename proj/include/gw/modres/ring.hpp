#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gw/error.hpp"
#include "gw/exactlin/fp_group.hpp"

namespace gw {

/// Z/m_0 ⊕ … ⊕ Z/m_{k-1} with explicit coordinates. Element index is mixed
/// radix, first coordinate least significant.
struct CyclicProduct {
  std::vector<std::int64_t> m;

  CyclicProduct() = default;
  explicit CyclicProduct(std::vector<std::int64_t> factors) : m(std::move(factors)) {
    for (auto d : m)
      if (d < 1) throw InputError("cyclic factors must be positive");
  }

  std::size_t rank() const { return m.size(); }
  /// Order, or SIZE_MAX when it does not fit.
  std::size_t order() const {
    std::size_t o = 1;
    for (auto d : m) {
      if (o > SIZE_MAX / std::size_t(d)) return SIZE_MAX;
      o *= std::size_t(d);
    }
    return o;
  }
  std::vector<std::int64_t> coords(std::size_t idx) const {
    std::vector<std::int64_t> c(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      c[i] = std::int64_t(idx % std::size_t(m[i]));
      idx /= std::size_t(m[i]);
    }
    return c;
  }
  std::size_t index(const std::vector<std::int64_t> &c) const {
    std::size_t idx = 0;
    for (std::size_t i = m.size(); i-- > 0;) idx = idx * std::size_t(m[i]) + std::size_t(mod(c[i], m[i]));
    return idx;
  }
  std::size_t add(std::size_t a, std::size_t b) const {
    auto x = coords(a), y = coords(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return index(x);
  }
  std::size_t neg(std::size_t a) const {
    auto x = coords(a);
    for (auto &v : x) v = -v;
    return index(x);
  }
  std::size_t scale(std::int64_t k, std::size_t a) const {
    auto x = coords(a);
    for (auto &v : x) v *= k;
    return index(x);
  }
  std::size_t basis(std::size_t i) const {
    std::vector<std::int64_t> c(m.size());
    c.at(i) = 1;
    return index(c);
  }
  /// Additive order of an element.
  std::int64_t element_order(std::size_t a) const {
    auto x = coords(a);
    std::int64_t o = 1;
    for (std::size_t i = 0; i < x.size(); ++i) o = std::lcm(o, m[i] / std::gcd(x[i], m[i]));
    return o;
  }
  FpAbGroup fp() const {
    std::vector<Int> f(m.begin(), m.end());
    return FpAbGroup::from_factors(f);
  }
  std::string element_name(std::size_t a) const {
    auto x = coords(a);
    if (x.size() == 1) return std::to_string(x[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
    return s + ")";
  }
  bool operator==(const CyclicProduct &) const = default;

  static std::int64_t mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    return r < 0 ? r + b : r;
  }
};

/// Small dense integer matrix; entries are read modulo the target factors.
struct Mat64 {
  std::size_t rows = 0, cols = 0;
  std::vector<std::int64_t> a;

  Mat64() = default;
  Mat64(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  std::int64_t &operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  static Mat64 identity(std::size_t n) {
    Mat64 m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  IntMatrix to_int() const {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = Int(static_cast<long>((*this)(i, j)));
    return m;
  }
  static Mat64 from_int(const IntMatrix &m, const std::vector<std::int64_t> &mods) {
    Mat64 r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Int v = mod_nonneg(m(i, j), Int(static_cast<long>(mods[i])));
        r(i, j) = v.get_si();
      }
    return r;
  }
  bool operator==(const Mat64 &) const = default;
};

/// y = A x reduced into `tgt`.
inline std::vector<std::int64_t> apply_mod(const Mat64 &A, const std::vector<std::int64_t> &x, const CyclicProduct &tgt) {
  std::vector<std::int64_t> y(A.rows, 0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < A.cols; ++j) s += __int128(A(i, j)) * x[j];
    y[i] = std::int64_t(s % tgt.m[i]);
    if (y[i] < 0) y[i] += tgt.m[i];
  }
  return y;
}

inline Mat64 mul_mod(const Mat64 &A, const Mat64 &B, const CyclicProduct &tgt) {
  Mat64 C(A.rows, B.cols);
  for (std::size_t j = 0; j < B.cols; ++j) {
    std::vector<std::int64_t> col(B.rows);
    for (std::size_t k = 0; k < B.rows; ++k) col[k] = B(k, j);
    auto y = apply_mod(A, col, tgt);
    for (std::size_t i = 0; i < A.rows; ++i) C(i, j) = y[i];
  }
  return C;
}

/// Columns of a homomorphism matrix must have order dividing the source factor.
inline bool well_defined(const Mat64 &A, const CyclicProduct &src, const CyclicProduct &tgt) {
  for (std::size_t j = 0; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.rows; ++i)
      if ((__int128(A(i, j)) * src.m[j]) % tgt.m[i] != 0) return false;
  return true;
}

/// A finite ring with unit: additive group plus multiplication table on element indices.
class FiniteRing {
public:
  FiniteRing() = default;

  /// Validates distributivity, associativity and the unit laws exhaustively.
  static FiniteRing from_tables(CyclicProduct add, std::vector<std::size_t> mul, std::size_t one,
                                std::vector<std::string> names = {}) {
    FiniteRing R;
    R.add_ = std::move(add);
    const std::size_t n = R.add_.order();
    if (n > 4096) throw ResourceCapExceeded("ring too large for exhaustive validation");
    if (mul.size() != n * n) throw InputError("multiplication table must have |R|² entries");
    for (auto v : mul)
      if (v >= n) throw InputError("multiplication table entry out of range");
    if (one >= n) throw InputError("unit out of range");
    if (!names.empty() && names.size() != n) throw InputError("one name per ring element required");
    R.mul_ = std::move(mul);
    R.one_ = one;
    R.names_ = std::move(names);
    std::vector<Violation> bad;
    auto nm = [&](std::size_t x) { return R.name(x); };
    for (std::size_t a = 0; a < n && bad.size() < 8; ++a)
      for (std::size_t b = 0; b < n && bad.size() < 8; ++b)
        for (std::size_t c = 0; c < n && bad.size() < 8; ++c) {
          if (R.mul(R.add_.add(a, b), c) != R.add_.add(R.mul(a, c), R.mul(b, c)))
            bad.push_back({"NotDistributive", "(" + nm(a) + "+" + nm(b) + ")·" + nm(c)});
          if (R.mul(a, R.add_.add(b, c)) != R.add_.add(R.mul(a, b), R.mul(a, c)))
            bad.push_back({"NotDistributive", nm(a) + "·(" + nm(b) + "+" + nm(c) + ")"});
          if (R.mul(R.mul(a, b), c) != R.mul(a, R.mul(b, c)))
            bad.push_back({"NonAssociative", "(" + nm(a) + "," + nm(b) + "," + nm(c) + ")"});
        }
    for (std::size_t a = 0; a < n; ++a)
      if (R.mul(one, a) != a || R.mul(a, one) != a) {
        bad.push_back({"BadUnit", nm(one) + "·" + nm(a)});
        break;
      }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return R;
  }

  /// Z/n.
  static FiniteRing cyclic(std::int64_t n) {
    CyclicProduct g({n});
    std::vector<std::size_t> mul(std::size_t(n * n));
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b) mul[std::size_t(a * n + b)] = std::size_t(a * b % n);
    return from_tables(g, mul, n == 1 ? 0 : 1);
  }

  /// F2[x]/(x²); element a + b·x has index a + 2b.
  static FiniteRing dual_numbers_f2() {
    CyclicProduct g({2, 2});
    std::vector<std::size_t> mul(16);
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t q = 0; q < 4; ++q) {
        std::size_t a = p & 1, b = p >> 1, c = q & 1, d = q >> 1;
        mul[p * 4 + q] = (a * c) + 2 * ((a * d + b * c) & 1);
      }
    return from_tables(g, mul, 1, {"0", "1", "x", "1+x"});
  }

  const CyclicProduct &additive() const { return add_; }
  std::size_t size() const { return add_.order(); }
  std::size_t one() const { return one_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a * size() + b]; }
  std::size_t plus(std::size_t a, std::size_t b) const { return add_.add(a, b); }
  const std::vector<std::size_t> &mul_table() const { return mul_; }
  const std::vector<std::string> &names() const { return names_; }
  std::string name(std::size_t a) const { return names_.empty() ? add_.element_name(a) : names_[a]; }

  /// Additive generators: the canonical basis elements.
  std::vector<std::size_t> generators() const {
    std::vector<std::size_t> g;
    for (std::size_t i = 0; i < add_.rank(); ++i) g.push_back(add_.basis(i));
    return g;
  }

  /// Matrix of x ↦ r·x (left) or x ↦ x·r (right) on canonical coordinates.
  Mat64 left_matrix(std::size_t r) const { return side_matrix(r, true); }
  Mat64 right_matrix(std::size_t r) const { return side_matrix(r, false); }

  /// Smallest left ideal containing `gens`.
  std::vector<std::size_t> left_ideal(const std::vector<std::size_t> &gens) const {
    std::set<std::size_t> J{0};
    std::vector<std::size_t> todo(gens.begin(), gens.end());
    while (!todo.empty()) {
      std::size_t x = todo.back();
      todo.pop_back();
      if (J.count(x)) continue;
      std::vector<std::size_t> cur(J.begin(), J.end());
      J.insert(x);
      for (std::size_t r = 0; r < size(); ++r) todo.push_back(mul(r, x));
      for (std::size_t y : cur) todo.push_back(plus(x, y));
    }
    return {J.begin(), J.end()};
  }

  /// Every left ideal, as sorted element lists.
  std::vector<std::vector<std::size_t>> left_ideals() const {
    std::set<std::vector<std::size_t>> found{left_ideal({})};
    std::vector<std::vector<std::size_t>> frontier(found.begin(), found.end());
    while (!frontier.empty()) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto &J : frontier)
        for (std::size_t x = 0; x < size(); ++x) {
          if (std::binary_search(J.begin(), J.end(), x)) continue;
          std::vector<std::size_t> g = J;
          g.push_back(x);
          auto K = left_ideal(g);
          if (found.insert(K).second) next.push_back(K);
        }
      frontier = std::move(next);
    }
    return {found.begin(), found.end()};
  }

  bool is_commutative() const {
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  bool operator==(const FiniteRing &o) const { return add_ == o.add_ && mul_ == o.mul_ && one_ == o.one_; }

private:
  Mat64 side_matrix(std::size_t r, bool left) const {
    Mat64 A(add_.rank(), add_.rank());
    for (std::size_t j = 0; j < add_.rank(); ++j) {
      std::size_t e = add_.basis(j);
      auto c = add_.coords(left ? mul(r, e) : mul(e, r));
      for (std::size_t i = 0; i < c.size(); ++i) A(i, j) = c[i];
    }
    return A;
  }

  CyclicProduct add_;
  std::vector<std::size_t> mul_;
  std::size_t one_ = 0;
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const FiniteRing>;
inline RingPtr share(FiniteRing r) { return std::make_shared<const FiniteRing>(std::move(r)); }

/// A finite left R-module: additive group plus one action matrix per ring element.
class FiniteModule {
public:
  FiniteModule() = default;

  /// From matrices; checks well-definedness and the module laws on canonical generators,
  /// which together imply them for all elements.
  static FiniteModule from_matrices(RingPtr R, CyclicProduct add, std::vector<Mat64> act) {
    FiniteModule M;
    M.ring_ = std::move(R);
    M.add_ = std::move(add);
    const FiniteRing &r = *M.ring_;
    const std::size_t k = M.add_.rank();
    if (act.size() != r.size()) throw InputError("one action matrix per ring element required");
    for (auto d : M.add_.m)
      if (d < 2) throw InputError("module cyclic factors must be at least 2");
    for (auto &A : act) {
      if (A.rows != k || A.cols != k) throw InputError("action matrix has wrong shape");
      A = reduce(A, M.add_);
    }
    M.act_ = std::move(act);
    std::vector<Violation> bad;
    for (std::size_t s = 0; s < r.size(); ++s)
      if (!well_defined(M.act_[s], M.add_, M.add_)) bad.push_back({"IllDefinedAction", r.name(s)});
    if (bad.empty()) {
      if (!(M.act_[r.one()] == reduce(Mat64::identity(k), M.add_))) bad.push_back({"UnitActsNontrivially", ""});
      for (std::size_t a = 0; a < r.size() && bad.size() < 8; ++a)
        for (std::size_t b = 0; b < r.size() && bad.size() < 8; ++b) {
          if (!(reduce(sum(M.act_[a], M.act_[b]), M.add_) == M.act_[r.plus(a, b)]))
            bad.push_back({"ActionNotAdditive", "(" + r.name(a) + "+" + r.name(b) + ")·m"});
          if (!(mul_mod(M.act_[a], M.act_[b], M.add_) == M.act_[r.mul(a, b)]))
            bad.push_back({"ActionNotAssociative", "(" + r.name(a) + "·" + r.name(b) + ")·m"});
        }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return M;
  }

  /// From a full table act[r * |M| + m] = r·m; all module axioms are checked element-wise.
  static FiniteModule from_table(RingPtr R, CyclicProduct add, const std::vector<std::size_t> &table) {
    const FiniteRing &r = *R;
    const std::size_t n = add.order();
    if (n > 65536) throw ResourceCapExceeded("module too large for exhaustive validation");
    if (table.size() != r.size() * n) throw InputError("action table must have |R|·|M| entries");
    for (auto v : table)
      if (v >= n) throw InputError("action table entry out of range");
    auto act = [&](std::size_t s, std::size_t x) { return table[s * n + x]; };
    std::vector<Violation> bad;
    for (std::size_t s = 0; s < r.size() && bad.size() < 8; ++s)
      for (std::size_t x = 0; x < n && bad.size() < 8; ++x) {
        if (s == r.one() && act(s, x) != x) bad.push_back({"UnitActsNontrivially", add.element_name(x)});
        for (std::size_t y = 0; y < n && bad.size() < 8; ++y)
          if (act(s, add.add(x, y)) != add.add(act(s, x), act(s, y)))
            bad.push_back({"ActionNotAdditive", r.name(s) + "·(" + add.element_name(x) + "+" + add.element_name(y) + ")"});
        for (std::size_t t = 0; t < r.size() && bad.size() < 8; ++t) {
          if (act(r.plus(s, t), x) != add.add(act(s, x), act(t, x)))
            bad.push_back({"ActionNotAdditive", "(" + r.name(s) + "+" + r.name(t) + ")·" + add.element_name(x)});
          if (act(r.mul(s, t), x) != act(s, act(t, x)))
            bad.push_back({"ActionNotAssociative", "(" + r.name(s) + "·" + r.name(t) + ")·" + add.element_name(x)});
        }
      }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    std::vector<Mat64> mats;
    for (std::size_t s = 0; s < r.size(); ++s) {
      Mat64 A(add.rank(), add.rank());
      for (std::size_t j = 0; j < add.rank(); ++j) {
        auto c = add.coords(act(s, add.basis(j)));
        for (std::size_t i = 0; i < c.size(); ++i) A(i, j) = c[i];
      }
      mats.push_back(A);
    }
    return from_matrices(std::move(R), std::move(add), std::move(mats));
  }

  /// R acting on itself from the left.
  static FiniteModule regular(const RingPtr &R) {
    std::vector<Mat64> mats;
    for (std::size_t s = 0; s < R->size(); ++s) mats.push_back(R->left_matrix(s));
    return from_matrices(R, R->additive(), mats);
  }

  /// An abelian group with R acting through Z (valid when char R kills the group).
  static FiniteModule through_integers(const RingPtr &R, CyclicProduct add) {
    std::vector<Mat64> mats;
    for (std::size_t s = 0; s < R->size(); ++s) {
      // s acts as the integer k with k·1 = s, when s lies in the prime subring
      std::int64_t k = -1;
      std::size_t x = 0;
      for (std::int64_t t = 0; t <= std::int64_t(R->size()); ++t) {
        if (x == s) {
          k = t;
          break;
        }
        x = R->plus(x, R->one());
      }
      if (k < 0) throw InputError("ring is not generated by 1; give the action explicitly");
      Mat64 A = Mat64::identity(add.rank());
      for (auto &v : A.a) v *= k;
      mats.push_back(A);
    }
    return from_matrices(R, std::move(add), mats);
  }

  const RingPtr &ring() const { return ring_; }
  const CyclicProduct &additive() const { return add_; }
  std::size_t size() const { return add_.order(); }
  std::size_t rank() const { return add_.rank(); }
  const Mat64 &action_matrix(std::size_t r) const { return act_.at(r); }
  std::size_t act(std::size_t r, std::size_t x) const { return add_.index(apply_mod(act_.at(r), add_.coords(x), add_)); }
  std::size_t plus(std::size_t x, std::size_t y) const { return add_.add(x, y); }
  std::string element_name(std::size_t x) const { return add_.element_name(x); }

  /// Element-wise action table (|R|·|M| entries).
  std::vector<std::size_t> table() const {
    std::vector<std::size_t> t;
    for (std::size_t r = 0; r < ring_->size(); ++r)
      for (std::size_t x = 0; x < size(); ++x) t.push_back(act(r, x));
    return t;
  }

  bool operator==(const FiniteModule &o) const { return *ring_ == *o.ring_ && add_ == o.add_ && act_ == o.act_; }

private:
  static Mat64 reduce(Mat64 A, const CyclicProduct &g) {
    for (std::size_t i = 0; i < A.rows; ++i)
      for (std::size_t j = 0; j < A.cols; ++j) A(i, j) = CyclicProduct::mod(A(i, j), g.m[i]);
    return A;
  }
  static Mat64 sum(const Mat64 &A, const Mat64 &B) {
    Mat64 C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
  }

  RingPtr ring_;
  CyclicProduct add_;
  std::vector<Mat64> act_;
};

using ModPtr = std::shared_ptr<const FiniteModule>;
inline ModPtr share(FiniteModule m) { return std::make_shared<const FiniteModule>(std::move(m)); }

/// R-linear map given by a matrix on canonical coordinates.
class ModuleMap {
public:
  ModuleMap(ModPtr src, ModPtr tgt, Mat64 matrix) : src_(std::move(src)), tgt_(std::move(tgt)), mat_(std::move(matrix)) {
    const auto &S = src_->additive(), &T = tgt_->additive();
    if (mat_.rows != T.rank() || mat_.cols != S.rank()) throw InputError("module map matrix has wrong shape");
    if (!(*src_->ring() == *tgt_->ring())) throw InputError("module map between modules over different rings");
    for (std::size_t i = 0; i < mat_.rows; ++i)
      for (std::size_t j = 0; j < mat_.cols; ++j) mat_(i, j) = CyclicProduct::mod(mat_(i, j), T.m[i]);
    if (!well_defined(mat_, S, T)) throw ValidationError("IllDefinedMap", "a generator's image has the wrong order");
    for (std::size_t r = 0; r < src_->ring()->size(); ++r)
      if (!(mul_mod(mat_, src_->action_matrix(r), T) == mul_mod(tgt_->action_matrix(r), mat_, T)))
        throw ValidationError("NotRLinear", "fails to commute with " + src_->ring()->name(r));
  }

  static ModuleMap zero(const ModPtr &s, const ModPtr &t) { return ModuleMap(s, t, Mat64(t->rank(), s->rank())); }
  static ModuleMap identity(const ModPtr &m) { return ModuleMap(m, m, Mat64::identity(m->rank())); }

  const ModPtr &source() const { return src_; }
  const ModPtr &target() const { return tgt_; }
  const Mat64 &matrix() const { return mat_; }
  std::size_t operator()(std::size_t x) const {
    return tgt_->additive().index(apply_mod(mat_, src_->additive().coords(x), tgt_->additive()));
  }
  FpMorphism fp() const { return FpMorphism(src_->additive().fp(), tgt_->additive().fp(), mat_.to_int()); }
  bool is_injective() const { return gw::is_injective(fp()); }

private:
  ModPtr src_, tgt_;
  Mat64 mat_;
};

inline ModuleMap compose(const ModuleMap &g, const ModuleMap &f) {
  return ModuleMap(f.source(), g.target(), mul_mod(g.matrix(), f.matrix(), g.target()->additive()));
}

} // namespace gw
