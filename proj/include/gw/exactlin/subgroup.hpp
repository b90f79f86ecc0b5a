#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gw/exactlin/fp_group.hpp"

namespace gw {

/// A subgroup V + Λ of Q^m: a rational subspace V plus a finitely generated
/// lattice Λ. Canonical form: V as RREF rows; Λ reduced modulo V (zero at V's
/// pivot coordinates) and in column Hermite form on the remaining coordinates.
/// Two subgroups are equal iff their canonical forms are identical.
class Subgroup {
public:
  Subgroup() = default;

  /// Subgroup generated by the columns of `space` (as a Q-span) and the
  /// columns of `lattice` (as a Z-span), both with `dim` rows.
  static Subgroup make(std::size_t dim, const RatMatrix &space, const RatMatrix &lattice) {
    Subgroup s;
    s.dim_ = dim;
    if (space.cols() && space.rows() != dim) throw InputError("subspace generators have wrong length");
    if (lattice.cols() && lattice.rows() != dim) throw InputError("lattice generators have wrong length");
    RowEchelon e = space.cols() ? rref(space.transpose()) : RowEchelon{RatMatrix(0, dim), {}};
    s.space_ = e.R.rows() ? e.R : RatMatrix(0, dim);
    s.pivots_ = e.pivots;
    s.build_free_coordinates();

    // project lattice generators to the free coordinates, then Hermite-reduce
    const std::size_t k = s.free_.size();
    RatMatrix proj(k, lattice.cols());
    for (std::size_t j = 0; j < lattice.cols(); ++j) {
      RatVector v = s.project(lattice.column(j));
      for (std::size_t i = 0; i < k; ++i) proj(i, j) = v[i];
    }
    Int den = common_denominator(proj);
    IntMatrix basis = lattice.cols() ? hermite_normal_form(scaled_to_integer(proj, den), false).basis()
                                     : IntMatrix(k, 0);
    s.lattice_ = RatMatrix(dim, basis.cols());
    for (std::size_t j = 0; j < basis.cols(); ++j)
      for (std::size_t i = 0; i < k; ++i) s.lattice_(s.free_[i], j) = make_rat(basis(i, j), den);
    return s;
  }

  static Subgroup zero(std::size_t dim) { return make(dim, RatMatrix(dim, 0), RatMatrix(dim, 0)); }
  static Subgroup full(std::size_t dim) { return make(dim, RatMatrix::identity(dim), RatMatrix(dim, 0)); }
  static Subgroup space(const RatMatrix &gens) { return make(gens.rows(), gens, RatMatrix(gens.rows(), 0)); }
  static Subgroup lattice(const RatMatrix &gens) { return make(gens.rows(), RatMatrix(gens.rows(), 0), gens); }
  static Subgroup integer_lattice(std::size_t dim) { return lattice(RatMatrix::identity(dim)); }

  std::size_t dim() const { return dim_; }
  std::size_t space_dim() const { return pivots_.size(); }
  std::size_t lattice_rank() const { return lattice_.cols(); }
  /// Subspace basis as columns (dim × space_dim).
  RatMatrix space_basis() const { return space_.transpose(); }
  /// Canonical lattice basis as columns (dim × lattice_rank).
  const RatMatrix &lattice_basis() const { return lattice_; }
  const std::vector<std::size_t> &free_coordinates() const { return free_; }

  /// Coordinates of x modulo the subspace (length dim - space_dim).
  RatVector project(const RatVector &x) const {
    RatVector r = x;
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
      Rat c = r[pivots_[k]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (space_(k, j) != 0) r[j] -= c * space_(k, j);
    }
    RatVector out(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i) out[i] = r[free_[i]];
    return out;
  }

  /// Matrix of `project` ((dim - space_dim) × dim).
  RatMatrix projector() const {
    RatMatrix p(free_.size(), dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      RatVector e(dim_);
      e[j] = 1;
      RatVector c = project(e);
      for (std::size_t i = 0; i < free_.size(); ++i) p(i, j) = c[i];
    }
    return p;
  }

  /// Integer coordinates of x's projection in the canonical lattice basis, if x ∈ this.
  std::optional<IntVector> lattice_coordinates(const RatVector &x) const {
    RatVector r = project(x);
    IntVector c(lattice_.cols());
    std::size_t row = 0;
    for (std::size_t j = 0; j < lattice_.cols(); ++j) {
      // pivot of column j in free coordinates
      while (row < free_.size() && lattice_(free_[row], j) == 0) {
        if (r[row] != 0) return std::nullopt;
        ++row;
      }
      Rat q = r[row] / lattice_(free_[row], j);
      if (q.get_den() != 1) return std::nullopt;
      c[j] = q.get_num();
      for (std::size_t i = row; i < free_.size(); ++i)
        if (lattice_(free_[i], j) != 0) r[i] -= q * lattice_(free_[i], j);
      ++row;
    }
    for (std::size_t i = 0; i < free_.size(); ++i)
      if (r[i] != 0) return std::nullopt;
    return c;
  }

  bool contains(const RatVector &x) const {
    if (x.size() != dim_) throw InputError("vector has wrong dimension");
    return lattice_coordinates(x).has_value();
  }

  bool contains(const Subgroup &o) const {
    if (o.dim_ != dim_) return false;
    RatMatrix vb = o.space_basis();
    for (std::size_t j = 0; j < vb.cols(); ++j) {
      // a subspace lies in V + Λ only if it lies in V
      RatVector p = project(vb.column(j));
      for (const auto &x : p)
        if (x != 0) return false;
    }
    for (std::size_t j = 0; j < o.lattice_.cols(); ++j)
      if (!contains(o.lattice_.column(j))) return false;
    return true;
  }

  friend Subgroup operator+(const Subgroup &a, const Subgroup &b) {
    if (a.dim_ != b.dim_) throw InputError("subgroup sum dimension mismatch");
    return make(a.dim_, a.space_basis().hstack(b.space_basis()), a.lattice_.hstack(b.lattice_));
  }

  friend bool operator==(const Subgroup &a, const Subgroup &b) {
    return a.dim_ == b.dim_ && a.space_ == b.space_ && a.lattice_ == b.lattice_;
  }

  /// Image under a rational linear map (n × dim).
  Subgroup image(const RatMatrix &a) const {
    if (a.cols() != dim_) throw InputError("map does not act on this subgroup");
    return make(a.rows(), a * space_basis(), a * lattice_);
  }

  std::string describe() const {
    return "V(dim " + std::to_string(space_dim()) + ") + Λ(rank " + std::to_string(lattice_rank()) + ") in Q^" +
           std::to_string(dim_);
  }

private:
  void build_free_coordinates() {
    std::vector<bool> piv(dim_, false);
    for (auto p : pivots_) piv[p] = true;
    free_.clear();
    for (std::size_t j = 0; j < dim_; ++j)
      if (!piv[j]) free_.push_back(j);
  }

  std::size_t dim_ = 0;
  RatMatrix space_{0, 0};
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
  RatMatrix lattice_{0, 0};
};

/// {x ∈ domain : A x ∈ target}, itself a subspace-plus-lattice subgroup.
inline Subgroup preimage(const RatMatrix &a, const Subgroup &domain, const Subgroup &target) {
  if (a.cols() != domain.dim() || a.rows() != target.dim()) throw InputError("preimage: shape mismatch");
  const std::size_t m = domain.dim();
  RatMatrix B = domain.space_basis();
  const RatMatrix &G = domain.lattice_basis();
  RatMatrix Pt = target.projector();
  RatMatrix Lgens(Pt.rows(), target.lattice_rank());
  for (std::size_t j = 0; j < target.lattice_rank(); ++j) {
    RatVector v = target.project(target.lattice_basis().column(j));
    for (std::size_t i = 0; i < v.size(); ++i) Lgens(i, j) = v[i];
  }
  RatMatrix M1 = Pt * (a * B);
  RatMatrix M2 = Pt * (a * G);
  RatMatrix K1 = nullspace(M1);
  RatMatrix spaceGens = B * K1;

  // pairs (c, e) with M2 c - Lgens e ∈ col(M1), i.e. P_U (M2 c - Lgens e) = 0
  Subgroup U = Subgroup::space(M1.cols() ? M1 : RatMatrix(Pt.rows(), 0));
  RatMatrix PU = U.projector();
  RatMatrix mixed = (PU * M2).hstack(PU * Lgens);
  for (std::size_t i = 0; i < mixed.rows(); ++i)
    for (std::size_t j = M2.cols(); j < mixed.cols(); ++j) mixed(i, j) = -mixed(i, j);
  if (mixed.rows() == 0) mixed = RatMatrix(0, M2.cols() + Lgens.cols());
  IntMatrix ker = integer_kernel(mixed);

  std::vector<RatVector> latticeGens;
  for (std::size_t col = 0; col < ker.cols(); ++col) {
    RatVector c(M2.cols()), e(Lgens.cols());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = ker(i, col);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = ker(c.size() + i, col);
    RatVector rhs = Lgens * e;
    RatVector m2c = M2 * c;
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= m2c[i];
    RatVector t(B.cols());
    if (B.cols()) {
      auto sol = rational_solve(M1, rhs);
      if (!sol) throw Error("preimage: inconsistent Ore completion");
      t = *sol;
    }
    RatVector x = B.cols() ? B * t : RatVector(m);
    if (G.cols()) {
      RatVector gc = G * c;
      for (std::size_t i = 0; i < m; ++i) x[i] += gc[i];
    }
    latticeGens.push_back(std::move(x));
  }
  return Subgroup::make(m, spaceGens.cols() ? spaceGens : RatMatrix(m, 0), RatMatrix::from_columns(m, latticeGens));
}

/// Some x ∈ domain with A x - b ∈ target, if one exists.
inline std::optional<RatVector> solve_modulo(const RatMatrix &a, const Subgroup &domain, const Subgroup &target,
                                             const RatVector &b) {
  const std::size_t m = domain.dim();
  // domain × Z, map (x, λ) ↦ A x - λ b
  RatMatrix ext(a.rows(), m + 1);
  ext.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) ext(i, m) = -b[i];
  RatMatrix sp(m + 1, domain.space_dim()), lat(m + 1, domain.lattice_rank() + 1);
  sp.set_block(0, 0, domain.space_basis());
  lat.set_block(0, 0, domain.lattice_basis());
  lat(m, domain.lattice_rank()) = 1;
  Subgroup pre = preimage(ext, Subgroup::make(m + 1, sp, lat), target);
  // need a lattice combination whose last coordinate is 1
  const RatMatrix &L = pre.lattice_basis();
  IntMatrix lastRow(1, L.cols());
  for (std::size_t j = 0; j < L.cols(); ++j) {
    // the subspace part of `pre` has last coordinate 0, so projecting keeps it exact
    if (L(m, j).get_den() != 1) throw Error("solve_modulo: non-integral scalar coordinate");
    lastRow(0, j) = L(m, j).get_num();
  }
  auto coeffs = integer_solve(lastRow, IntVector{1});
  if (!coeffs) return std::nullopt;
  RatVector x(m);
  for (std::size_t j = 0; j < L.cols(); ++j)
    if ((*coeffs)[j] != 0)
      for (std::size_t i = 0; i < m; ++i) x[i] += L(i, j) * Rat((*coeffs)[j]);
  return x;
}

/// Isomorphism type Q^a ⊕ (Q/Z)^b ⊕ (finitely generated part).
struct QuotientType {
  std::size_t rational_rank = 0; // copies of Q
  std::size_t divisible_rank = 0; // copies of Q/Z
  std::vector<Int> factors; // invariant factors of the f.g. part, 0 = Z

  bool is_finite() const {
    if (rational_rank || divisible_rank) return false;
    for (const auto &f : factors)
      if (f == 0) return false;
    return true;
  }
  bool is_trivial() const { return !rational_rank && !divisible_rank && factors.empty(); }
  friend bool operator==(const QuotientType &, const QuotientType &) = default;

  std::string describe() const {
    std::vector<std::string> parts;
    if (rational_rank) parts.push_back(rational_rank == 1 ? "Q" : "Q^" + std::to_string(rational_rank));
    if (divisible_rank) parts.push_back(divisible_rank == 1 ? "Q/Z" : "(Q/Z)^" + std::to_string(divisible_rank));
    if (!factors.empty()) parts.push_back(FpAbGroup::describe_factors(factors));
    if (parts.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ⊕ " : "") + parts[i];
    return s;
  }
};

/// The group (V + Λ) / (V_L + Λ_L) for a numerator and a contained denominator.
class LatticePairGroup {
public:
  LatticePairGroup(Subgroup numerator, Subgroup denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (num_.dim() != den_.dim()) throw InputError("lattice pair: ambient dimension mismatch");
    if (!num_.contains(den_))
      throw ValidationError("ContainmentViolation", "denominator not contained in numerator");
  }

  const Subgroup &numerator() const { return num_; }
  const Subgroup &denominator() const { return den_; }
  std::size_t ambient_dim() const { return num_.dim(); }

  bool contains(const RatVector &x) const { return num_.contains(x); }
  bool is_zero(const RatVector &x) const { return den_.contains(x); }

  friend bool operator==(const LatticePairGroup &a, const LatticePairGroup &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  QuotientType type() const {
    // pass to Q^m / V_L
    RatMatrix P = den_.projector();
    Subgroup num = num_.image(P);
    Subgroup den = den_.image(P); // a pure lattice now
    const std::size_t k = num.dim();
    QuotientType t;
    // divisible part: V' / (V' ∩ Λ_L')
    RatMatrix Pv = num.projector();
    const RatMatrix &H = den.lattice_basis();
    std::size_t s = 0;
    if (H.cols()) {
      IntMatrix ker = integer_kernel(Pv * H);
      s = rank(H * to_rational(ker));
    }
    t.divisible_rank = s;
    t.rational_rank = num.space_dim() - s;
    // f.g. part: (Λ' mod V') / (Λ_L' mod V')
    RatMatrix lat = Pv * num.lattice_basis();
    RatMatrix sub = Pv * H;
    Subgroup top = Subgroup::lattice(lat.cols() ? lat : RatMatrix(Pv.rows(), 0));
    const RatMatrix &basis = top.lattice_basis();
    IntMatrix rels(basis.cols(), sub.cols());
    for (std::size_t j = 0; j < sub.cols(); ++j) {
      auto c = top.lattice_coordinates(sub.column(j));
      if (!c) throw ValidationError("ContainmentViolation", "denominator lattice escapes numerator");
      for (std::size_t i = 0; i < basis.cols(); ++i) rels(i, j) = (*c)[i];
    }
    (void)k;
    t.factors = FpAbGroup(basis.cols(), rels).invariant_factors();
    return t;
  }

private:
  Subgroup num_, den_;
};

/// Kernel and image of a rational map between lattice-pair groups.
struct KernelImage {
  LatticePairGroup kernel;
  LatticePairGroup image;
};

inline KernelImage latpair_kernel_image(const RatMatrix &a, const LatticePairGroup &src,
                                        const LatticePairGroup &dst) {
  if (a.cols() != src.ambient_dim() || a.rows() != dst.ambient_dim())
    throw InputError("lattice-pair map has wrong shape");
  Subgroup imNum = src.numerator().image(a);
  Subgroup imDen = src.denominator().image(a);
  if (!dst.numerator().contains(imNum))
    throw ValidationError("IllDefinedMap", "numerator not mapped into target numerator");
  if (!dst.denominator().contains(imDen))
    throw ValidationError("IllDefinedMap", "denominator not mapped into target denominator");
  Subgroup kerNum = preimage(a, src.numerator(), dst.denominator());
  return {LatticePairGroup(kerNum, src.denominator()), LatticePairGroup(imNum + dst.denominator(), dst.denominator())};
}

/// A lattice-pair group known to be finite, presented as an FpAbGroup on the
/// numerator's lattice generators, with a coordinate map from numerator vectors.
class FiniteQuotient {
public:
  explicit FiniteQuotient(const LatticePairGroup &g) : pair_(g) {
    const Subgroup &num = g.numerator(), &den = g.denominator();
    P_ = den.projector();
    // a finite quotient needs V ⊆ V_L
    RatMatrix pv = P_ * num.space_basis();
    if (!pv.is_zero()) throw ValidationError("InfiniteQuotient", "numerator subspace not killed");
    gens_ = num.lattice_basis();
    PG_ = P_ * gens_;
    const RatMatrix &H = den.lattice_basis();
    RatMatrix PH = P_ * H;
    // relations: integer c with PG c ∈ span_Z(PH)
    RatMatrix stacked = PG_.hstack(PH);
    for (std::size_t i = 0; i < stacked.rows(); ++i)
      for (std::size_t j = PG_.cols(); j < stacked.cols(); ++j) stacked(i, j) = -stacked(i, j);
    if (stacked.rows() == 0) stacked = RatMatrix(0, PG_.cols() + PH.cols());
    IntMatrix ker = integer_kernel(stacked);
    IntMatrix rels(gens_.cols(), ker.cols());
    for (std::size_t j = 0; j < ker.cols(); ++j)
      for (std::size_t i = 0; i < gens_.cols(); ++i) rels(i, j) = ker(i, j);
    group_ = FpAbGroup(gens_.cols(), rels);
    if (!group_.is_finite()) throw ValidationError("InfiniteQuotient", "free summand present");
    solver_ = hermite_normal_form(scaled_rows(PG_.hstack(PH)));
    den_scale_ = row_scales(PG_.hstack(PH));
  }

  const FpAbGroup &group() const { return group_; }
  const LatticePairGroup &pair() const { return pair_; }
  /// Representative numerator vector of the i-th presentation generator.
  RatVector generator_vector(std::size_t i) const { return gens_.column(i); }
  /// Representative of a canonical element.
  RatVector representative(const FpAbGroup::Element &e) const {
    IntVector c = group_.lift(e);
    RatVector x(gens_.rows());
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0)
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += gens_(i, j) * Rat(c[j]);
    return x;
  }

  /// Canonical element of the class of a numerator vector.
  FpAbGroup::Element coordinates(const RatVector &x) const {
    RatVector px = P_ * x;
    IntVector b(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
      Rat v = px[i] * den_scale_[i];
      if (v.get_den() != 1) throw ValidationError("NotInNumerator", "vector outside numerator");
      b[i] = v.get_num();
    }
    auto sol = integer_solve(solver_, b);
    if (!sol) throw ValidationError("NotInNumerator", "vector outside numerator");
    IntVector c(sol->begin(), sol->begin() + static_cast<long>(gens_.cols()));
    return group_.reduce(c);
  }

private:
  static std::vector<Int> row_scales(const RatMatrix &a) {
    std::vector<Int> s(a.rows(), Int(1));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) s[i] = lcm_int(s[i], a(i, j).get_den());
    return s;
  }
  static IntMatrix scaled_rows(const RatMatrix &a) {
    auto s = row_scales(a);
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j) * s[i]).get_num();
    return r;
  }

  LatticePairGroup pair_;
  RatMatrix P_, gens_, PG_;
  FpAbGroup group_;
  HermiteForm solver_;
  std::vector<Int> den_scale_;
};

} // namespace gw
