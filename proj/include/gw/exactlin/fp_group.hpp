#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gw/exactlin/normal_form.hpp"

namespace gw {

/// Finitely presented abelian group Z^gens / (column span of relations),
/// cached in Smith-canonical form. Elements are canonical coordinate vectors:
/// one entry per invariant factor d, reduced into [0, d) (free when d = 0).
class FpAbGroup {
public:
  using Element = IntVector;

  FpAbGroup() : FpAbGroup(0, IntMatrix(0, 0)) {}

  FpAbGroup(std::size_t gens, IntMatrix rels) : gens_(gens), rels_(std::move(rels)) {
    if (rels_.cols() == 0) rels_ = IntMatrix(gens_, 0);
    if (rels_.rows() != gens_) throw InputError("relation matrix must have one row per generator");
    SmithForm s = smith_normal_form(rels_);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < gens_; ++i) {
      Int d = s.diag(i);
      if (d == 1) continue;
      kept.push_back(i);
      factors_.push_back(d);
    }
    coords_ = s.U.select_rows(kept);
    if (kept.empty()) coords_ = IntMatrix(0, gens_);
    lift_ = s.Uinv.select_columns(kept);
    if (kept.empty()) lift_ = IntMatrix(gens_, 0);
  }

  /// Z/n, with n = 0 meaning Z.
  static FpAbGroup cyclic(const Int &n) {
    IntMatrix r(1, n == 0 ? 0 : 1);
    if (n != 0) r(0, 0) = n;
    return FpAbGroup(1, r);
  }
  static FpAbGroup from_factors(const std::vector<Int> &factors) {
    std::vector<IntVector> cols;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i] == 0) continue;
      IntVector c(factors.size());
      c[i] = factors[i];
      cols.push_back(c);
    }
    return FpAbGroup(factors.size(), IntMatrix::from_columns(factors.size(), cols));
  }
  static FpAbGroup free(std::size_t rank) { return FpAbGroup(rank, IntMatrix(rank, 0)); }
  static FpAbGroup trivial() { return FpAbGroup(); }

  std::size_t generator_count() const { return gens_; }
  const IntMatrix &relations() const { return rels_; }
  const std::vector<Int> &invariant_factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  /// Linear map from generator coordinates to (unreduced) canonical coordinates.
  const IntMatrix &coordinate_matrix() const { return coords_; }
  /// Linear map from canonical coordinates back to generator coordinates.
  const IntMatrix &lift_matrix() const { return lift_; }

  std::size_t free_rank() const {
    std::size_t r = 0;
    for (const auto &d : factors_)
      if (d == 0) ++r;
    return r;
  }
  bool is_finite() const { return free_rank() == 0; }
  bool is_trivial() const { return factors_.empty(); }

  Int order() const {
    if (!is_finite()) throw Error("order of an infinite group");
    Int o = 1;
    for (const auto &d : factors_) o *= d;
    return o;
  }

  Element reduce(const IntVector &x) const {
    if (x.size() != gens_) throw InputError("element has wrong number of generator coordinates");
    Element y = coords_ * x;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (factors_[i] != 0) y[i] = mod_nonneg(y[i], factors_[i]);
    return y;
  }
  Element normalize(Element e) const {
    if (e.size() != factors_.size()) throw InputError("element has wrong number of coordinates");
    for (std::size_t i = 0; i < e.size(); ++i)
      if (factors_[i] != 0) e[i] = mod_nonneg(e[i], factors_[i]);
    return e;
  }
  IntVector lift(const Element &e) const { return lift_ * e; }

  Element zero() const { return Element(factors_.size()); }
  Element generator(std::size_t i) const {
    IntVector x(gens_);
    x.at(i) = 1;
    return reduce(x);
  }
  /// i-th canonical basis element (order = i-th invariant factor).
  Element basis_element(std::size_t i) const {
    Element e(factors_.size());
    e.at(i) = 1;
    return normalize(e);
  }
  Element add(const Element &a, const Element &b) const {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return normalize(std::move(c));
  }
  Element sub(const Element &a, const Element &b) const {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return normalize(std::move(c));
  }
  Element neg(const Element &a) const { return sub(zero(), a); }
  Element scale(const Int &k, const Element &a) const {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = k * a[i];
    return normalize(std::move(c));
  }
  static bool is_zero(const Element &a) {
    for (const auto &v : a)
      if (v != 0) return false;
    return true;
  }

  /// Mixed-radix index of an element of a finite group (first coordinate least significant).
  Int index_of(const Element &e) const {
    Int idx = 0, radix = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      idx += e[i] * radix;
      radix *= factors_[i];
    }
    return idx;
  }
  Element element_at(Int idx) const {
    Element e(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      e[i] = mod_nonneg(idx, factors_[i]);
      idx = floor_div(idx, factors_[i]);
    }
    return e;
  }
  std::vector<Element> elements() const {
    Int n = order();
    if (n > 50'000'000) throw ResourceCapExceeded("refusing to enumerate " + n.get_str() + " elements");
    std::vector<Element> out;
    out.reserve(n.get_ui());
    for (Int i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
  }

  bool isomorphic_to(const FpAbGroup &o) const { return factors_ == o.factors_; }

  /// "Z/2 ⊕ Z/6", "Z", or "0".
  std::string describe() const { return describe_factors(factors_); }

  static std::string describe_factors(const std::vector<Int> &fs) {
    if (fs.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i) s += " ⊕ ";
      s += fs[i] == 0 ? std::string("Z") : "Z/" + fs[i].get_str();
    }
    return s;
  }

private:
  std::size_t gens_ = 0;
  IntMatrix rels_;
  std::vector<Int> factors_;
  IntMatrix coords_;
  IntMatrix lift_;
};

/// Homomorphism given by an integer matrix on generators (target gens × source gens).
class FpMorphism {
public:
  using Element = FpAbGroup::Element;

  FpMorphism(FpAbGroup source, FpAbGroup target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    const std::size_t r = target_.generator_count(), c = source_.generator_count();
    if (matrix_.rows() != r || matrix_.cols() != c) {
      if (matrix_.rows() * matrix_.cols() != 0 || r * c != 0)
        throw InputError("morphism matrix has wrong shape");
      matrix_ = IntMatrix(r, c);
    }
    // well-definedness: relations of the source map into relations of the target
    IntMatrix image = matrix_ * source_.relations();
    for (std::size_t j = 0; j < image.cols(); ++j)
      if (!FpAbGroup::is_zero(target_.reduce(image.column(j))))
        throw ValidationError("IllDefinedMorphism", "relation " + std::to_string(j) + " does not map to zero");
  }

  static FpMorphism zero(const FpAbGroup &s, const FpAbGroup &t) {
    return FpMorphism(s, t, IntMatrix(t.generator_count(), s.generator_count()));
  }
  static FpMorphism identity(const FpAbGroup &g) {
    return FpMorphism(g, g, IntMatrix::identity(g.generator_count()));
  }
  /// Morphism specified by images of the source's canonical basis elements.
  static FpMorphism from_canonical(const FpAbGroup &s, const FpAbGroup &t,
                                   const std::vector<Element> &images) {
    if (images.size() != s.rank()) throw InputError("need one image per canonical generator");
    IntMatrix canon(t.rank(), s.rank());
    for (std::size_t j = 0; j < images.size(); ++j)
      for (std::size_t i = 0; i < t.rank(); ++i) canon(i, j) = images[j].at(i);
    return FpMorphism(s, t, t.lift_matrix() * canon * s.coordinate_matrix());
  }

  const FpAbGroup &source() const { return source_; }
  const FpAbGroup &target() const { return target_; }
  const IntMatrix &matrix() const { return matrix_; }

  Element apply(const Element &e) const { return target_.reduce(matrix_ * source_.lift(e)); }
  Element apply_generators(const IntVector &x) const { return target_.reduce(matrix_ * x); }

  /// Images of the source's canonical basis elements, in target canonical coordinates.
  std::vector<Element> canonical_images() const {
    std::vector<Element> out;
    for (std::size_t i = 0; i < source_.rank(); ++i) out.push_back(apply(source_.basis_element(i)));
    return out;
  }

  bool is_zero() const {
    for (const auto &e : canonical_images())
      if (!FpAbGroup::is_zero(e)) return false;
    return true;
  }
  bool same_map(const FpMorphism &o) const { return canonical_images() == o.canonical_images(); }

private:
  FpAbGroup source_;
  FpAbGroup target_;
  IntMatrix matrix_;
};

/// g ∘ f.
inline FpMorphism compose(const FpMorphism &g, const FpMorphism &f) {
  if (g.source().generator_count() != f.target().generator_count() ||
      g.source().relations() != f.target().relations())
    throw InputError("compose: endpoint mismatch");
  return FpMorphism(f.source(), g.target(), g.matrix() * f.matrix());
}

inline FpMorphism operator-(const FpMorphism &a, const FpMorphism &b) {
  return FpMorphism(a.source(), a.target(), a.matrix() - b.matrix());
}
inline FpMorphism operator+(const FpMorphism &a, const FpMorphism &b) {
  return FpMorphism(a.source(), a.target(), a.matrix() + b.matrix());
}

struct Subobject {
  FpAbGroup group;
  FpMorphism inclusion;
};
struct Quotient {
  FpAbGroup group;
  FpMorphism projection;
};

inline Subobject kernel(const FpMorphism &f) {
  const FpAbGroup &A = f.source(), &B = f.target();
  const std::size_t n = A.generator_count();
  IntMatrix stacked = f.matrix().hstack(B.relations());
  if (stacked.rows() != B.generator_count()) stacked = IntMatrix(B.generator_count(), n);
  IntMatrix ker = integer_kernel(stacked);
  std::vector<std::size_t> top;
  for (std::size_t i = 0; i < n; ++i) top.push_back(i);
  IntMatrix x = ker.select_rows(top);
  IntMatrix basis = hermite_normal_form(x, false).basis();
  if (basis.cols() == 0) basis = IntMatrix(n, 0);
  HermiteForm hb = hermite_normal_form(basis);
  IntMatrix rels(basis.cols(), A.relations().cols());
  for (std::size_t j = 0; j < A.relations().cols(); ++j) {
    auto c = integer_solve(hb, A.relations().column(j));
    if (!c) throw Error("kernel: source relation outside kernel lattice");
    for (std::size_t i = 0; i < basis.cols(); ++i) rels(i, j) = (*c)[i];
  }
  FpAbGroup K(basis.cols(), rels);
  return {K, FpMorphism(K, A, basis)};
}

inline Quotient cokernel(const FpMorphism &f) {
  const FpAbGroup &B = f.target();
  FpAbGroup C(B.generator_count(), B.relations().hstack(f.matrix()));
  return {C, FpMorphism(B, C, IntMatrix::identity(B.generator_count()))};
}

/// Order of the image of a morphism between finite groups.
inline Int image_order(const FpMorphism &f) {
  return f.source().order() / kernel(f).group.order();
}

inline bool is_injective(const FpMorphism &f) { return kernel(f).group.is_trivial(); }
inline bool is_surjective(const FpMorphism &f) { return cokernel(f).group.is_trivial(); }

/// Lift f: A -> B through an injective `incl`: K -> B whose image contains im f.
inline FpMorphism factor_through(const FpMorphism &incl, const FpMorphism &f) {
  const FpAbGroup &B = incl.target();
  IntMatrix stacked = incl.matrix().hstack(B.relations());
  HermiteForm h = hermite_normal_form(stacked);
  const std::size_t k = incl.source().generator_count();
  IntMatrix out(k, f.source().generator_count());
  for (std::size_t j = 0; j < f.source().generator_count(); ++j) {
    auto sol = integer_solve(h, f.matrix().column(j));
    if (!sol) throw ValidationError("NotInImage", "generator " + std::to_string(j));
    for (std::size_t i = 0; i < k; ++i) out(i, j) = (*sol)[i];
  }
  return FpMorphism(f.source(), incl.source(), out);
}

/// Subgroup membership: is b in the image of f?
inline bool in_image(const FpMorphism &f, const FpAbGroup::Element &b) {
  const FpAbGroup &B = f.target();
  IntMatrix stacked = f.matrix().hstack(B.relations());
  return integer_solve(stacked, B.lift(b)).has_value();
}

/// Homology ker(out) / im(in) at the middle of X --in--> Y --out--> Z.
struct Homology {
  FpAbGroup group;
  Subobject cycles;
  FpMorphism projection; // cycles -> group
};

inline Homology homology(const FpMorphism &in, const FpMorphism &out) {
  if (!compose(out, in).is_zero()) throw ValidationError("NotAComplex", "out ∘ in ≠ 0");
  Subobject z = kernel(out);
  FpMorphism boundary = factor_through(z.inclusion, in);
  Quotient q = cokernel(boundary);
  return {q.group, z, q.projection};
}

struct DirectSum {
  FpAbGroup group;
  std::vector<FpMorphism> injections;
  std::vector<FpMorphism> projections;
};

inline DirectSum direct_sum(const std::vector<FpAbGroup> &parts) {
  std::size_t g = 0, r = 0;
  for (const auto &p : parts) {
    g += p.generator_count();
    r += p.relations().cols();
  }
  IntMatrix rels(g, r);
  std::size_t go = 0, ro = 0;
  for (const auto &p : parts) {
    rels.set_block(go, ro, p.relations());
    go += p.generator_count();
    ro += p.relations().cols();
  }
  FpAbGroup sum(g, rels);
  DirectSum ds{sum, {}, {}};
  go = 0;
  for (const auto &p : parts) {
    IntMatrix inj(g, p.generator_count()), proj(p.generator_count(), g);
    for (std::size_t i = 0; i < p.generator_count(); ++i) {
      inj(go + i, i) = 1;
      proj(i, go + i) = 1;
    }
    ds.injections.emplace_back(p, sum, inj);
    ds.projections.emplace_back(sum, p, proj);
    go += p.generator_count();
  }
  return ds;
}

/// Hom(A, B) as a finitely presented group with decoding into morphisms.
/// One generator per pair (canonical factor a_i of A, canonical factor b_j of B)
/// with nonzero Hom(Z/a_i, Z/b_j); it sends the i-th basis element to
/// `step` times the j-th basis element.
class HomGroup {
public:
  struct Slot {
    std::size_t from, to;
    Int step;
    Int order; // 0 = infinite cyclic
  };

  HomGroup(FpAbGroup A, FpAbGroup B) : A_(std::move(A)), B_(std::move(B)) {
    const auto &fa = A_.invariant_factors();
    const auto &fb = B_.invariant_factors();
    for (std::size_t i = 0; i < fa.size(); ++i)
      for (std::size_t j = 0; j < fb.size(); ++j) {
        const Int &a = fa[i], &b = fb[j];
        if (a == 0 && b == 0) slots_.push_back({i, j, 1, 0});
        else if (a == 0) slots_.push_back({i, j, 1, b});
        else if (b == 0) continue;
        else {
          Int g = gcd_int(a, b);
          if (g != 1) slots_.push_back({i, j, b / g, g});
        }
      }
    std::vector<Int> orders;
    for (const auto &s : slots_) orders.push_back(s.order);
    group_ = FpAbGroup::from_factors(orders);
  }

  const FpAbGroup &group() const { return group_; }
  const FpAbGroup &source() const { return A_; }
  const FpAbGroup &target() const { return B_; }
  const std::vector<Slot> &slots() const { return slots_; }

  FpMorphism decode(const FpAbGroup::Element &h) const {
    IntVector k = group_.lift(h);
    std::vector<FpAbGroup::Element> images(A_.rank(), B_.zero());
    for (std::size_t p = 0; p < slots_.size(); ++p) images[slots_[p].from][slots_[p].to] += k[p] * slots_[p].step;
    for (auto &im : images) im = B_.normalize(im);
    return FpMorphism::from_canonical(A_, B_, images);
  }

  FpAbGroup::Element encode(const FpMorphism &f) const {
    std::vector<FpAbGroup::Element> images = f.canonical_images();
    IntVector k(slots_.size());
    for (std::size_t p = 0; p < slots_.size(); ++p) {
      const Int &v = images[slots_[p].from][slots_[p].to];
      if (!mpz_divisible_p(v.get_mpz_t(), slots_[p].step.get_mpz_t()))
        throw Error("encode: image incompatible with hom slot");
      k[p] = v / slots_[p].step;
    }
    return group_.reduce(k);
  }

private:
  FpAbGroup A_, B_, group_;
  std::vector<Slot> slots_;
};

inline HomGroup hom_group(const FpAbGroup &A, const FpAbGroup &B) { return HomGroup(A, B); }

} // namespace gw
