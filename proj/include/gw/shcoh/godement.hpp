#pragma once

#include "gw/exactlin/subgroup.hpp"
#include "gw/modres/injective.hpp"
#include "gw/shcoh/sheaf.hpp"

namespace gw {

/// Injective: stage 0 embeds each nonzero stalk into its all-elements divisible
/// hull; later stalks are divisible already and embed identically.
/// Flasque: every stage uses the stalks themselves (finite groups throughout).
enum class GodementKind { Injective, Flasque };

inline LatticePairGroup lp_product(const std::vector<const LatticePairGroup *> &parts) {
  std::size_t dim = 0, nsp = 0, nlat = 0, dsp = 0, dlat = 0;
  for (const auto *g : parts) {
    dim += g->ambient_dim();
    nsp += g->numerator().space_dim();
    nlat += g->numerator().lattice_rank();
    dsp += g->denominator().space_dim();
    dlat += g->denominator().lattice_rank();
  }
  RatMatrix a(dim, nsp), b(dim, nlat), c(dim, dsp), d(dim, dlat);
  std::size_t o = 0, i1 = 0, i2 = 0, i3 = 0, i4 = 0;
  for (const auto *g : parts) {
    a.set_block(o, i1, g->numerator().space_basis());
    b.set_block(o, i2, g->numerator().lattice_basis());
    c.set_block(o, i3, g->denominator().space_basis());
    d.set_block(o, i4, g->denominator().lattice_basis());
    i1 += g->numerator().space_dim();
    i2 += g->numerator().lattice_rank();
    i3 += g->denominator().space_dim();
    i4 += g->denominator().lattice_rank();
    o += g->ambient_dim();
  }
  return LatticePairGroup(Subgroup::make(dim, a, b), Subgroup::make(dim, c, d));
}

inline LatticePairGroup lp_finite(const CyclicProduct &g) {
  const std::size_t r = g.rank();
  RatMatrix rel(r, r);
  for (std::size_t i = 0; i < r; ++i) rel(i, i) = Rat(static_cast<long>(g.m[i]));
  return LatticePairGroup(Subgroup::integer_lattice(r), Subgroup::lattice(rel));
}

/// The Godement sheaf G = ∏_p (i_p)_* D_p attached to a system of stalks C_p.
struct GodementTerm {
  std::vector<LatticePairGroup> hull;             // D_p
  std::vector<RatMatrix> iota;                     // C_p → D_p
  std::vector<LatticePairGroup> stalk;             // G_q = ∏_{p ∈ U_q} D_p
  std::vector<std::vector<std::size_t>> offset;    // block of star(q)[i] inside G_q
  std::vector<RatMatrix> embed;                    // C_q → G_q
  LatticePairGroup global;                         // Γ(G) = ∏_p D_p
  std::vector<std::size_t> global_offset;

  /// Every value of G is a divisible group.
  bool divisible() const { return global.numerator().space_dim() == global.ambient_dim(); }
};

/// Finite-space sheaf cohomology through the Godement resolution
/// 0 → F → G⁰ → G¹ → … computed on stalks.
class GodementResolution {
public:
  struct System {
    std::vector<LatticePairGroup> stalk;
    std::vector<std::vector<RatMatrix>> restr; // restr[q][i] : C_q → C_{star(q)[i]}
  };

  /// Terms G⁰ … G^{depth-1} and differentials between them.
  GodementResolution(SheafPtr F, std::size_t depth, GodementKind kind = GodementKind::Injective,
                     std::size_t cap = element_cap())
      : F_(std::move(F)), kind_(kind) {
    if (depth == 0) throw InputError("resolution depth must be positive");
    const AbelianSheaf &S = *F_;
    const std::size_t n = S.point_count();
    System c0;
    for (std::size_t p = 0; p < n; ++p) c0.stalk.push_back(lp_finite(S.stalk(p)));
    c0.restr.resize(n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p : S.star(q)) c0.restr[q].push_back(to_rational(S.restriction(q, p).to_int()));
    systems_.push_back(std::move(c0));
    for (std::size_t k = 0; k < depth; ++k) {
      terms_.push_back(make_term(systems_.back(), k, cap));
      if (k + 1 < depth) systems_.push_back(next_system(systems_.back(), terms_.back()));
    }
    for (std::size_t k = 0; k + 1 < depth; ++k) d_.push_back(differential(k));
  }

  const AbelianSheaf &sheaf() const { return *F_; }
  GodementKind kind() const { return kind_; }
  std::size_t depth() const { return terms_.size(); }
  const GodementTerm &term(std::size_t k) const { return terms_.at(k); }
  const System &system(std::size_t k) const { return systems_.at(k); }
  /// Γ(G^k) → Γ(G^{k+1}).
  const RatMatrix &differential_matrix(std::size_t k) const { return d_.at(k); }

  /// H^n as a lattice-pair group (ker dⁿ) / (im dⁿ⁻¹), for n + 1 < depth.
  LatticePairGroup cohomology_pair(std::size_t n) const {
    if (n + 1 >= depth()) throw InputError("resolution too short for H^" + std::to_string(n));
    Subgroup ker = latpair_kernel_image(d_[n], terms_[n].global, terms_[n + 1].global).kernel.numerator();
    Subgroup im = n == 0 ? terms_[0].global.denominator()
                         : latpair_kernel_image(d_[n - 1], terms_[n - 1].global, terms_[n].global).image.numerator();
    return LatticePairGroup(ker, im);
  }

  /// dⁿ ∘ dⁿ⁻¹ vanishes on Γ.
  bool squares_to_zero() const {
    for (std::size_t k = 0; k + 1 < d_.size(); ++k) {
      RatMatrix dd = d_[k + 1] * d_[k];
      Subgroup img = terms_[k].global.numerator().image(dd);
      if (!terms_[k + 2].global.denominator().contains(img)) return false;
    }
    return true;
  }

  /// F_q → G⁰_q has zero kernel at every point.
  bool embedding_monic() const {
    for (std::size_t q = 0; q < F_->point_count(); ++q)
      if (!latpair_kernel_image(terms_[0].embed[q], systems_[0].stalk[q], terms_[0].stalk[q]).kernel.type().is_trivial())
        return false;
    return true;
  }

private:
  GodementTerm make_term(const System &C, std::size_t k, std::size_t cap) const {
    const AbelianSheaf &S = *F_;
    const std::size_t n = S.point_count();
    GodementTerm T{{}, {}, {}, {}, {}, lp_product({}), {}};
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t dim = C.stalk[p].ambient_dim();
      if (k == 0 && kind_ == GodementKind::Injective && S.stalk(p).rank() > 0) {
        DivisibleHull h = divisible_hull(S.stalk(p), cap);
        T.hull.emplace_back(Subgroup::full(h.dim), Subgroup::lattice(to_rational(h.lattice)));
        RatMatrix io(h.dim, dim);
        for (std::size_t j = 0; j < dim; ++j) io(S.stalk(p).basis(j), j) = 1;
        T.iota.push_back(io);
      } else {
        T.hull.push_back(C.stalk[p]);
        T.iota.push_back(RatMatrix::identity(dim));
      }
    }
    std::size_t total = 0;
    for (std::size_t p = 0; p < n; ++p) {
      T.global_offset.push_back(total);
      total += T.hull[p].ambient_dim();
    }
    if (total > cap) throw ResourceCapExceeded("Godement term exceeds the dimension cap");
    std::vector<const LatticePairGroup *> all;
    for (const auto &h : T.hull) all.push_back(&h);
    T.global = lp_product(all);
    T.offset.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<const LatticePairGroup *> parts;
      std::size_t o = 0;
      for (std::size_t p : S.star(q)) {
        T.offset[q].push_back(o);
        o += T.hull[p].ambient_dim();
        parts.push_back(&T.hull[p]);
      }
      T.stalk.push_back(lp_product(parts));
      RatMatrix e(o, C.stalk[q].ambient_dim());
      for (std::size_t i = 0; i < S.star(q).size(); ++i) {
        std::size_t p = S.star(q)[i];
        e.set_block(T.offset[q][i], 0, T.iota[p] * C.restr[q][i]);
      }
      T.embed.push_back(e);
    }
    return T;
  }

  /// C' = G / im(C), with restrictions given by block selection.
  System next_system(const System &C, const GodementTerm &T) const {
    const AbelianSheaf &S = *F_;
    const std::size_t n = S.point_count();
    System N;
    for (std::size_t q = 0; q < n; ++q) {
      Subgroup im = C.stalk[q].numerator().image(T.embed[q]);
      N.stalk.emplace_back(T.stalk[q].numerator(), T.stalk[q].denominator() + im);
    }
    N.restr.resize(n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p : S.star(q)) N.restr[q].push_back(selection(T, q, p));
    return N;
  }

  /// Projection G_q → G_p for p ∈ U_q.
  RatMatrix selection(const GodementTerm &T, std::size_t q, std::size_t p) const {
    const AbelianSheaf &S = *F_;
    RatMatrix m(T.stalk[p].ambient_dim(), T.stalk[q].ambient_dim());
    const auto &sq = S.star(q), &sp = S.star(p);
    for (std::size_t i = 0; i < sp.size(); ++i) {
      std::size_t t = sp[i];
      std::size_t j = std::size_t(std::find(sq.begin(), sq.end(), t) - sq.begin());
      for (std::size_t x = 0; x < T.hull[t].ambient_dim(); ++x) m(T.offset[p][i] + x, T.offset[q][j] + x) = 1;
    }
    return m;
  }

  /// Γ(G^k) → Γ(G^{k+1}) = ∏_q C^{k+1}_q: x ↦ (x|U_q)_q.
  RatMatrix differential(std::size_t k) const {
    const AbelianSheaf &S = *F_;
    const GodementTerm &A = terms_[k], &B = terms_[k + 1];
    RatMatrix m(B.global.ambient_dim(), A.global.ambient_dim());
    for (std::size_t q = 0; q < S.point_count(); ++q)
      for (std::size_t i = 0; i < S.star(q).size(); ++i) {
        std::size_t t = S.star(q)[i];
        for (std::size_t x = 0; x < A.hull[t].ambient_dim(); ++x)
          m(B.global_offset[q] + A.offset[q][i] + x, A.global_offset[t] + x) = 1;
      }
    return m;
  }

  SheafPtr F_;
  GodementKind kind_;
  std::vector<System> systems_;
  std::vector<GodementTerm> terms_;
  std::vector<RatMatrix> d_;
};

/// G⁰ with its stalkwise embedding.
inline GodementTerm godement_embedding(const SheafPtr &F, std::size_t cap = element_cap()) {
  return GodementResolution(F, 1, GodementKind::Injective, cap).term(0);
}

/// The chain map Γ(G^k F) → Γ(G^k F′) induced by φ, for k < depth.
inline std::vector<RatMatrix> godement_chain_map(const GodementResolution &A, const GodementResolution &B,
                                                 const SheafMap &phi) {
  if (A.kind() != B.kind()) throw InputError("resolutions of different kinds");
  const AbelianSheaf &S = A.sheaf();
  const std::size_t n = S.point_count(), depth = std::min(A.depth(), B.depth());
  std::vector<RatMatrix> stalk_map, out;
  for (std::size_t p = 0; p < n; ++p) stalk_map.push_back(to_rational(phi.stalk(p).to_int()));
  for (std::size_t k = 0; k < depth; ++k) {
    const GodementTerm &TA = A.term(k), &TB = B.term(k);
    std::vector<RatMatrix> hull_map;
    for (std::size_t p = 0; p < n; ++p) {
      const bool hulled_a = k == 0 && A.kind() == GodementKind::Injective && S.stalk(p).rank() > 0;
      const bool hulled_b = k == 0 && B.kind() == GodementKind::Injective && B.sheaf().stalk(p).rank() > 0;
      RatMatrix h(TB.hull[p].ambient_dim(), TA.hull[p].ambient_dim());
      if (hulled_a || hulled_b) {
        // e_x ↦ e_{φ(x)} on the free groups over all elements
        const CyclicProduct &G = S.stalk(p), &H = B.sheaf().stalk(p);
        if (hulled_a && hulled_b)
          for (std::size_t x = 0; x < G.order(); ++x)
            h(H.index(apply_mod(phi.stalk(p), G.coords(x), H)), x) = 1;
      } else {
        h = stalk_map[p];
      }
      hull_map.push_back(h);
    }
    RatMatrix g(TB.global.ambient_dim(), TA.global.ambient_dim());
    for (std::size_t p = 0; p < n; ++p) g.set_block(TB.global_offset[p], TA.global_offset[p], hull_map[p]);
    out.push_back(g);
    stalk_map.clear();
    for (std::size_t q = 0; q < n; ++q) {
      RatMatrix m(TB.stalk[q].ambient_dim(), TA.stalk[q].ambient_dim());
      for (std::size_t i = 0; i < S.star(q).size(); ++i) {
        std::size_t t = S.star(q)[i];
        m.set_block(TB.offset[q][i], TA.offset[q][i], hull_map[t]);
      }
      stalk_map.push_back(m);
    }
  }
  return out;
}

/// H^0 … H^nMax as finite groups.
struct CohomologyReport {
  std::vector<FpAbGroup> degrees;

  std::string text(const std::string &symbol = "H") const {
    std::string s;
    for (std::size_t n = 0; n < degrees.size(); ++n)
      s += symbol + "^" + std::to_string(n) + " = " + degrees[n].describe() + "\n";
    return s;
  }
  bool isomorphic_to(const CohomologyReport &o) const {
    if (degrees.size() != o.degrees.size()) return false;
    for (std::size_t n = 0; n < degrees.size(); ++n)
      if (!degrees[n].isomorphic_to(o.degrees[n])) return false;
    return true;
  }
};

/// Cohomology of Γ applied to a Godement resolution, with presentations kept
/// for induced maps.
class SheafCohomology {
public:
  SheafCohomology(SheafPtr F, std::size_t nMax, GodementKind kind = GodementKind::Injective,
                  std::size_t cap = element_cap())
      : res_(std::move(F), nMax + 2, kind, cap) {
    for (std::size_t n = 0; n <= nMax; ++n) {
      LatticePairGroup h = res_.cohomology_pair(n);
      QuotientType t = h.type();
      if (!t.is_finite()) throw Error("H^" + std::to_string(n) + " is not finite: " + t.describe());
      quot_.emplace_back(h);
    }
  }

  const GodementResolution &resolution() const { return res_; }
  std::size_t max_degree() const { return quot_.size() - 1; }
  const FiniteQuotient &quotient(std::size_t n) const { return quot_.at(n); }
  const FpAbGroup &group(std::size_t n) const { return quot_.at(n).group(); }

  CohomologyReport report() const {
    CohomologyReport r;
    for (const auto &q : quot_) r.degrees.push_back(FpAbGroup::from_factors(q.group().invariant_factors()));
    return r;
  }

private:
  GodementResolution res_;
  std::vector<FiniteQuotient> quot_;
};

inline CohomologyReport sheaf_cohomology(const SheafPtr &F, std::size_t nMax,
                                         GodementKind kind = GodementKind::Injective, std::size_t cap = element_cap()) {
  return SheafCohomology(F, nMax, kind, cap).report();
}

/// A map of finite lattice-pair quotients given by a rational matrix on ambients.
inline FpMorphism quotient_map(const FiniteQuotient &A, const FiniteQuotient &B, const RatMatrix &m) {
  IntMatrix out(B.group().generator_count(), A.group().generator_count());
  for (std::size_t i = 0; i < A.group().generator_count(); ++i) {
    IntVector c = B.group().lift(B.coordinates(m * A.generator_vector(i)));
    for (std::size_t r = 0; r < c.size(); ++r) out(r, i) = c[r];
  }
  return FpMorphism(A.group(), B.group(), out);
}

/// Hⁿ(φ) for φ : F → F′.
inline FpMorphism induced_map(const SheafCohomology &A, const SheafCohomology &B, const SheafMap &phi, std::size_t n) {
  auto chain = godement_chain_map(A.resolution(), B.resolution(), phi);
  return quotient_map(A.quotient(n), B.quotient(n), chain.at(n));
}

} // namespace gw
