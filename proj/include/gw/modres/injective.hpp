#pragma once

#include <cstdlib>
#include <functional>
#include <set>
#include <unordered_set>

#include "gw/exactlin/subgroup.hpp"
#include "gw/modres/ring.hpp"

namespace gw {

/// Element cap for constructed modules: GW_ELEMENT_CAP or 10^6.
inline std::size_t element_cap() {
  if (const char *s = std::getenv("GW_ELEMENT_CAP")) {
    char *end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return std::size_t(v);
  }
  return 1'000'000;
}

/// An embedding of a finite group into a divisible group Q^n / K ≅ (Q/Z)^n.
/// `iota[j]` is the image of the j-th canonical generator, in coordinates
/// relative to a basis of K (so read modulo Z^n).
struct DivisibleHull {
  std::size_t dim = 0;
  IntMatrix lattice; // basis of K as columns
  std::vector<RatVector> iota;

  LatticePairGroup group() const {
    return LatticePairGroup(Subgroup::full(dim), Subgroup::lattice(to_rational(lattice)));
  }
  /// ι(x) for x in canonical coordinates, reduced into [0,1)^n.
  RatVector image(const std::vector<std::int64_t> &x) const {
    RatVector v(dim, Rat(0));
    for (std::size_t j = 0; j < iota.size(); ++j)
      for (std::size_t l = 0; l < dim; ++l) v[l] += Rat(static_cast<long>(x[j])) * iota[j][l];
    for (auto &q : v) {
      q -= Rat(floor_div(q.get_num(), q.get_den()));
      q.canonicalize();
    }
    return v;
  }
};

/// Step 1 on all elements: F = Z^{|M|} with e_x ↦ x, K = ker(F → M), M_d = (F⊗Q)/K.
/// K has the triangular basis e_0, e_x − Σ c_j(x) e_{g_j} (x not 0 or a generator), m_j e_{g_j}.
inline DivisibleHull divisible_hull(const CyclicProduct &M, std::size_t cap = element_cap()) {
  const std::size_t n = M.order();
  if (n > cap) throw ResourceCapExceeded("divisible hull on all elements exceeds cap");
  DivisibleHull h;
  h.dim = n;
  h.lattice = IntMatrix(n, n);
  std::vector<std::size_t> gen_of(n, SIZE_MAX);
  for (std::size_t j = 0; j < M.rank(); ++j) gen_of[M.basis(j)] = j;
  for (std::size_t x = 0; x < n; ++x) {
    if (gen_of[x] != SIZE_MAX) {
      h.lattice(x, x) = Int(static_cast<long>(M.m[gen_of[x]]));
      continue;
    }
    h.lattice(x, x) = 1;
    if (x == 0) continue;
    auto c = M.coords(x);
    for (std::size_t j = 0; j < c.size(); ++j) h.lattice(M.basis(j), x) -= Int(static_cast<long>(c[j]));
  }
  for (std::size_t j = 0; j < M.rank(); ++j) {
    RatVector v(n, Rat(0));
    v[M.basis(j)] = make_rat(1, Int(static_cast<long>(M.m[j])));
    h.iota.push_back(v);
  }
  return h;
}

/// Step 1 on canonical generators only: M ↪ ⊕_j (1/m_j)Z/Z ⊂ (Q/Z)^rank.
inline DivisibleHull generator_hull(const CyclicProduct &M) {
  DivisibleHull h;
  h.dim = M.rank();
  h.lattice = IntMatrix(h.dim, h.dim);
  for (std::size_t j = 0; j < h.dim; ++j) {
    h.lattice(j, j) = Int(static_cast<long>(M.m[j]));
    RatVector v(h.dim, Rat(0));
    v[j] = make_rat(1, Int(static_cast<long>(M.m[j])));
    h.iota.push_back(v);
  }
  return h;
}

/// Hom_Z(R, A) with (r·f)(x) = f(x·r), for A = ⊕_l A_l, A_l = (1/a_l)Z/Z ⊂ Q/Z
/// (a_l = 0 means all of Q/Z). Coordinate (i, l) holds c with f(g_i)_l = c / g_il,
/// g_il = gcd(r_i, a_l); coordinates with g_il = 1 are dropped.
struct Coinduced {
  ModPtr module;
  std::vector<std::int64_t> target;          // a_l
  std::vector<std::vector<std::size_t>> pos; // (i, l) ↦ coordinate or SIZE_MAX
  std::vector<std::vector<std::int64_t>> g;  // g_il

  /// f(x)_l ∈ Q/Z for f given by index, x ∈ R.
  RatVector evaluate(std::size_t f, std::size_t x) const {
    const auto &R = *module->ring();
    auto c = module->additive().coords(f);
    auto xc = R.additive().coords(x);
    RatVector v(target.size(), Rat(0));
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t l = 0; l < target.size(); ++l)
        if (pos[i][l] != SIZE_MAX) v[l] += make_rat(Int(static_cast<long>(xc[i] * c[pos[i][l]])), Int(static_cast<long>(g[i][l])));
    for (auto &q : v) {
      q -= Rat(floor_div(q.get_num(), q.get_den()));
      q.canonicalize();
    }
    return v;
  }
};

inline Coinduced coinduced(const RingPtr &R, const std::vector<std::int64_t> &target, std::size_t cap = element_cap()) {
  const CyclicProduct &RA = R->additive();
  Coinduced c;
  c.target = target;
  std::vector<std::int64_t> factors;
  c.pos.assign(RA.rank(), std::vector<std::size_t>(target.size(), SIZE_MAX));
  c.g.assign(RA.rank(), std::vector<std::int64_t>(target.size(), 1));
  std::size_t order = 1;
  for (std::size_t l = 0; l < target.size(); ++l)
    for (std::size_t i = 0; i < RA.rank(); ++i) {
      std::int64_t gi = target[l] == 0 ? RA.m[i] : std::gcd(RA.m[i], target[l]);
      c.g[i][l] = gi;
      if (gi == 1) continue;
      c.pos[i][l] = factors.size();
      factors.push_back(gi);
      if (order > cap / std::size_t(gi)) throw ResourceCapExceeded("coinduced module exceeds element cap");
      order *= std::size_t(gi);
    }
  CyclicProduct add(factors);
  std::vector<Mat64> mats;
  for (std::size_t s = 0; s < R->size(); ++s) {
    Mat64 a = R->right_matrix(s); // column j: coordinates of g_j·s
    Mat64 A(factors.size(), factors.size());
    for (std::size_t l = 0; l < target.size(); ++l)
      for (std::size_t j = 0; j < RA.rank(); ++j) {
        if (c.pos[j][l] == SIZE_MAX) continue;
        for (std::size_t i = 0; i < RA.rank(); ++i) {
          if (c.pos[i][l] == SIZE_MAX) continue;
          __int128 num = __int128(a(i, j)) * c.g[j][l];
          if (num % c.g[i][l] != 0) throw Error("coinduced: non-integral action entry");
          A(c.pos[j][l], c.pos[i][l]) = std::int64_t(num / c.g[i][l]);
        }
      }
    mats.push_back(A);
  }
  c.module = share(FiniteModule::from_matrices(R, add, mats));
  return c;
}

/// Divisible target (Q/Z)^n.
inline Coinduced coinduced_divisible(const RingPtr &R, std::size_t n, std::size_t cap = element_cap()) {
  return coinduced(R, std::vector<std::int64_t>(n, 0), cap);
}

/// ψ̂ : M → Hom_Z(R, A), m ↦ (x ↦ ψ(x·m)), for a group map ψ given on canonical
/// coordinates with values in ⊕ (1/a_l)Z/Z.
inline ModuleMap transpose(const ModPtr &M, const Coinduced &C,
                           const std::function<RatVector(const std::vector<std::int64_t> &)> &psi) {
  const FiniteRing &R = *M->ring();
  const CyclicProduct &RA = R.additive();
  Mat64 T(C.module->rank(), M->rank());
  for (std::size_t t = 0; t < M->rank(); ++t)
    for (std::size_t i = 0; i < RA.rank(); ++i) {
      std::size_t y = M->act(RA.basis(i), M->additive().basis(t));
      RatVector v = psi(M->additive().coords(y));
      for (std::size_t l = 0; l < C.target.size(); ++l) {
        if (C.pos[i][l] == SIZE_MAX) continue;
        Rat q = v[l] * Rat(static_cast<long>(C.g[i][l]));
        if (q.get_den() != 1) throw Error("transpose: value outside the coinduced range");
        T(C.pos[i][l], t) = mod_nonneg(q.get_num(), Int(static_cast<long>(C.g[i][l]))).get_si();
      }
    }
  return ModuleMap(M, C.module, T);
}

/// Unit M → Hom_Z(R, M_d), m ↦ (x ↦ ι(x·m)).
inline ModuleMap unit_embedding(const ModPtr &M, const DivisibleHull &h, const Coinduced &C) {
  return transpose(M, C, [&](const std::vector<std::int64_t> &x) { return h.image(x); });
}

/// Q = I / im d with its projection.
struct QuotientModule {
  ModPtr module;
  ModuleMap projection;
};

inline QuotientModule quotient_by_image(const ModuleMap &d) {
  const ModPtr &I = d.target();
  Quotient q = cokernel(d.fp());
  const FpAbGroup &C = q.group;
  std::vector<std::int64_t> f;
  for (const auto &v : C.invariant_factors()) {
    if (v == 0) throw Error("quotient of a finite module is infinite");
    f.push_back(v.get_si());
  }
  CyclicProduct add(f);
  const IntMatrix &P = C.coordinate_matrix(), &L = C.lift_matrix();
  std::vector<Mat64> mats;
  for (std::size_t s = 0; s < I->ring()->size(); ++s)
    mats.push_back(Mat64::from_int(P * I->action_matrix(s).to_int() * L, f));
  ModPtr Q = share(FiniteModule::from_matrices(I->ring(), add, mats));
  return {Q, ModuleMap(I, Q, Mat64::from_int(P, f))};
}

struct ResolutionOptions {
  std::size_t length = 1;
  std::size_t cap = element_cap();
  /// Use the all-elements hull at every stage, not only the first.
  bool all_elements_every_stage = false;
};

/// M ↪ I_0 → I_1 → … → I_L with I_k = Hom_Z(R, divisible hull).
struct InjectiveResolution {
  ModPtr base;
  std::vector<ModPtr> terms;
  std::vector<ModuleMap> maps; // maps[0] : M → I_0, maps[k+1] : I_k → I_{k+1}
  std::vector<DivisibleHull> hulls;

  bool first_monic() const { return maps.front().is_injective(); }
  bool composites_zero() const {
    for (std::size_t k = 0; k + 1 < maps.size(); ++k)
      if (!compose(maps[k + 1], maps[k]).fp().is_zero()) return false;
    return true;
  }
  /// ker(maps[k+1]) = im(maps[k]), i.e. exactness at I_k, for k < L.
  bool exact_at(std::size_t k) const {
    FpMorphism in = maps.at(k).fp(), out = maps.at(k + 1).fp();
    if (!compose(out, in).is_zero()) return false;
    return kernel(out).group.order() == image_order(in);
  }
  bool exact() const {
    if (!first_monic() || !composites_zero()) return false;
    for (std::size_t k = 0; k + 1 < maps.size(); ++k)
      if (!exact_at(k)) return false;
    return true;
  }
};

inline InjectiveResolution injective_resolution(const ModPtr &M, const ResolutionOptions &opt = {}) {
  InjectiveResolution res;
  res.base = M;
  const RingPtr &R = M->ring();
  DivisibleHull h0 = divisible_hull(M->additive(), opt.cap);
  Coinduced c0 = coinduced_divisible(R, h0.dim, opt.cap);
  res.hulls.push_back(h0);
  res.terms.push_back(c0.module);
  res.maps.push_back(unit_embedding(M, h0, c0));
  for (std::size_t k = 0; k < opt.length; ++k) {
    QuotientModule q = quotient_by_image(res.maps.back());
    DivisibleHull h = opt.all_elements_every_stage ? divisible_hull(q.module->additive(), opt.cap)
                                                   : generator_hull(q.module->additive());
    Coinduced c = coinduced_divisible(R, h.dim, opt.cap);
    res.hulls.push_back(h);
    res.terms.push_back(c.module);
    res.maps.push_back(compose(unit_embedding(q.module, h, c), q.projection));
  }
  return res;
}

/// Baer's criterion: every R-map from a left ideal J into I extends to R.
struct BaerVerdict {
  bool injective = true;
  std::string ideal; // generators of the failing ideal
  std::string map;   // generator ↦ image
};

inline BaerVerdict baer_check(const FiniteModule &I, std::size_t cap = element_cap()) {
  const FiniteRing &R = *I.ring();
  for (const auto &J : R.left_ideals()) {
    // left-module generators of J
    std::vector<std::size_t> gens;
    std::vector<std::size_t> span = R.left_ideal({});
    for (std::size_t x : J)
      if (!std::binary_search(span.begin(), span.end(), x)) {
        gens.push_back(x);
        span = R.left_ideal(gens);
      }
    const std::size_t g = gens.size();
    if (g == 0) continue;
    std::size_t tuples = 1, assignments = 1;
    for (std::size_t t = 0; t < g; ++t) {
      if (tuples > cap / R.size() || assignments > cap / std::max<std::size_t>(I.size(), 1))
        throw ResourceCapExceeded("Baer enumeration exceeds cap");
      tuples *= R.size();
      assignments *= I.size();
    }
    // relations: tuples ρ with Σ ρ_t j_t = 0
    std::vector<std::vector<std::size_t>> rels;
    std::vector<std::size_t> rho(g, 0);
    for (std::size_t n = 0; n < tuples; ++n) {
      std::size_t e = 0;
      for (std::size_t t = 0; t < g; ++t) e = R.plus(e, R.mul(rho[t], gens[t]));
      if (e == 0) rels.push_back(rho);
      for (std::size_t t = 0; t < g && ++rho[t] == R.size(); ++t) rho[t] = 0;
    }
    std::set<std::vector<std::size_t>> extendable;
    for (std::size_t y = 0; y < I.size(); ++y) {
      std::vector<std::size_t> v;
      for (std::size_t t = 0; t < g; ++t) v.push_back(I.act(gens[t], y));
      extendable.insert(v);
    }
    std::vector<std::size_t> x(g, 0);
    for (std::size_t n = 0; n < assignments; ++n) {
      bool consistent = true;
      for (const auto &r : rels) {
        std::size_t s = 0;
        for (std::size_t t = 0; t < g; ++t) s = I.plus(s, I.act(r[t], x[t]));
        if (s != 0) {
          consistent = false;
          break;
        }
      }
      if (consistent && !extendable.count(x)) {
        BaerVerdict v{false, "(", ""};
        for (std::size_t t = 0; t < g; ++t) {
          v.ideal += (t ? "," : "") + R.name(gens[t]);
          v.map += (t ? ", " : "") + R.name(gens[t]) + "↦" + I.element_name(x[t]);
        }
        v.ideal += ")";
        return v;
      }
      for (std::size_t t = 0; t < g && ++x[t] == I.size(); ++t) x[t] = 0;
    }
  }
  return {};
}

} // namespace gw
