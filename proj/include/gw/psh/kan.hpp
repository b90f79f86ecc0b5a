#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gw/psh/presheaf.hpp"

namespace gw {

/// Restriction u^*F = F ∘ u^op along u : C → C′. Element x ∈ F(uA) appears
/// as "x@A" in (u^*F)(A).
struct Restriction {
  PshPtr psh;
  std::vector<std::size_t> base;            // element of u^*F ↦ element of F
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> at; // (A, x) ↦ element of u^*F
};

inline Restriction restrict_along(const FinFunctor &u, const PshPtr &F) {
  const FinCategory &C = *u.source();
  if (!(*F->category() == *u.target())) throw InputError("restriction: presheaf not on the target of u");
  Restriction r;
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  for (std::size_t a = 0; a < C.object_count(); ++a)
    for (std::size_t x : F->fiber(u.on_object(a))) {
      r.at[{a, x}] = names.size();
      names.push_back(F->name(x) + "@" + C.object_name(a));
      over.push_back(a);
      r.base.push_back(x);
    }
  r.psh = share(Presheaf::from_tables(u.source(), names, over, [&](std::size_t e, std::size_t h) {
    return r.at.at({C.dom(h), F->act(r.base[e], u.on_arrow(h))});
  }));
  return r;
}

/// u^*φ.
inline PresheafMap restrict_map(const FinFunctor &u, const Restriction &rf, const Restriction &rg, const PresheafMap &phi) {
  std::vector<std::size_t> e(rf.psh->size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = rg.at.at({rf.psh->over(i), phi(rf.base[i])});
  (void)u;
  return PresheafMap(rf.psh, rg.psh, e);
}

/// Right Kan extension u_*G (G on C): (u_*G)(B) is the set of compatible
/// families over the comma category of pairs (A, g : uA → B), i.e. the limit
/// formula for the right adjoint of restriction. Elements are named
/// "{s1,s2,...}@B" listing components in comma order.
struct RightKan {
  PshPtr psh;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> comma; // per B: (A, g)
  std::vector<std::vector<std::size_t>> family;                        // per element: components
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> lookup;
};

inline RightKan right_kan(const FinFunctor &u, const PshPtr &G, std::size_t cap = 1'000'000) {
  const FinCategory &C = *u.source(), &D = *u.target();
  if (!(*G->category() == C)) throw InputError("u_*: presheaf not on the source of u");
  RightKan rk;
  rk.comma.resize(D.object_count());
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  for (std::size_t b = 0; b < D.object_count(); ++b) {
    auto &cm = rk.comma[b];
    for (std::size_t a = 0; a < C.object_count(); ++a)
      for (std::size_t g : D.hom(u.on_object(a), b)) cm.emplace_back(a, g);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos;
    for (std::size_t i = 0; i < cm.size(); ++i) pos[cm[i]] = i;
    // constraint: s_{(A′, g∘u h)} = s_{(A,g)}·h for h : A′ → A
    std::vector<std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>> cons(cm.size());
    for (std::size_t i = 0; i < cm.size(); ++i) {
      auto [a, g] = cm[i];
      for (std::size_t h : C.arrows_into(a)) {
        std::size_t j = pos.at({C.dom(h), D.compose(g, u.on_arrow(h))});
        cons[std::max(i, j)].emplace_back(i, h, j);
      }
    }
    std::vector<std::size_t> s(cm.size());
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == cm.size()) {
        if (rk.family.size() >= cap) throw ResourceCapExceeded("u_* exceeds element cap");
        std::string nm = "{";
        for (std::size_t i = 0; i < s.size(); ++i) nm += (i ? "," : "") + G->name(s[i]);
        rk.lookup[{b, s}] = names.size();
        names.push_back(nm + "}@" + D.object_name(b));
        over.push_back(b);
        rk.family.push_back(s);
        return;
      }
      for (std::size_t x : G->fiber(cm[k].first)) {
        s[k] = x;
        bool ok = true;
        for (const auto &[i, h, j] : cons[k])
          if (s[j] != G->act(s[i], h)) {
            ok = false;
            break;
          }
        if (ok) rec(k + 1);
      }
    };
    rec(0);
  }
  rk.psh = share(Presheaf::from_tables(u.target(), names, over, [&](std::size_t e, std::size_t k) {
    std::size_t b = D.dom(k), bb = over[e];
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> posb;
    for (std::size_t i = 0; i < rk.comma[bb].size(); ++i) posb[rk.comma[bb][i]] = i;
    std::vector<std::size_t> t;
    for (const auto &[a, g] : rk.comma[b]) t.push_back(rk.family[e][posb.at({a, D.compose(k, g)})]);
    return rk.lookup.at({b, t});
  }));
  return rk;
}

/// u_*ψ : family s ↦ ψ∘s.
inline PresheafMap right_kan_map(const RightKan &src, const RightKan &dst, const PresheafMap &psi) {
  std::vector<std::size_t> e(src.psh->size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::vector<std::size_t> t;
    for (auto x : src.family[i]) t.push_back(psi(x));
    e[i] = dst.lookup.at({src.psh->over(i), t});
  }
  return PresheafMap(src.psh, dst.psh, e);
}

/// Left Kan extension u_!G (G on C): (u_!G)(B) is the set of pairs
/// (g : B → uA, s ∈ G(A)) modulo (u(h)∘g, s) ~ (g, s·h). Each class is named
/// "g|s" by its least representative.
struct LeftKan {
  PshPtr psh;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> cls; // (g, s) ↦ element
  std::vector<std::pair<std::size_t, std::size_t>> rep;           // element ↦ least (g, s)
};

inline LeftKan left_kan(const FinFunctor &u, const PshPtr &G) {
  const FinCategory &C = *u.source(), &D = *u.target();
  if (!(*G->category() == C)) throw InputError("u_!: presheaf not on the source of u");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> idx;
  for (std::size_t g = 0; g < D.arrow_count(); ++g)
    for (std::size_t a = 0; a < C.object_count(); ++a) {
      if (D.cod(g) != u.on_object(a)) continue;
      for (std::size_t s : G->fiber(a)) {
        idx[{g, s}] = pairs.size();
        pairs.emplace_back(g, s);
      }
    }
  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // (u(h)∘g′, s) ~ (g′, s·h) for g′ : B → u(dom h), s ∈ G(cod h)
  for (std::size_t gp = 0; gp < D.arrow_count(); ++gp)
    for (std::size_t h = 0; h < C.arrow_count(); ++h) {
      if (D.cod(gp) != u.on_object(C.dom(h))) continue;
      std::size_t g = D.compose(u.on_arrow(h), gp);
      for (std::size_t s : G->fiber(C.cod(h))) {
        std::size_t x = find(idx.at({g, s})), y = find(idx.at({gp, G->act(s, h)}));
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
  auto label = [&](std::size_t i) { return D.arrow_name(pairs[i].first) + "|" + G->name(pairs[i].second); };
  std::map<std::size_t, std::size_t> best; // root ↦ pair index with least label
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [it, fresh] = best.emplace(find(i), i);
    if (!fresh && label(i) < label(it->second)) it->second = i;
  }
  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto &[r, i] : best) order.emplace_back(label(i), r);
  std::sort(order.begin(), order.end(), [&](const auto &x, const auto &y) {
    std::size_t bx = D.dom(pairs[best.at(x.second)].first), by = D.dom(pairs[best.at(y.second)].first);
    return bx != by ? bx < by : x.first < y.first;
  });
  LeftKan lk;
  std::map<std::size_t, std::size_t> rootIdx;
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  for (const auto &[nm, r] : order) {
    rootIdx[r] = names.size();
    names.push_back(nm);
    over.push_back(D.dom(pairs[best.at(r)].first));
    lk.rep.push_back(pairs[best.at(r)]);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) lk.cls[pairs[i]] = rootIdx.at(find(i));
  lk.psh = share(Presheaf::from_tables(u.target(), names, over, [&](std::size_t e, std::size_t k) {
    auto [g, s] = lk.rep[e];
    return lk.cls.at({D.compose(g, k), s});
  }));
  return lk;
}

/// u_!ψ : [g, s] ↦ [g, ψ(s)].
inline PresheafMap left_kan_map(const LeftKan &src, const LeftKan &dst, const PresheafMap &psi) {
  std::vector<std::size_t> e(src.psh->size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = dst.cls.at({src.rep[i].first, psi(src.rep[i].second)});
  return PresheafMap(src.psh, dst.psh, e);
}

/// Unit F → u_*u^*F: x ↦ ((A, g) ↦ x·g).
inline PresheafMap right_unit(const FinFunctor &u, const PshPtr &F, const Restriction &rf, const RightKan &rk) {
  const FinCategory &D = *u.target();
  std::vector<std::size_t> e(F->size());
  for (std::size_t x = 0; x < F->size(); ++x) {
    std::size_t b = F->over(x);
    std::vector<std::size_t> t;
    for (const auto &[a, g] : rk.comma[b]) t.push_back(rf.at.at({a, F->act(x, g)}));
    e[x] = rk.lookup.at({b, t});
  }
  (void)D;
  return PresheafMap(F, rk.psh, e);
}

/// Counit u^*u_*G → G: family at uA ↦ its component at (A, 1_{uA}).
inline PresheafMap right_counit(const FinFunctor &u, const PshPtr &G, const RightKan &rk, const Restriction &rr) {
  const FinCategory &D = *u.target();
  std::vector<std::size_t> e(rr.psh->size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::size_t a = rr.psh->over(i), fam = rr.base[i];
    const auto &cm = rk.comma[u.on_object(a)];
    std::size_t pos = std::find(cm.begin(), cm.end(), std::make_pair(a, D.identity(u.on_object(a)))) - cm.begin();
    e[i] = rk.family[fam][pos];
  }
  return PresheafMap(rr.psh, G, e);
}

/// Unit G → u^*u_!G: s ↦ [1_{uA}, s]@A.
inline PresheafMap left_unit(const FinFunctor &u, const PshPtr &G, const LeftKan &lk, const Restriction &rl) {
  const FinCategory &D = *u.target();
  std::vector<std::size_t> e(G->size());
  for (std::size_t s = 0; s < G->size(); ++s) {
    std::size_t a = G->over(s);
    e[s] = rl.at.at({a, lk.cls.at({D.identity(u.on_object(a)), s})});
  }
  return PresheafMap(G, rl.psh, e);
}

/// Counit u_!u^*F → F: [g, x@A] ↦ x·g.
inline PresheafMap left_counit(const PshPtr &F, const Restriction &rf, const LeftKan &lk) {
  std::vector<std::size_t> e(lk.psh->size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto [g, s] = lk.rep[i];
    e[i] = F->act(rf.base[s], g);
  }
  return PresheafMap(lk.psh, F, e);
}

/// Triangle identities and hom-set counts for u_! ⊣ u^* ⊣ u_* at G (on C) and F (on C′).
struct AdjunctionReport {
  bool left_triangles = false;  // u_! ⊣ u^*
  bool right_triangles = false; // u^* ⊣ u_*
  std::size_t hom_left_lhs = 0, hom_left_rhs = 0;   // |Hom(u_!G, F)|, |Hom(G, u^*F)|
  std::size_t hom_right_lhs = 0, hom_right_rhs = 0; // |Hom(u^*F, G)|, |Hom(F, u_*G)|
  bool left_bijection = false, right_bijection = false;
  bool ok() const {
    return left_triangles && right_triangles && hom_left_lhs == hom_left_rhs && hom_right_lhs == hom_right_rhs &&
           left_bijection && right_bijection;
  }
};

inline AdjunctionReport adjunction_check(const FinFunctor &u, const PshPtr &G, const PshPtr &F) {
  AdjunctionReport r;
  // u_! ⊣ u^*
  {
    LeftKan lg = left_kan(u, G);
    Restriction rlg = restrict_along(u, lg.psh);
    PresheafMap eta = left_unit(u, G, lg, rlg); // G → u^*u_!G
    // ε_{u_!G} ∘ u_!(η_G) = 1
    Restriction rulg = restrict_along(u, lg.psh);
    LeftKan lulg = left_kan(u, rulg.psh);
    PresheafMap eps = left_counit(lg.psh, rulg, lulg);
    PresheafMap t1 = compose(eps, left_kan_map(lg, lulg, eta));
    bool ok1 = t1 == PresheafMap::identity(lg.psh);
    // u^*(ε_F) ∘ η_{u^*F} = 1
    Restriction rf = restrict_along(u, F);
    LeftKan lrf = left_kan(u, rf.psh);
    Restriction rlrf = restrict_along(u, lrf.psh);
    PresheafMap etaR = left_unit(u, rf.psh, lrf, rlrf);
    PresheafMap epsF = left_counit(F, rf, lrf);
    PresheafMap t2 = compose(restrict_map(u, rlrf, rf, epsF), etaR);
    bool ok2 = t2 == PresheafMap::identity(rf.psh);
    r.left_triangles = ok1 && ok2;
    auto lhs = enumerate_maps(lg.psh, F);
    auto rhs = enumerate_maps(G, rf.psh);
    r.hom_left_lhs = lhs.size();
    r.hom_left_rhs = rhs.size();
    std::set<std::vector<std::size_t>> images;
    for (const auto &phi : lhs) images.insert(compose(restrict_map(u, rlg, rf, phi), eta).table());
    r.left_bijection = images.size() == lhs.size() && images.size() == rhs.size();
  }
  // u^* ⊣ u_*
  {
    Restriction rf = restrict_along(u, F);
    RightKan kf = right_kan(u, rf.psh);
    PresheafMap eta = right_unit(u, F, rf, kf); // F → u_*u^*F
    Restriction rkf = restrict_along(u, kf.psh);
    PresheafMap eps = right_counit(u, rf.psh, kf, rkf); // u^*u_*u^*F → u^*F
    // ε_{u^*F} ∘ u^*(η_F) = 1
    PresheafMap t1 = compose(eps, restrict_map(u, rf, rkf, eta));
    bool ok1 = t1 == PresheafMap::identity(rf.psh);
    // u_*(ε_G) ∘ η_{u_*G} = 1
    RightKan kg = right_kan(u, G);
    Restriction rkg = restrict_along(u, kg.psh);
    RightKan kk = right_kan(u, rkg.psh);
    PresheafMap etaK = right_unit(u, kg.psh, rkg, kk);
    PresheafMap epsG = right_counit(u, G, kg, rkg);
    PresheafMap t2 = compose(right_kan_map(kk, kg, epsG), etaK);
    bool ok2 = t2 == PresheafMap::identity(kg.psh);
    r.right_triangles = ok1 && ok2;
    auto lhs = enumerate_maps(rf.psh, G);
    auto rhs = enumerate_maps(F, kg.psh);
    r.hom_right_lhs = lhs.size();
    r.hom_right_rhs = rhs.size();
    std::set<std::vector<std::size_t>> images;
    for (const auto &psi : lhs) images.insert(compose(right_kan_map(kf, kg, psi), eta).table());
    r.right_bijection = images.size() == lhs.size() && lhs.size() == rhs.size();
  }
  return r;
}

} // namespace gw
