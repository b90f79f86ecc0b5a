#pragma once

#include <map>
#include <string>
#include <vector>

#include "gw/psh/kan.hpp"
#include "gw/site/sieve.hpp"

namespace gw {

/// Outcome of a sheaf check; on failure names the cover and what went wrong.
struct SheafVerdict {
  bool sheaf = true;
  std::string kind;  // NoAmalgamation | NonUniqueAmalgamation
  std::string cover; // sieve name
  std::string detail;
};

/// Matching families for S in F, i.e. maps S → F, as tables over S.arrows.
inline std::vector<std::vector<std::size_t>> matching_families(const PshPtr &F, const Sieve &S) {
  PshPtr SP = share(sieve_presheaf(F->category(), S));
  std::vector<std::vector<std::size_t>> out;
  for (const auto &m : enumerate_maps(SP, F)) out.push_back(m.table());
  return out;
}

inline std::vector<std::size_t> restrictions(const Presheaf &F, std::size_t x, const Sieve &S) {
  std::vector<std::size_t> r;
  for (std::size_t f : S.arrows) r.push_back(F.act(x, f));
  return r;
}

/// For every covering sieve: every matching family has exactly one amalgamation.
inline SheafVerdict is_sheaf(const PshPtr &F, const Topology &J) {
  const FinCategory &C = *J.category();
  if (!(*F->category() == C)) throw InputError("presheaf and site over different categories");
  auto fam_name = [&](const std::vector<std::size_t> &t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + F->name(t[i]);
    return s + ")";
  };
  for (std::size_t a = 0; a < C.object_count(); ++a)
    for (const auto &S : J.covers(a)) {
      std::map<std::vector<std::size_t>, std::size_t> amalg;
      for (std::size_t x : F->fiber(a)) {
        auto r = restrictions(*F, x, S);
        auto [it, fresh] = amalg.emplace(r, x);
        if (!fresh)
          return {false, "NonUniqueAmalgamation", sieve_name(C, S),
                  F->name(it->second) + " and " + F->name(x) + " restrict to " + fam_name(r)};
      }
      for (const auto &m : matching_families(F, S))
        if (!amalg.count(m)) return {false, "NoAmalgamation", sieve_name(C, S), fam_name(m)};
    }
  return {};
}

/// F^+ and the canonical map F → F^+. Since J is finite, the colimit over covers
/// is attained at the minimal cover: F^+(A) = Match(S_min(A), F).
struct PlusConstruction {
  PshPtr psh;
  PresheafMap unit;
};

inline PlusConstruction plus_construction(const PshPtr &F, const Topology &J) {
  const CatPtr &Cp = J.category();
  const FinCategory &C = *Cp;
  std::vector<Sieve> smin;
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> lookup(C.object_count());
  std::vector<std::vector<std::size_t>> fam;
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  for (std::size_t a = 0; a < C.object_count(); ++a) {
    smin.push_back(J.minimal_cover(a));
    for (auto &m : matching_families(F, smin[a])) {
      std::string s = "(";
      for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + F->name(m[i]);
      lookup[a][m] = names.size();
      names.push_back(s + ")@" + C.object_name(a));
      over.push_back(a);
      fam.push_back(std::move(m));
    }
  }
  auto position = [&](std::size_t a, std::size_t f) {
    const auto &v = smin[a].arrows;
    return std::size_t(std::lower_bound(v.begin(), v.end(), f) - v.begin());
  };
  PshPtr P = share(Presheaf::from_tables(Cp, names, over, [&](std::size_t e, std::size_t h) {
    std::size_t a = over[e], b = C.dom(h);
    std::vector<std::size_t> y;
    for (std::size_t g : smin[b].arrows) y.push_back(fam[e][position(a, C.compose(h, g))]);
    return lookup[b].at(y);
  }));
  std::vector<std::size_t> eta(F->size());
  for (std::size_t x = 0; x < F->size(); ++x) eta[x] = lookup[F->over(x)].at(restrictions(*F, x, smin[F->over(x)]));
  return {P, PresheafMap(F, P, eta)};
}

/// aF = F^{++} with i : F → aF.
struct Sheafification {
  PshPtr sheaf;
  PresheafMap unit;
};

inline Sheafification sheafify(const PshPtr &F, const Topology &J) {
  PlusConstruction p1 = plus_construction(F, J);
  PlusConstruction p2 = plus_construction(p1.psh, J);
  return {p2.psh, compose(p2.unit, p1.unit)};
}

/// Every map F → S factors uniquely through i (S is expected to be a sheaf).
inline bool sheafify_universal(const Sheafification &a, const PshPtr &S) {
  auto from_f = enumerate_maps(a.unit.source(), S);
  auto from_a = enumerate_maps(a.sheaf, S);
  std::set<std::vector<std::size_t>> images;
  for (const auto &m : from_a) images.insert(compose(m, a.unit).table());
  return from_a.size() == from_f.size() && images.size() == from_f.size();
}

/// J induced on C by u : C → C′: S covers A iff u(S) generates a J′-cover of uA.
inline Topology induced_topology(const FinFunctor &u, const Topology &Jp) {
  const FinCategory &C = *u.source(), &D = *u.target();
  std::vector<std::vector<Sieve>> cv(C.object_count());
  for (std::size_t a = 0; a < C.object_count(); ++a)
    for (const auto &s : all_sieves(C, a)) {
      std::vector<std::size_t> img;
      for (std::size_t f : s.arrows) img.push_back(u.on_arrow(f));
      if (Jp.is_cover(sieve_generate(D, u.on_object(a), img))) cv[a].push_back(s);
    }
  return Topology::validate(u.source(), cv);
}

struct ComparisonReport {
  Topology induced;
  std::vector<bool> restriction_is_sheaf; // u^*F is a J-sheaf
  std::vector<bool> unit_iso;             // F → u_*u^*F
  std::vector<bool> counit_iso;           // u^*u_*(u^*F) → u^*F
  bool ok() const {
    auto all = [](const std::vector<bool> &v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
    return all(restriction_is_sheaf) && all(unit_iso) && all(counit_iso);
  }
};

/// Checks the hypotheses (u full, faithful, every object J′-covered by
/// objects in the image of u), builds the induced J and tests the
/// restriction/extension round trip on each supplied J′-sheaf.
inline ComparisonReport comparison_check(const FinFunctor &u, const Topology &Jp, const std::vector<PshPtr> &tests) {
  const FinCategory &D = *u.target();
  if (!(*Jp.category() == D)) throw InputError("topology is not on the target of u");
  if (!u.is_full()) throw ValidationError("HypothesisFailure", "fullness");
  if (!u.is_faithful()) throw ValidationError("HypothesisFailure", "faithfulness");
  for (std::size_t b = 0; b < D.object_count(); ++b) {
    std::vector<std::size_t> fam;
    for (std::size_t a = 0; a < u.source()->object_count(); ++a)
      for (std::size_t g : D.hom(u.on_object(a), b)) fam.push_back(g);
    if (!Jp.is_cover(sieve_generate(D, b, fam)))
      throw ValidationError("HypothesisFailure", "covering: " + D.object_name(b) + " has no cover by objects of u");
  }
  ComparisonReport r;
  r.induced = induced_topology(u, Jp);
  for (const auto &F : tests) {
    if (!is_sheaf(F, Jp).sheaf) throw InputError("comparison test presheaf is not a sheaf");
    Restriction rf = restrict_along(u, F);
    r.restriction_is_sheaf.push_back(is_sheaf(rf.psh, r.induced).sheaf);
    RightKan k = right_kan(u, rf.psh);
    r.unit_iso.push_back(right_unit(u, F, rf, k).is_isomorphism());
    Restriction rk = restrict_along(u, k.psh);
    r.counit_iso.push_back(right_counit(u, rf.psh, k, rk).is_isomorphism());
  }
  return r;
}

} // namespace gw
