#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gw/fincat/functor.hpp"

namespace gw {

/// A class Σ of arrows of a finite category, normalized to contain every
/// identity and to be closed under composition.
class ArrowClass {
public:
  ArrowClass(CatPtr base, const std::vector<std::size_t> &members) : base_(std::move(base)) {
    const FinCategory &C = *base_;
    in_.assign(C.arrow_count(), false);
    for (auto f : members) {
      if (f >= C.arrow_count()) throw InputError("arrow class names an unknown arrow");
      in_[f] = true;
    }
    given_ = count();
    for (std::size_t a = 0; a < C.object_count(); ++a) in_[C.identity(a)] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t g = 0; g < C.arrow_count(); ++g)
        if (in_[g])
          for (std::size_t f : C.arrows_into(C.dom(g)))
            if (in_[f] && !in_[C.compose(g, f)]) in_[C.compose(g, f)] = grew = true;
    }
  }

  static ArrowClass from_names(CatPtr base, const std::vector<std::string> &names) {
    std::vector<std::size_t> m;
    for (const auto &n : names) m.push_back(base->arrow(n));
    return ArrowClass(std::move(base), m);
  }

  const CatPtr &base_ptr() const { return base_; }
  const FinCategory &base() const { return *base_; }
  bool contains(std::size_t f) const { return in_.at(f); }
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < in_.size(); ++f)
      if (in_[f]) out.push_back(f);
    return out;
  }
  std::size_t count() const { return std::size_t(std::count(in_.begin(), in_.end(), true)); }
  /// Arrows added by normalization.
  std::size_t added() const { return count() - given_; }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (auto f : members()) out.push_back(base_->arrow_name(f));
    return out;
  }

private:
  CatPtr base_;
  std::vector<bool> in_;
  std::size_t given_ = 0;
};

/// The fraction f ∘ s⁻¹ : A ⇒ B, with s : C → A in Σ and f : C → B.
struct Roof {
  std::size_t s, f;
  bool operator==(const Roof &) const = default;
  auto operator<=>(const Roof &) const = default;
};

struct OreVerdict {
  bool ok = true;
  std::vector<Violation> failures;
};

/// Right calculus of fractions: every cospan X -f→ B ←t- E with t ∈ Σ completes to
/// f ∘ t′ = t ∘ f′ with t′ ∈ Σ, and s ∘ u = s ∘ v with s ∈ Σ implies u ∘ t = v ∘ t for some t ∈ Σ.
inline OreVerdict check_ore(const ArrowClass &S) {
  const FinCategory &C = S.base();
  OreVerdict v;
  const auto sigma = S.members();
  for (std::size_t t : sigma)
    for (std::size_t f : C.arrows_into(C.cod(t))) {
      bool found = false;
      for (std::size_t tp : C.arrows_into(C.dom(f))) {
        if (!S.contains(tp)) continue;
        for (std::size_t fp : C.hom(C.dom(tp), C.dom(t)))
          if (C.compose(f, tp) == C.compose(t, fp)) {
            found = true;
            break;
          }
        if (found) break;
      }
      if (!found)
        v.failures.push_back({"OreSquare", "cospan " + C.arrow_name(f) + " → " + C.object_name(C.cod(t)) + " ← " +
                                               C.arrow_name(t) + " has no completion"});
    }
  for (std::size_t s : sigma)
    for (std::size_t u : C.arrows_into(C.dom(s)))
      for (std::size_t w : C.hom(C.dom(u), C.dom(s))) {
        if (w <= u || C.compose(s, u) != C.compose(s, w)) continue;
        bool found = false;
        for (std::size_t t : C.arrows_into(C.dom(u)))
          if (S.contains(t) && C.compose(u, t) == C.compose(w, t)) {
            found = true;
            break;
          }
        if (!found)
          v.failures.push_back({"Cancellation", "(" + C.arrow_name(s) + ", " + C.arrow_name(u) + ", " +
                                                    C.arrow_name(w) + ")"});
      }
  v.ok = v.failures.empty();
  return v;
}

inline std::size_t roof_source(const ArrowClass &S, const Roof &r) { return S.base().cod(r.s); }
inline std::size_t roof_target(const ArrowClass &S, const Roof &r) { return S.base().cod(r.f); }

inline Roof make_roof(const ArrowClass &S, std::size_t s, std::size_t f) {
  const FinCategory &C = S.base();
  if (!S.contains(s)) throw InputError("roof leg " + C.arrow_name(s) + " is not in the class");
  if (C.dom(s) != C.dom(f)) throw InputError("roof legs must share a domain");
  return {s, f};
}

/// A common refinement u, u′ with s∘u = s′∘u′ ∈ Σ and f∘u = f′∘u′.
inline bool roof_equal(const ArrowClass &S, const Roof &a, const Roof &b) {
  const FinCategory &C = S.base();
  if (C.cod(a.s) != C.cod(b.s) || C.cod(a.f) != C.cod(b.f)) return false;
  if (a == b) return true;
  for (std::size_t u : C.arrows_into(C.dom(a.s)))
    for (std::size_t w : C.hom(C.dom(u), C.dom(b.s))) {
      std::size_t su = C.compose(a.s, u);
      if (su == C.compose(b.s, w) && S.contains(su) && C.compose(a.f, u) == C.compose(b.f, w)) return true;
    }
  return false;
}

/// (g t⁻¹) ∘ (f s⁻¹) = (g f′)(s t′)⁻¹ from the first Ore completion f ∘ t′ = t ∘ f′.
inline Roof roof_compose(const ArrowClass &S, const Roof &r1, const Roof &r2) {
  const FinCategory &C = S.base();
  if (C.cod(r1.f) != C.cod(r2.s)) throw InputError("roofs are not composable");
  for (std::size_t tp : C.arrows_into(C.dom(r1.f))) {
    if (!S.contains(tp)) continue;
    for (std::size_t fp : C.hom(C.dom(tp), C.dom(r2.s)))
      if (C.compose(r1.f, tp) == C.compose(r2.s, fp)) return {C.compose(r1.s, tp), C.compose(r2.f, fp)};
  }
  throw ValidationError("OreSquare", "no completion for " + C.arrow_name(r1.f) + ", " + C.arrow_name(r2.s));
}

/// Every roof A ⇒ B.
inline std::vector<Roof> roofs(const ArrowClass &S, std::size_t A, std::size_t B) {
  const FinCategory &C = S.base();
  std::vector<Roof> out;
  for (std::size_t s : C.arrows_into(A))
    if (S.contains(s))
      for (std::size_t f : C.hom(C.dom(s), B)) out.push_back({s, f});
  return out;
}

inline std::string roof_name(const FinCategory &C, const Roof &r) {
  return "⟨" + C.arrow_name(r.s) + "," + C.arrow_name(r.f) + "⟩";
}

/// C[Σ⁻¹] with roof classes as arrows and the canonical functor Q.
struct LocalizedCategory {
  CatPtr category;
  std::vector<Roof> representative;         // per arrow of `category`
  std::vector<std::vector<Roof>> members;   // per arrow of `category`
  std::map<Roof, std::size_t> class_of;
  FinFunctor Q;

  std::size_t hom_size(std::size_t A, std::size_t B) const { return category->hom(A, B).size(); }
};

namespace detail {
inline bool roof_less(const FinCategory &C, const Roof &a, const Roof &b) {
  return std::pair(C.arrow_name(a.s), C.arrow_name(a.f)) < std::pair(C.arrow_name(b.s), C.arrow_name(b.f));
}
} // namespace detail

inline LocalizedCategory localize(const ArrowClass &S) {
  OreVerdict v = check_ore(S);
  if (!v.ok) throw ValidationError(v.failures);
  const FinCategory &C = S.base();
  const std::size_t n = C.object_count();
  std::vector<Roof> reps;
  std::vector<std::vector<Roof>> mem;
  std::map<Roof, std::size_t> cls;
  std::vector<std::vector<std::size_t>> homs(n * n);
  for (std::size_t A = 0; A < n; ++A)
    for (std::size_t B = 0; B < n; ++B) {
      auto rs = roofs(S, A, B);
      std::vector<std::size_t> parent(rs.size());
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j)
          if (find(i) != find(j) && roof_equal(S, rs[i], rs[j])) parent[find(j)] = find(i);
      std::map<std::size_t, std::vector<Roof>> groups;
      for (std::size_t i = 0; i < rs.size(); ++i) groups[find(i)].push_back(rs[i]);
      std::vector<std::vector<Roof>> ordered;
      for (auto &[_, g] : groups) {
        std::sort(g.begin(), g.end(), [&](const Roof &a, const Roof &b) { return detail::roof_less(C, a, b); });
        ordered.push_back(std::move(g));
      }
      std::sort(ordered.begin(), ordered.end(),
                [&](const auto &a, const auto &b) { return detail::roof_less(C, a.front(), b.front()); });
      for (auto &g : ordered) {
        std::size_t id = reps.size();
        for (const auto &r : g) cls[r] = id;
        reps.push_back(g.front());
        mem.push_back(std::move(g));
        homs[A * n + B].push_back(id);
      }
    }
  FinCategory::Builder b;
  for (std::size_t A = 0; A < n; ++A) b.object(C.object_name(A));
  std::vector<std::string> names;
  for (const auto &r : reps) names.push_back(roof_name(C, r));
  std::vector<bool> is_id(reps.size(), false);
  for (std::size_t A = 0; A < n; ++A) {
    std::size_t id = cls.at({C.identity(A), C.identity(A)});
    is_id[id] = true;
    b.identity(C.object_name(A), names[id]);
  }
  for (std::size_t k = 0; k < reps.size(); ++k)
    if (!is_id[k]) b.arrow(names[k], C.object_name(C.cod(reps[k].s)), C.object_name(C.cod(reps[k].f)));
  for (std::size_t g = 0; g < reps.size(); ++g)
    for (std::size_t f = 0; f < reps.size(); ++f)
      if (C.cod(reps[f].f) == C.cod(reps[g].s))
        b.compose(names[g], names[f], names[cls.at(roof_compose(S, reps[f], reps[g]))]);
  CatPtr L = share(b.finish());
  std::vector<std::size_t> q(C.arrow_count());
  for (std::size_t f = 0; f < C.arrow_count(); ++f) q[f] = L->arrow(names[cls.at({C.identity(C.dom(f)), f})]);
  FinFunctor Q(S.base_ptr(), L, q);
  // reindex classes by arrow of L
  std::vector<Roof> rep2(reps.size());
  std::vector<std::vector<Roof>> mem2(reps.size());
  for (std::size_t k = 0; k < reps.size(); ++k) {
    std::size_t a = L->arrow(names[k]);
    rep2[a] = reps[k];
    mem2[a] = std::move(mem[k]);
    for (const auto &r : mem2[a]) cls[r] = a;
  }
  return {L, std::move(rep2), std::move(mem2), std::move(cls), std::move(Q)};
}

/// Arrows of C sent to isomorphisms by Q.
inline std::vector<std::size_t> saturation(const LocalizedCategory &L) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < L.Q.source()->arrow_count(); ++f)
    if (L.category->is_isomorphism(L.Q.on_arrow(f))) out.push_back(f);
  return out;
}

inline bool inverts(const FinFunctor &F, const ArrowClass &S) {
  for (auto s : S.members())
    if (!F.target()->is_isomorphism(F.on_arrow(s))) return false;
  return true;
}

struct UniversalVerdict {
  std::size_t localized_functors = 0; // C[Σ⁻¹] → T
  std::size_t inverting_functors = 0; // C → T sending Σ to isomorphisms
  bool bijective = false;
};

/// Precomposition with Q against every functor C → T inverting Σ.
inline UniversalVerdict universal_property_check(const ArrowClass &S, const CatPtr &T, std::size_t cap = 1'000'000) {
  LocalizedCategory L = localize(S);
  auto from_l = enumerate_functors(L.category, T, cap);
  auto from_c = enumerate_functors(S.base_ptr(), T, cap);
  UniversalVerdict v;
  v.localized_functors = from_l.size();
  std::set<std::vector<std::size_t>> inverting, image;
  for (const auto &F : from_c)
    if (inverts(F, S)) inverting.insert(F.arrow_map());
  v.inverting_functors = inverting.size();
  bool into = true;
  for (const auto &G : from_l) {
    auto m = compose(G, L.Q).arrow_map();
    into = into && inverting.count(m);
    image.insert(m);
  }
  v.bijective = into && image.size() == from_l.size() && image.size() == inverting.size();
  return v;
}

} // namespace gw
