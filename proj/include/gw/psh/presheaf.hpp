#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "gw/fincat/functor.hpp"

namespace gw {

/// A presheaf on a finite category C as an indexed set F0 → C0 with an action
/// table e_F(x, f) = x·f, defined when cod f is the index of x.
class Presheaf {
public:
  static constexpr std::size_t npos = FinCategory::npos;

  struct Raw {
    std::vector<std::vector<std::string>> fibers; // per object of C
    std::vector<std::array<std::string, 3>> action; // x, f, x·f
  };

  Presheaf() = default;

  /// Validates clauses 1-3: x·f lies over dom f, x·(g h) = (x·g)·h, x·1 = x.
  /// Identity entries may be omitted from `raw.action`; other omissions are
  /// MissingActionEntry violations.
  static Presheaf from_raw(CatPtr cat, const Raw &raw) {
    Presheaf p;
    p.cat_ = std::move(cat);
    const FinCategory &C = *p.cat_;
    if (raw.fibers.size() != C.object_count()) throw InputError("one fiber per object required");
    for (std::size_t a = 0; a < C.object_count(); ++a)
      for (const auto &x : raw.fibers[a]) p.add_element(x, a);
    p.act_.assign(p.names_.size() * C.arrow_count(), npos);
    std::vector<Violation> bad;
    for (const auto &[x, f, y] : raw.action) {
      std::size_t ix = p.element(x), jf = C.arrow(f), ky = p.element(y);
      if (C.cod(jf) != p.over_[ix]) {
        bad.push_back({"ActionOutOfFiber", x + "·" + f + ": " + x + " is not over cod(" + f + ")"});
        continue;
      }
      std::size_t &slot = p.act_[ix * C.arrow_count() + jf];
      if (slot != npos && slot != ky) throw InputError("conflicting action entries for " + x + "·" + f);
      slot = ky;
      if (p.over_[ky] != C.dom(jf))
        bad.push_back({"ActionOutOfFiber", x + "·" + f + " = " + y + " is not over dom(" + f + ")"});
    }
    for (std::size_t x = 0; x < p.names_.size(); ++x) {
      std::size_t &id = p.act_[x * C.arrow_count() + C.identity(p.over_[x])];
      if (id == npos) id = x;
    }
    p.check(bad);
    return p;
  }

  /// Programmatic construction from dense tables; `act(x, f)` is consulted for
  /// every x and every f with cod f = over[x].
  static Presheaf from_tables(CatPtr cat, std::vector<std::string> names, std::vector<std::size_t> over,
                              const std::function<std::size_t(std::size_t, std::size_t)> &act) {
    Presheaf p;
    p.cat_ = std::move(cat);
    const FinCategory &C = *p.cat_;
    if (names.size() != over.size()) throw InputError("names and indices differ in length");
    for (std::size_t x = 0; x < names.size(); ++x) {
      if (over[x] >= C.object_count()) throw InputError("element indexed outside C0");
      p.add_element(names[x], over[x]);
    }
    p.act_.assign(p.names_.size() * C.arrow_count(), npos);
    std::vector<Violation> bad;
    for (std::size_t x = 0; x < p.names_.size(); ++x)
      for (std::size_t f : C.arrows_into(p.over_[x])) {
        std::size_t y = act(x, f);
        if (y >= p.names_.size() || p.over_[y] != C.dom(f)) {
          bad.push_back({"ActionOutOfFiber", p.names_[x] + "·" + C.arrow_name(f)});
          continue;
        }
        p.act_[x * C.arrow_count() + f] = y;
      }
    p.check(bad);
    return p;
  }

  const CatPtr &category() const { return cat_; }
  std::size_t size() const { return names_.size(); }
  const std::string &name(std::size_t x) const { return names_.at(x); }
  const std::vector<std::string> &names() const { return names_; }
  std::size_t over(std::size_t x) const { return over_.at(x); }
  const std::vector<std::size_t> &fiber(std::size_t a) const { return fibers_.at(a); }
  std::size_t element(const std::string &name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown element '" + name + "'");
    return it->second;
  }
  bool has_element(const std::string &name) const { return index_.count(name) != 0; }

  /// x·f for f with cod f = over(x).
  std::size_t act(std::size_t x, std::size_t f) const {
    std::size_t y = act_[x * cat_->arrow_count() + f];
    if (y == npos) throw InputError("action of '" + cat_->arrow_name(f) + "' on '" + names_[x] + "' undefined");
    return y;
  }

  std::vector<std::size_t> fiber_sizes() const {
    std::vector<std::size_t> s;
    for (const auto &f : fibers_) s.push_back(f.size());
    return s;
  }

  Raw to_raw() const {
    Raw r;
    for (const auto &fb : fibers_) {
      r.fibers.emplace_back();
      for (auto x : fb) r.fibers.back().push_back(names_[x]);
    }
    for (std::size_t x = 0; x < names_.size(); ++x)
      for (std::size_t f : cat_->arrows_into(over_[x]))
        r.action.push_back({names_[x], cat_->arrow_name(f), names_[act(x, f)]});
    return r;
  }

  friend bool operator==(const Presheaf &a, const Presheaf &b) {
    return *a.cat_ == *b.cat_ && a.names_ == b.names_ && a.over_ == b.over_ && a.act_ == b.act_;
  }

private:
  void add_element(const std::string &x, std::size_t a) {
    if (!index_.emplace(x, names_.size()).second) throw InputError("duplicate element '" + x + "'");
    names_.push_back(x);
    over_.push_back(a);
    fibers_.resize(cat_->object_count());
    fibers_[a].push_back(names_.size() - 1);
  }

  void check(std::vector<Violation> &bad) {
    const FinCategory &C = *cat_;
    fibers_.resize(C.object_count());
    const std::size_t n = C.arrow_count();
    for (std::size_t x = 0; x < names_.size(); ++x)
      for (std::size_t f : C.arrows_into(over_[x]))
        if (act_[x * n + f] == npos) bad.push_back({"MissingActionEntry", names_[x] + "·" + C.arrow_name(f)});
    if (bad.empty()) {
      for (std::size_t x = 0; x < names_.size(); ++x) {
        if (act_[x * n + C.identity(over_[x])] != x)
          bad.push_back({"NonFunctorial", "(" + names_[x] + ", " + C.arrow_name(C.identity(over_[x])) + ")"});
        for (std::size_t g : C.arrows_into(over_[x]))
          for (std::size_t h : C.arrows_into(C.dom(g)))
            if (act_[x * n + C.compose(g, h)] != act_[act_[x * n + g] * n + h])
              bad.push_back({"NonFunctorial", "(" + names_[x] + ", " + C.arrow_name(g) + "∘" + C.arrow_name(h) + ")"});
      }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
  }

  CatPtr cat_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> over_;
  std::vector<std::vector<std::size_t>> fibers_;
  std::vector<std::size_t> act_;
};

using PshPtr = std::shared_ptr<const Presheaf>;
inline PshPtr share(Presheaf p) { return std::make_shared<const Presheaf>(std::move(p)); }

/// A map of presheaves: a function over C0 commuting with the actions.
class PresheafMap {
public:
  PresheafMap(PshPtr source, PshPtr target, std::vector<std::size_t> eta)
      : src_(std::move(source)), tgt_(std::move(target)), eta_(std::move(eta)) {
    const Presheaf &F = *src_, &G = *tgt_;
    if (!(*F.category() == *G.category())) throw InputError("presheaf map between different sites");
    if (eta_.size() != F.size()) throw InputError("presheaf map needs one image per element");
    std::vector<Violation> bad;
    for (std::size_t x = 0; x < F.size(); ++x)
      if (eta_[x] >= G.size() || G.over(eta_[x]) != F.over(x)) bad.push_back({"NotOverC0", F.name(x)});
    if (bad.empty())
      for (std::size_t x = 0; x < F.size(); ++x)
        for (std::size_t f : F.category()->arrows_into(F.over(x)))
          if (eta_[F.act(x, f)] != G.act(eta_[x], f))
            bad.push_back({"NotNatural", F.name(x) + "·" + F.category()->arrow_name(f)});
    if (!bad.empty()) throw ValidationError(std::move(bad));
  }

  static PresheafMap identity(const PshPtr &F) {
    std::vector<std::size_t> e(F->size());
    std::iota(e.begin(), e.end(), 0);
    return PresheafMap(F, F, e);
  }

  const PshPtr &source() const { return src_; }
  const PshPtr &target() const { return tgt_; }
  std::size_t operator()(std::size_t x) const { return eta_.at(x); }
  const std::vector<std::size_t> &table() const { return eta_; }

  bool is_injective() const {
    std::vector<std::size_t> s = eta_;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
  }
  bool is_isomorphism() const { return is_injective() && eta_.size() == tgt_->size(); }

  friend bool operator==(const PresheafMap &a, const PresheafMap &b) {
    return a.eta_ == b.eta_ && *a.src_ == *b.src_ && *a.tgt_ == *b.tgt_;
  }

private:
  PshPtr src_, tgt_;
  std::vector<std::size_t> eta_;
};

/// ψ ∘ φ.
inline PresheafMap compose(const PresheafMap &psi, const PresheafMap &phi) {
  if (!(*psi.source() == *phi.target())) throw InputError("compose: presheaf endpoints differ");
  std::vector<std::size_t> e(phi.table().size());
  for (std::size_t x = 0; x < e.size(); ++x) e[x] = psi(phi(x));
  return PresheafMap(phi.source(), psi.target(), e);
}

/// Inverse of an isomorphism of presheaves.
inline PresheafMap inverse(const PresheafMap &phi) {
  if (!phi.is_isomorphism()) throw ValidationError("NotAnIsomorphism", "presheaf map is not bijective");
  std::vector<std::size_t> e(phi.table().size());
  for (std::size_t x = 0; x < e.size(); ++x) e[phi(x)] = x;
  return PresheafMap(phi.target(), phi.source(), e);
}

namespace detail {
/// Backtracking over maps F → G in lexicographic order; `visit` returns false to stop.
/// With `injective`, only injective maps are produced.
inline void search_maps(const PshPtr &F, const PshPtr &G, bool injective,
                        const std::function<bool(const std::vector<std::size_t> &)> &visit) {
  const Presheaf &f = *F, &g = *G;
  const FinCategory &C = *f.category();
  // constraints z = y·h, checked once the later of y, z is assigned
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cons(f.size());
  for (std::size_t y = 0; y < f.size(); ++y)
    for (std::size_t h : C.arrows_into(f.over(y))) {
      std::size_t z = f.act(y, h);
      cons[std::max(y, z)].emplace_back(y, h);
    }
  std::vector<std::size_t> eta(f.size());
  std::vector<char> used(g.size(), 0);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == f.size()) {
      stop = !visit(eta);
      return;
    }
    for (std::size_t c : g.fiber(f.over(x))) {
      if (injective && used[c]) continue;
      eta[x] = c;
      bool ok = true;
      for (const auto &[y, h] : cons[x])
        if (eta[f.act(y, h)] != g.act(eta[y], h)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      used[c] = 1;
      rec(x + 1);
      used[c] = 0;
      if (stop) return;
    }
  };
  rec(0);
}
} // namespace detail

/// Every presheaf map F → G, in lexicographic order of element images.
inline std::vector<PresheafMap> enumerate_maps(const PshPtr &F, const PshPtr &G, std::size_t cap = 1'000'000) {
  std::vector<PresheafMap> out;
  detail::search_maps(F, G, false, [&](const std::vector<std::size_t> &eta) {
    if (out.size() >= cap) throw ResourceCapExceeded("presheaf map enumeration exceeds cap");
    out.emplace_back(F, G, eta);
    return true;
  });
  return out;
}

/// Some isomorphism F → G, if one exists.
inline std::optional<PresheafMap> find_isomorphism(const PshPtr &F, const PshPtr &G) {
  if (F->fiber_sizes() != G->fiber_sizes()) return std::nullopt;
  std::optional<PresheafMap> out;
  detail::search_maps(F, G, true, [&](const std::vector<std::size_t> &eta) {
    out.emplace(F, G, eta);
    return false;
  });
  return out;
}

/// Representable R_B: elements are arrows into B (named by arrow id), acting by precomposition.
inline Presheaf representable(const CatPtr &C, std::size_t B) {
  const FinCategory &c = *C;
  if (B >= c.object_count()) throw InputError("unknown object for representable");
  const auto &arr = c.arrows_into(B);
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    names.push_back(c.arrow_name(arr[i]));
    over.push_back(c.dom(arr[i]));
    pos[arr[i]] = i;
  }
  return Presheaf::from_tables(C, names, over, [&](std::size_t x, std::size_t f) { return pos.at(c.compose(arr[x], f)); });
}

/// R_h : R_B → R_D, g ↦ h∘g.
inline PresheafMap representable_on_arrow(const CatPtr &C, std::size_t h) {
  const FinCategory &c = *C;
  PshPtr RB = share(representable(C, c.dom(h))), RD = share(representable(C, c.cod(h)));
  std::vector<std::size_t> e;
  for (std::size_t x = 0; x < RB->size(); ++x) e.push_back(RD->element(c.arrow_name(c.compose(h, c.arrow(RB->name(x))))));
  return PresheafMap(RB, RD, e);
}

/// Yoneda: ν ↦ ν(1_B).
inline std::size_t yoneda_element(const PresheafMap &nu, std::size_t B) {
  const FinCategory &c = *nu.source()->category();
  return nu(nu.source()->element(c.arrow_name(c.identity(B))));
}

/// Yoneda: x ∈ F(B) ↦ (g ↦ x·g).
inline PresheafMap yoneda_map(const PshPtr &F, std::size_t B, std::size_t x) {
  if (F->over(x) != B) throw InputError("element is not in F(B)");
  const FinCategory &c = *F->category();
  PshPtr RB = share(representable(F->category(), B));
  std::vector<std::size_t> e;
  for (std::size_t g = 0; g < RB->size(); ++g) e.push_back(F->act(x, c.arrow(RB->name(g))));
  return PresheafMap(RB, F, e);
}

/// Result of a Yoneda check at one object.
struct YonedaReport {
  std::size_t transformations = 0; // |Nat(R_B, F)| by enumeration
  std::size_t elements = 0;        // |F(B)|
  bool round_trips = true;         // both composites are identities
};

inline YonedaReport yoneda_check(const PshPtr &F, std::size_t B) {
  YonedaReport r;
  PshPtr RB = share(representable(F->category(), B));
  auto nats = enumerate_maps(RB, F);
  r.transformations = nats.size();
  r.elements = F->fiber(B).size();
  for (const auto &nu : nats)
    if (!(yoneda_map(F, B, yoneda_element(nu, B)) == nu)) r.round_trips = false;
  for (std::size_t x : F->fiber(B))
    if (yoneda_element(yoneda_map(F, B, x), B) != x) r.round_trips = false;
  return r;
}

/// A family of presheaves indexed by a set I, encoded as one presheaf over C
/// with a label map F0 → I preserved by the action (elements over C0 × I).
struct PresheafFamily {
  Presheaf total;
  std::vector<std::size_t> label;
  std::vector<std::string> index_names;

  static PresheafFamily from_members(const CatPtr &C, const std::vector<std::pair<std::string, Presheaf>> &members) {
    std::vector<std::string> names, idx;
    std::vector<std::size_t> over, label, offset;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Presheaf &m = members[i].second;
      if (!(*m.category() == *C)) throw InputError("family member over a different category");
      idx.push_back(members[i].first);
      offset.push_back(names.size());
      for (std::size_t x = 0; x < m.size(); ++x) {
        names.push_back(members[i].first + "/" + m.name(x));
        over.push_back(m.over(x));
        label.push_back(i);
      }
    }
    Presheaf t = Presheaf::from_tables(C, names, over, [&](std::size_t x, std::size_t f) {
      std::size_t i = label[x];
      return offset[i] + members[i].second.act(x - offset[i], f);
    });
    return {std::move(t), std::move(label), std::move(idx)};
  }

  /// F(A, i).
  std::vector<std::size_t> fiber(std::size_t a, std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t x : total.fiber(a))
      if (label[x] == i) out.push_back(x);
    return out;
  }
};

/// ∐_I F: the same elements and action, indexed by the projection C0 × I → C0.
inline Presheaf coproduct(const PresheafFamily &fam) {
  const Presheaf &t = fam.total;
  const FinCategory &C = *t.category();
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t f : C.arrows_into(t.over(x)))
      if (fam.label[t.act(x, f)] != fam.label[x])
        throw ValidationError("ActionLeavesIndex", t.name(x) + "·" + C.arrow_name(f));
  return t;
}

/// Binary product: pairs over the same object, named "(x,y)".
inline Presheaf product(const PshPtr &F, const PshPtr &G) {
  if (!(*F->category() == *G->category())) throw InputError("product over different categories");
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos;
  const FinCategory &C = *F->category();
  for (std::size_t a = 0; a < C.object_count(); ++a)
    for (std::size_t x : F->fiber(a))
      for (std::size_t y : G->fiber(a)) {
        pos[{x, y}] = names.size();
        names.push_back("(" + F->name(x) + "," + G->name(y) + ")");
        over.push_back(a);
        pairs.emplace_back(x, y);
      }
  return Presheaf::from_tables(F->category(), names, over, [&](std::size_t p, std::size_t f) {
    return pos.at({F->act(pairs[p].first, f), G->act(pairs[p].second, f)});
  });
}

/// Projections from a product built by `product`.
inline std::pair<PresheafMap, PresheafMap> product_projections(const PshPtr &P, const PshPtr &F, const PshPtr &G) {
  const FinCategory &C = *F->category();
  std::vector<std::size_t> pa(P->size()), pb(P->size());
  for (std::size_t o = 0; o < C.object_count(); ++o)
    for (std::size_t x : F->fiber(o))
      for (std::size_t y : G->fiber(o)) {
        std::size_t p = P->element("(" + F->name(x) + "," + G->name(y) + ")");
        pa[p] = x;
        pb[p] = y;
      }
  return {PresheafMap(P, F, pa), PresheafMap(P, G, pb)};
}

/// Coequalizer of η, ι : F ⇉ G. Classes are named by their least element id.
struct Coequalizer {
  PshPtr quotient;
  PresheafMap projection;
};

inline Coequalizer coequalizer(const PresheafMap &eta, const PresheafMap &iota) {
  if (!(*eta.source() == *iota.source()) || !(*eta.target() == *iota.target()))
    throw InputError("coequalizer of non-parallel maps");
  const Presheaf &G = *eta.target();
  const FinCategory &C = *G.category();
  std::vector<std::size_t> parent(G.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[std::max(x, y)] = std::min(x, y);
    return true;
  };
  for (std::size_t x = 0; x < eta.source()->size(); ++x) unite(eta(x), iota(x));
  // close under the action: x ~ y ⇒ x·f ~ y·f
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < G.size(); ++x) {
      std::size_t r = find(x);
      if (r == x) continue;
      for (std::size_t f : C.arrows_into(G.over(x))) changed |= unite(G.act(x, f), G.act(r, f));
    }
  }
  std::map<std::size_t, std::string> rep;
  for (std::size_t x = 0; x < G.size(); ++x) {
    auto [it, fresh] = rep.emplace(find(x), G.name(x));
    if (!fresh && G.name(x) < it->second) it->second = G.name(x);
  }
  std::vector<std::string> names;
  std::vector<std::size_t> over, root;
  std::map<std::size_t, std::size_t> cls;
  // order classes by their names for a deterministic layout
  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto &[r, nm] : rep) order.emplace_back(nm, r);
  std::sort(order.begin(), order.end(), [&](const auto &a, const auto &b) {
    return G.over(a.second) != G.over(b.second) ? G.over(a.second) < G.over(b.second) : a.first < b.first;
  });
  for (const auto &[nm, r] : order) {
    cls[r] = names.size();
    names.push_back(nm);
    over.push_back(G.over(r));
    root.push_back(r);
  }
  PshPtr Q = share(Presheaf::from_tables(G.category(), names, over,
                                         [&](std::size_t c, std::size_t f) { return cls.at(find(G.act(root[c], f))); }));
  std::vector<std::size_t> proj(G.size());
  for (std::size_t x = 0; x < G.size(); ++x) proj[x] = cls.at(find(x));
  return {Q, PresheafMap(eta.target(), Q, proj)};
}

/// Unique factorization of k : G → H through a coequalizer projection, if k kills the pair.
inline std::optional<PresheafMap> factor_through_coequalizer(const Coequalizer &q, const PresheafMap &k) {
  std::vector<std::size_t> e(q.quotient->size(), Presheaf::npos);
  for (std::size_t x = 0; x < k.source()->size(); ++x) {
    std::size_t c = q.projection(x);
    if (e[c] == Presheaf::npos) e[c] = k(x);
    else if (e[c] != k(x)) return std::nullopt;
  }
  return PresheafMap(q.quotient, k.target(), e);
}

/// Constant presheaf with fiber `values` at every object (all arrows act trivially).
inline Presheaf constant_presheaf(const CatPtr &C, const std::vector<std::string> &values) {
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  const std::size_t k = values.size();
  for (std::size_t a = 0; a < C->object_count(); ++a)
    for (const auto &v : values) {
      names.push_back(v + "@" + C->object_name(a));
      over.push_back(a);
    }
  return Presheaf::from_tables(C, names, over, [&](std::size_t x, std::size_t f) { return C->dom(f) * k + x % k; });
}

} // namespace gw
