#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gw/fincat/category.hpp"

namespace gw {

/// A functor given by its arrow part; the object part is read off identities.
class FinFunctor {
public:
  FinFunctor(CatPtr source, CatPtr target, std::vector<std::size_t> arrow_map)
      : src_(std::move(source)), tgt_(std::move(target)), amap_(std::move(arrow_map)) {
    const FinCategory &C = *src_, &D = *tgt_;
    if (amap_.size() != C.arrow_count()) throw InputError("functor arrow map has wrong length");
    for (auto g : amap_)
      if (g >= D.arrow_count()) throw InputError("functor arrow map points outside target");
    std::vector<Violation> bad;
    omap_.resize(C.object_count());
    for (std::size_t a = 0; a < C.object_count(); ++a) {
      std::size_t img = amap_[C.identity(a)];
      if (!D.is_identity(img)) bad.push_back({"IdentityNotPreserved", C.object_name(a)});
      omap_[a] = D.dom(img);
    }
    if (bad.empty()) {
      for (std::size_t f = 0; f < C.arrow_count(); ++f)
        if (D.dom(amap_[f]) != omap_[C.dom(f)] || D.cod(amap_[f]) != omap_[C.cod(f)])
          bad.push_back({"EndpointMismatch", C.arrow_name(f)});
    }
    if (bad.empty()) {
      for (std::size_t g = 0; g < C.arrow_count(); ++g)
        for (std::size_t f : C.arrows_into(C.dom(g)))
          if (amap_[C.compose(g, f)] != D.compose(amap_[g], amap_[f]))
            bad.push_back({"CompositionNotPreserved", C.arrow_name(g) + " ∘ " + C.arrow_name(f)});
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
  }

  static FinFunctor identity(const CatPtr &c) {
    std::vector<std::size_t> m(c->arrow_count());
    for (std::size_t f = 0; f < m.size(); ++f) m[f] = f;
    return FinFunctor(c, c, m);
  }

  const CatPtr &source() const { return src_; }
  const CatPtr &target() const { return tgt_; }
  std::size_t on_arrow(std::size_t f) const { return amap_.at(f); }
  std::size_t on_object(std::size_t a) const { return omap_.at(a); }
  const std::vector<std::size_t> &arrow_map() const { return amap_; }
  const std::vector<std::size_t> &object_map() const { return omap_; }

  /// Equality is arrow-map equality (plus matching endpoints).
  friend bool operator==(const FinFunctor &a, const FinFunctor &b) {
    return *a.src_ == *b.src_ && *a.tgt_ == *b.tgt_ && a.amap_ == b.amap_;
  }

  bool is_faithful() const {
    const FinCategory &C = *src_;
    for (std::size_t a = 0; a < C.object_count(); ++a)
      for (std::size_t b = 0; b < C.object_count(); ++b) {
        std::vector<std::size_t> seen;
        for (auto f : C.hom(a, b)) seen.push_back(amap_[f]);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
      }
    return true;
  }
  bool is_full() const {
    const FinCategory &C = *src_, &D = *tgt_;
    for (std::size_t a = 0; a < C.object_count(); ++a)
      for (std::size_t b = 0; b < C.object_count(); ++b)
        for (auto g : D.hom(omap_[a], omap_[b])) {
          bool hit = false;
          for (auto f : C.hom(a, b)) hit = hit || amap_[f] == g;
          if (!hit) return false;
        }
    return true;
  }

private:
  CatPtr src_, tgt_;
  std::vector<std::size_t> amap_, omap_;
};

/// G ∘ F.
inline FinFunctor compose(const FinFunctor &G, const FinFunctor &F) {
  if (!(*G.source() == *F.target())) throw InputError("compose: functor endpoints do not match");
  std::vector<std::size_t> m(F.source()->arrow_count());
  for (std::size_t f = 0; f < m.size(); ++f) m[f] = G.on_arrow(F.on_arrow(f));
  return FinFunctor(F.source(), G.target(), m);
}

/// Natural transformation η: F ⇒ G with one component per source object.
class FinNatTrans {
public:
  FinNatTrans(FinFunctor F, FinFunctor G, std::vector<std::size_t> components)
      : F_(std::move(F)), G_(std::move(G)), comp_(std::move(components)) {
    if (!(*F_.source() == *G_.source()) || !(*F_.target() == *G_.target()))
      throw InputError("natural transformation between non-parallel functors");
    const FinCategory &C = *F_.source(), &D = *F_.target();
    if (comp_.size() != C.object_count()) throw InputError("one component per object required");
    std::vector<Violation> bad;
    for (std::size_t a = 0; a < C.object_count(); ++a)
      if (comp_[a] >= D.arrow_count() || D.dom(comp_[a]) != F_.on_object(a) || D.cod(comp_[a]) != G_.on_object(a))
        bad.push_back({"EndpointMismatch", "component at " + C.object_name(a)});
    if (bad.empty())
      for (std::size_t f = 0; f < C.arrow_count(); ++f) {
        std::size_t a = C.dom(f), b = C.cod(f);
        if (D.compose(G_.on_arrow(f), comp_[a]) != D.compose(comp_[b], F_.on_arrow(f)))
          bad.push_back({"NotNatural", C.arrow_name(f)});
      }
    if (!bad.empty()) throw ValidationError(std::move(bad));
  }

  static FinNatTrans identity(const FinFunctor &F) {
    std::vector<std::size_t> c(F.source()->object_count());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = F.target()->identity(F.on_object(a));
    return FinNatTrans(F, F, c);
  }

  const FinFunctor &source() const { return F_; }
  const FinFunctor &target() const { return G_; }
  std::size_t component(std::size_t a) const { return comp_.at(a); }
  const std::vector<std::size_t> &components() const { return comp_; }

  friend bool operator==(const FinNatTrans &a, const FinNatTrans &b) {
    return a.F_ == b.F_ && a.G_ == b.G_ && a.comp_ == b.comp_;
  }

private:
  FinFunctor F_, G_;
  std::vector<std::size_t> comp_;
};

/// θ · η (vertical): F ⇒ G ⇒ H.
inline FinNatTrans vertical(const FinNatTrans &theta, const FinNatTrans &eta) {
  if (!(theta.source() == eta.target())) throw InputError("vertical composition: middle functors differ");
  const FinCategory &D = *eta.source().target();
  std::vector<std::size_t> c(eta.components().size());
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = D.compose(theta.component(a), eta.component(a));
  return FinNatTrans(eta.source(), theta.target(), c);
}

/// H η : H F ⇒ H G.
inline FinNatTrans whisker_left(const FinFunctor &H, const FinNatTrans &eta) {
  std::vector<std::size_t> c(eta.components().size());
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = H.on_arrow(eta.component(a));
  return FinNatTrans(compose(H, eta.source()), compose(H, eta.target()), c);
}

/// η K : F K ⇒ G K.
inline FinNatTrans whisker_right(const FinNatTrans &eta, const FinFunctor &K) {
  std::vector<std::size_t> c(K.source()->object_count());
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = eta.component(K.on_object(a));
  return FinNatTrans(compose(eta.source(), K), compose(eta.target(), K), c);
}

/// Horizontal composite η′ ∗ η : F′F ⇒ G′G, component G′(η_A) ∘ η′_{F A}.
inline FinNatTrans horizontal(const FinNatTrans &etap, const FinNatTrans &eta) {
  return vertical(whisker_left(etap.target(), eta), whisker_right(etap, eta.source()));
}

/// Every functor C → D, in lexicographic order of arrow maps (source arrow order).
inline std::vector<FinFunctor> enumerate_functors(const CatPtr &C, const CatPtr &D, std::size_t cap = 1'000'000) {
  const FinCategory &c = *C, &d = *D;
  const std::size_t n = c.arrow_count();
  std::vector<std::size_t> amap(n, FinCategory::npos), omap(c.object_count(), FinCategory::npos);
  std::vector<FinFunctor> out;
  // arrows ordered by index; for each arrow the composite checks that become decidable
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      if (out.size() >= cap) throw ResourceCapExceeded("functor enumeration exceeds cap");
      out.emplace_back(C, D, amap);
      return;
    }
    std::size_t a = c.dom(k), b = c.cod(k);
    std::vector<std::size_t> candidates;
    if (c.is_identity(k)) {
      if (omap[a] != FinCategory::npos) candidates.push_back(d.identity(omap[a]));
      else
        for (std::size_t x = 0; x < d.object_count(); ++x) candidates.push_back(d.identity(x));
    } else {
      for (std::size_t g = 0; g < d.arrow_count(); ++g) {
        if (omap[a] != FinCategory::npos && d.dom(g) != omap[a]) continue;
        if (omap[b] != FinCategory::npos && d.cod(g) != omap[b]) continue;
        if (a == b && d.dom(g) != d.cod(g)) continue;
        candidates.push_back(g);
      }
      std::sort(candidates.begin(), candidates.end());
    }
    for (std::size_t g : candidates) {
      std::size_t oa = omap[a], ob = omap[b];
      omap[a] = d.dom(g);
      omap[b] = d.cod(g);
      amap[k] = g;
      bool ok = true;
      // identity of a or b assigned must agree with the object choice
      if (amap[c.identity(a)] != FinCategory::npos && amap[c.identity(a)] != d.identity(omap[a])) ok = false;
      if (amap[c.identity(b)] != FinCategory::npos && amap[c.identity(b)] != d.identity(omap[b])) ok = false;
      for (std::size_t x = 0; ok && x <= k; ++x)
        for (std::size_t y = 0; ok && y <= k; ++y) {
          if (x != k && y != k) continue;
          if (!c.composable(x, y)) continue;
          std::size_t xy = c.compose(x, y);
          if (xy > k) continue;
          if (d.dom(amap[x]) != d.cod(amap[y]) || d.compose(amap[x], amap[y]) != amap[xy]) ok = false;
        }
      // composites xy = k with x, y already assigned
      for (std::size_t x = 0; ok && x < k; ++x)
        for (std::size_t y = 0; ok && y < k; ++y)
          if (c.composable(x, y) && c.compose(x, y) == k &&
              (d.dom(amap[x]) != d.cod(amap[y]) || d.compose(amap[x], amap[y]) != g))
            ok = false;
      if (ok) rec(k + 1);
      amap[k] = FinCategory::npos;
      omap[a] = oa;
      omap[b] = ob;
    }
  };
  rec(0);
  return out;
}

/// Every natural transformation F ⇒ G.
inline std::vector<FinNatTrans> enumerate_transformations(const FinFunctor &F, const FinFunctor &G) {
  const FinCategory &C = *F.source(), &D = *F.target();
  std::vector<std::size_t> comp(C.object_count());
  std::vector<FinNatTrans> out;
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == C.object_count()) {
      out.emplace_back(F, G, comp);
      return;
    }
    for (std::size_t h : D.hom(F.on_object(a), G.on_object(a))) {
      comp[a] = h;
      bool ok = true;
      for (std::size_t f = 0; ok && f < C.arrow_count(); ++f) {
        std::size_t x = C.dom(f), y = C.cod(f);
        if (x > a || y > a) continue;
        if (x != a && y != a) continue;
        if (D.compose(G.on_arrow(f), comp[x]) != D.compose(comp[y], F.on_arrow(f))) ok = false;
      }
      if (ok) rec(a + 1);
    }
  };
  rec(0);
  return out;
}

/// The functor category B^C with its functors and transformations. Objects are
/// named "F<i>" in enumeration order and arrows "F<i>=>F<j>#<k>".
struct FunctorCategory {
  FinCategory category;
  std::vector<FinFunctor> functors;
  std::vector<FinNatTrans> transformations; // indexed like category arrows
};

inline FunctorCategory functor_category(const CatPtr &C, const CatPtr &B) {
  FunctorCategory fc{FinCategory(), enumerate_functors(C, B), {}};
  const auto &fs = fc.functors;
  FinCategory::Builder b;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    names.push_back("F" + std::to_string(i));
    b.object(names.back());
  }
  std::vector<std::string> anames;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) {
      auto ts = enumerate_transformations(fs[i], fs[j]);
      for (std::size_t k = 0; k < ts.size(); ++k) {
        std::string id = names[i] + "=>" + names[j] + "#" + std::to_string(k);
        if (i == j && ts[k] == FinNatTrans::identity(fs[i])) b.identity(names[i], id);
        else b.arrow(id, names[i], names[j]);
        anames.push_back(id);
        ends.emplace_back(i, j);
        fc.transformations.push_back(ts[k]);
      }
    }
  const auto &tr = fc.transformations;
  for (std::size_t x = 0; x < tr.size(); ++x)
    for (std::size_t y = 0; y < tr.size(); ++y) {
      if (ends[x].first != ends[y].second) continue;
      FinNatTrans v = vertical(tr[x], tr[y]);
      for (std::size_t z = 0; z < tr.size(); ++z)
        if (ends[z].first == ends[y].first && ends[z].second == ends[x].second && tr[z] == v) {
          b.compose(anames[x], anames[y], anames[z]);
          break;
        }
    }
  // arrows were added in (i, j, k) order but identities go through the same list
  fc.category = b.finish();
  std::vector<FinNatTrans> ordered;
  for (std::size_t f = 0; f < fc.category.arrow_count(); ++f) {
    auto it = std::find(anames.begin(), anames.end(), fc.category.arrow_name(f));
    ordered.push_back(tr[static_cast<std::size_t>(it - anames.begin())]);
  }
  fc.transformations = std::move(ordered);
  return fc;
}

} // namespace gw
