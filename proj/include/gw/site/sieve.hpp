#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gw/psh/presheaf.hpp"

namespace gw {

/// A set of arrows into `at`, kept sorted. Sieves are closed under precomposition.
struct Sieve {
  std::size_t at = 0;
  std::vector<std::size_t> arrows;

  bool contains(std::size_t f) const { return std::binary_search(arrows.begin(), arrows.end(), f); }
  auto operator<=>(const Sieve &) const = default;
};

inline std::string sieve_name(const FinCategory &C, const Sieve &S) {
  std::string s = "{";
  for (std::size_t i = 0; i < S.arrows.size(); ++i) s += (i ? "," : "") + C.arrow_name(S.arrows[i]);
  return s + "}@" + C.object_name(S.at);
}

inline bool is_sieve(const FinCategory &C, const Sieve &S) {
  for (std::size_t f : S.arrows) {
    if (C.cod(f) != S.at) return false;
    for (std::size_t g : C.arrows_into(C.dom(f)))
      if (!S.contains(C.compose(f, g))) return false;
  }
  return std::is_sorted(S.arrows.begin(), S.arrows.end());
}

/// Smallest sieve on `at` containing `family`.
inline Sieve sieve_generate(const FinCategory &C, std::size_t at, const std::vector<std::size_t> &family) {
  std::set<std::size_t> out;
  for (std::size_t f : family) {
    if (C.cod(f) != at)
      throw ValidationError("MixedCodomains", C.arrow_name(f) + " does not end at " + C.object_name(at));
    for (std::size_t g : C.arrows_into(C.dom(f))) out.insert(C.compose(f, g));
  }
  return {at, {out.begin(), out.end()}};
}

inline Sieve maximal_sieve(const FinCategory &C, std::size_t at) {
  std::vector<std::size_t> a = C.arrows_into(at);
  std::sort(a.begin(), a.end());
  return {at, a};
}

/// h^*S = {g : h∘g ∈ S}, a sieve on dom h.
inline Sieve pullback(const FinCategory &C, const Sieve &S, std::size_t h) {
  if (C.cod(h) != S.at) throw InputError("pullback along an arrow not into the sieve's object");
  Sieve out{C.dom(h), {}};
  for (std::size_t g : C.arrows_into(C.dom(h)))
    if (S.contains(C.compose(h, g))) out.arrows.push_back(g);
  std::sort(out.arrows.begin(), out.arrows.end());
  return out;
}

inline Sieve intersect(const Sieve &a, const Sieve &b) {
  Sieve out{a.at, {}};
  std::set_intersection(a.arrows.begin(), a.arrows.end(), b.arrows.begin(), b.arrows.end(),
                        std::back_inserter(out.arrows));
  return out;
}

/// Every sieve on `at`, as unions of principal sieves.
inline std::vector<Sieve> all_sieves(const FinCategory &C, std::size_t at, std::size_t cap = 1'000'000) {
  std::set<std::vector<std::size_t>> found{{}};
  for (std::size_t f : C.arrows_into(at)) {
    Sieve p = sieve_generate(C, at, {f});
    std::vector<std::vector<std::size_t>> add;
    for (const auto &s : found) {
      std::vector<std::size_t> u;
      std::set_union(s.begin(), s.end(), p.arrows.begin(), p.arrows.end(), std::back_inserter(u));
      add.push_back(std::move(u));
    }
    found.insert(add.begin(), add.end());
    if (found.size() > cap) throw ResourceCapExceeded("sieve enumeration exceeds cap");
  }
  std::vector<Sieve> out;
  for (const auto &s : found) out.push_back({at, s});
  return out;
}

/// The sieve as a subpresheaf of R_at; elements are named by arrow id.
inline Presheaf sieve_presheaf(const CatPtr &C, const Sieve &S) {
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < S.arrows.size(); ++i) {
    pos[S.arrows[i]] = i;
    names.push_back(C->arrow_name(S.arrows[i]));
    over.push_back(C->dom(S.arrows[i]));
  }
  return Presheaf::from_tables(C, names, over,
                               [&](std::size_t x, std::size_t g) { return pos.at(C->compose(S.arrows[x], g)); });
}

/// A Grothendieck topology: covering sieves per object.
class Topology {
public:
  Topology() = default;

  /// Checks that every entry is a sieve, then maximality, stability and transitivity.
  static Topology validate(CatPtr C, std::vector<std::vector<Sieve>> covers) {
    Topology t;
    t.cat_ = std::move(C);
    const FinCategory &c = *t.cat_;
    if (covers.size() != c.object_count()) throw InputError("one cover list per object required");
    std::vector<Violation> bad;
    t.covers_.resize(c.object_count());
    for (std::size_t a = 0; a < covers.size(); ++a)
      for (auto &s : covers[a]) {
        std::sort(s.arrows.begin(), s.arrows.end());
        s.arrows.erase(std::unique(s.arrows.begin(), s.arrows.end()), s.arrows.end());
        if (s.at != a || !is_sieve(c, s)) bad.push_back({"NotASieve", sieve_name(c, s)});
        else t.covers_[a].insert(s);
      }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    for (std::size_t a = 0; a < c.object_count(); ++a)
      if (!t.covers_[a].count(maximal_sieve(c, a))) bad.push_back({"NoMaximalSieve", c.object_name(a)});
    for (std::size_t a = 0; a < c.object_count(); ++a)
      for (const auto &s : t.covers_[a])
        for (std::size_t h : c.arrows_into(a))
          if (!t.is_cover(pullback(c, s, h)))
            bad.push_back({"UnstablePullback", sieve_name(c, s) + " along " + c.arrow_name(h)});
    if (bad.empty())
      for (std::size_t a = 0; a < c.object_count(); ++a) {
        auto sieves = all_sieves(c, a);
        for (const auto &s : t.covers_[a])
          for (const auto &r : sieves) {
            if (t.is_cover(r)) continue;
            bool local = true;
            for (std::size_t h : s.arrows) local = local && t.is_cover(pullback(c, r, h));
            if (local)
              bad.push_back({"TransitivityFailure", sieve_name(c, r) + " is locally covering over " + sieve_name(c, s)});
          }
      }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return t;
  }

  const CatPtr &category() const { return cat_; }
  bool is_cover(const Sieve &s) const { return covers_.at(s.at).count(s) != 0; }
  const std::set<Sieve> &covers(std::size_t a) const { return covers_.at(a); }

  /// Intersection of all covers of `a`; itself a cover since J is finite and closed under meets.
  Sieve minimal_cover(std::size_t a) const {
    Sieve m = maximal_sieve(*cat_, a);
    for (const auto &s : covers_.at(a)) m = intersect(m, s);
    return m;
  }

  friend bool operator==(const Topology &a, const Topology &b) {
    return *a.cat_ == *b.cat_ && a.covers_ == b.covers_;
  }

private:
  CatPtr cat_;
  std::vector<std::set<Sieve>> covers_;
};

/// Only maximal sieves cover.
inline Topology trivial_topology(const CatPtr &C) {
  std::vector<std::vector<Sieve>> cv;
  for (std::size_t a = 0; a < C->object_count(); ++a) cv.push_back({maximal_sieve(*C, a)});
  return Topology::validate(C, cv);
}

/// Covers given as arrow families; each family is replaced by the sieve it generates.
inline Topology topology_from_families(const CatPtr &C, const std::vector<std::vector<std::vector<std::size_t>>> &fams) {
  if (fams.size() != C->object_count()) throw InputError("one family list per object required");
  std::vector<std::vector<Sieve>> cv(fams.size());
  for (std::size_t a = 0; a < fams.size(); ++a)
    for (const auto &f : fams[a]) cv[a].push_back(sieve_generate(*C, a, f));
  return Topology::validate(C, cv);
}

} // namespace gw
