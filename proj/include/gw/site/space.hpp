#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gw/site/sieve.hpp"

namespace gw {

/// A finite topological space on at most 64 points; opens are bitmasks,
/// sorted by size and then by mask.
class FiniteSpace {
public:
  using Mask = std::uint64_t;

  FiniteSpace() = default;

  /// Checks ∅, X ∈ opens and closure under binary ∪ and ∩.
  static FiniteSpace validate(std::vector<std::string> points, const std::vector<std::vector<std::string>> &opens) {
    FiniteSpace X = bare(std::move(points), opens);
    std::vector<Violation> bad;
    std::set<Mask> os(X.opens_.begin(), X.opens_.end());
    if (!os.count(0)) bad.push_back({"MissingEmptyOpen", "{}"});
    if (!os.count(X.whole())) bad.push_back({"MissingWholeSpace", X.open_name(X.whole())});
    for (Mask u : os)
      for (Mask v : os) {
        if (u >= v) continue;
        if (!os.count(u | v)) bad.push_back({"NotClosedUnderUnion", X.open_name(u) + " ∪ " + X.open_name(v)});
        if (!os.count(u & v)) bad.push_back({"NotClosedUnderIntersection", X.open_name(u) + " ∩ " + X.open_name(v)});
      }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return X;
  }

  /// The topology generated by `subbasis`.
  static FiniteSpace generate(std::vector<std::string> points, const std::vector<std::vector<std::string>> &subbasis) {
    FiniteSpace X = bare(std::move(points), subbasis);
    std::set<Mask> os(X.opens_.begin(), X.opens_.end());
    os.insert(0);
    os.insert(X.whole());
    for (bool grew = true; grew;) {
      grew = false;
      std::vector<Mask> cur(os.begin(), os.end());
      for (Mask u : cur)
        for (Mask v : cur) grew |= os.insert(u | v).second | os.insert(u & v).second;
    }
    X.set_opens({os.begin(), os.end()});
    return X;
  }

  std::size_t point_count() const { return points_.size(); }
  const std::string &point_name(std::size_t p) const { return points_.at(p); }
  const std::vector<std::string> &points() const { return points_; }
  std::size_t point(const std::string &name) const {
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (points_[p] == name) return p;
    throw InputError("unknown point '" + name + "'");
  }
  Mask whole() const { return points_.size() == 64 ? ~Mask(0) : (Mask(1) << points_.size()) - 1; }

  const std::vector<Mask> &opens() const { return opens_; }
  bool is_open(Mask u) const { return index_.count(u) != 0; }
  std::size_t open_index(Mask u) const {
    auto it = index_.find(u);
    if (it == index_.end()) throw InputError("not an open set: " + open_name(u));
    return it->second;
  }

  std::string open_name(Mask u) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (u >> p & 1) {
        s += (first ? "" : ",") + points_[p];
        first = false;
      }
    return s + "}";
  }
  std::vector<std::string> open_points(Mask u) const {
    std::vector<std::string> out;
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (u >> p & 1) out.push_back(points_[p]);
    return out;
  }

  /// U_p: the smallest open containing p.
  Mask minimal_open(std::size_t p) const {
    Mask m = whole();
    for (Mask u : opens_)
      if (u >> p & 1) m &= u;
    return m;
  }

  /// Specialization preorder: p ≤ q iff U_p ⊆ U_q.
  bool leq(std::size_t p, std::size_t q) const { return (minimal_open(p) & ~minimal_open(q)) == 0; }

  friend bool operator==(const FiniteSpace &a, const FiniteSpace &b) {
    return a.points_ == b.points_ && a.opens_ == b.opens_;
  }

private:
  static FiniteSpace bare(std::vector<std::string> points, const std::vector<std::vector<std::string>> &sets) {
    FiniteSpace X;
    if (points.size() > 64) throw InputError("finite spaces are limited to 64 points");
    X.points_ = std::move(points);
    std::set<std::string> seen;
    for (const auto &p : X.points_)
      if (!seen.insert(p).second) throw InputError("duplicate point '" + p + "'");
    std::set<Mask> os;
    for (const auto &s : sets) {
      Mask m = 0;
      for (const auto &p : s) m |= Mask(1) << X.point(p);
      os.insert(m);
    }
    X.set_opens({os.begin(), os.end()});
    return X;
  }

  void set_opens(std::vector<Mask> os) {
    std::sort(os.begin(), os.end(), [](Mask a, Mask b) {
      return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
    });
    opens_ = std::move(os);
    index_.clear();
    for (std::size_t i = 0; i < opens_.size(); ++i) index_[opens_[i]] = i;
  }

  std::vector<std::string> points_;
  std::vector<Mask> opens_;
  std::map<Mask, std::size_t> index_;
};

/// Simplices of the order complex by dimension: counts[k] = number of chains p0 < … < pk
/// in the strict specialization order.
inline std::vector<std::size_t> simplex_counts(const FiniteSpace &X) {
  const std::size_t n = X.point_count();
  auto lt = [&](std::size_t p, std::size_t q) { return X.leq(p, q) && !X.leq(q, p); };
  // ending[p][k]: chains of length k + 1 with top p
  std::vector<std::vector<std::size_t>> ending(n, std::vector<std::size_t>(n, 0));
  std::vector<std::size_t> order(n);
  for (std::size_t p = 0; p < n; ++p) order[p] = p;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::popcount(X.minimal_open(a)) < std::popcount(X.minimal_open(b)); });
  std::vector<std::size_t> counts;
  for (std::size_t q : order) {
    ending[q][0] = 1;
    for (std::size_t p = 0; p < n; ++p)
      if (lt(p, q))
        for (std::size_t k = 0; k + 1 < n; ++k) ending[q][k + 1] += ending[p][k];
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t k = 0; k < n; ++k)
      if (ending[p][k]) {
        if (counts.size() <= k) counts.resize(k + 1, 0);
        counts[k] += ending[p][k];
      }
  return counts;
}

/// O(X) with the open-cover topology; object i is X.opens()[i].
struct SpaceSite {
  FiniteSpace space;
  CatPtr category;
  Topology topology;
};

inline SpaceSite site_from_finite_space(const FiniteSpace &X) {
  std::vector<std::string> names;
  for (auto u : X.opens()) names.push_back(X.open_name(u));
  const auto &os = X.opens();
  CatPtr C = share(poset_category(names, [&](std::size_t i, std::size_t j) { return (os[i] & ~os[j]) == 0; }));
  std::vector<std::vector<Sieve>> cv(os.size());
  for (std::size_t u = 0; u < os.size(); ++u)
    for (const auto &s : all_sieves(*C, u)) {
      FiniteSpace::Mask m = 0;
      for (std::size_t f : s.arrows) m |= os[C->dom(f)];
      if (m == os[u]) cv[u].push_back(s);
    }
  return {X, C, Topology::validate(C, cv)};
}

} // namespace gw
