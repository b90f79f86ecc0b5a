#pragma once

#include <bit>

#include "gw/shcoh/godement.hpp"

namespace gw {

namespace detail {
/// F(V) → F(W) for W ⊆ V.
inline FpMorphism section_restriction(const AbelianSheaf &F, FiniteSpace::Mask V, FiniteSpace::Mask W) {
  Subobject a = F.sections(V), b = F.sections(W);
  auto pv = F.points_of(V), pw = F.points_of(W);
  std::size_t rv = 0, rw = 0;
  std::vector<std::size_t> off(F.point_count(), 0);
  for (std::size_t p : pv) {
    off[p] = rv;
    rv += F.stalk(p).rank();
  }
  for (std::size_t p : pw) rw += F.stalk(p).rank();
  IntMatrix proj(rw, rv);
  std::size_t row = 0;
  for (std::size_t p : pw)
    for (std::size_t i = 0; i < F.stalk(p).rank(); ++i) proj(row++, off[p] + i) = 1;
  return factor_through(b.inclusion, compose(FpMorphism(a.inclusion.target(), b.inclusion.target(), proj), a.inclusion));
}
} // namespace detail

/// Alternating Čech cohomology of F for a cover by opens.
inline CohomologyReport cech_cohomology(const AbelianSheaf &F, const std::vector<FiniteSpace::Mask> &cover,
                                        std::size_t nMax) {
  const FiniteSpace &X = F.space();
  FiniteSpace::Mask all = 0;
  for (auto u : cover) {
    if (!X.is_open(u)) throw InputError("cover member is not open: " + X.open_name(u));
    all |= u;
  }
  if (all != X.whole()) throw ValidationError("NotACover", "union is " + X.open_name(all));
  if (cover.size() > 20) throw ResourceCapExceeded("cover too large for the alternating complex");
  const std::size_t m = cover.size();
  // simplices by size: increasing index tuples encoded as bitmasks over the cover
  std::vector<std::vector<std::uint32_t>> simp(nMax + 3);
  for (std::uint32_t s = 1; s < (std::uint32_t(1) << m); ++s) {
    std::size_t k = std::size_t(std::popcount(s));
    if (k <= nMax + 2) simp[k - 1].push_back(s);
  }
  auto inter = [&](std::uint32_t s) {
    FiniteSpace::Mask u = X.whole();
    for (std::size_t i = 0; i < m; ++i)
      if (s >> i & 1) u &= cover[i];
    return u;
  };
  std::vector<FpAbGroup> C;
  std::vector<std::vector<std::size_t>> off(nMax + 3);
  for (std::size_t n = 0; n < nMax + 3; ++n) {
    std::vector<FpAbGroup> parts;
    std::size_t o = 0;
    for (auto s : simp[n]) {
      parts.push_back(F.sections(inter(s)).group);
      off[n].push_back(o);
      o += parts.back().generator_count();
    }
    C.push_back(direct_sum(parts).group);
  }
  std::map<std::pair<FiniteSpace::Mask, FiniteSpace::Mask>, IntMatrix> cache;
  auto restr = [&](FiniteSpace::Mask V, FiniteSpace::Mask W) -> const IntMatrix & {
    auto key = std::make_pair(V, W);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, detail::section_restriction(F, V, W).matrix()).first;
    return it->second;
  };
  std::vector<FpMorphism> d;
  for (std::size_t n = 0; n + 1 < nMax + 3; ++n) {
    IntMatrix m(C[n + 1].generator_count(), C[n].generator_count());
    for (std::size_t b = 0; b < simp[n + 1].size(); ++b) {
      std::uint32_t s = simp[n + 1][b];
      int sign = 1;
      for (std::size_t i = 0; i < cover.size(); ++i) {
        if (!(s >> i & 1)) continue;
        std::uint32_t face = s & ~(std::uint32_t(1) << i);
        std::size_t a = std::size_t(std::find(simp[n].begin(), simp[n].end(), face) - simp[n].begin());
        IntMatrix r = restr(inter(face), inter(s));
        for (std::size_t x = 0; x < r.rows(); ++x)
          for (std::size_t y = 0; y < r.cols(); ++y) m(off[n + 1][b] + x, off[n][a] + y) += Int(sign) * r(x, y);
        sign = -sign;
      }
    }
    d.emplace_back(C[n], C[n + 1], m);
  }
  CohomologyReport rep;
  rep.degrees.push_back(FpAbGroup::from_factors(kernel(d[0]).group.invariant_factors()));
  for (std::size_t n = 1; n <= nMax; ++n)
    rep.degrees.push_back(FpAbGroup::from_factors(homology(d[n - 1], d[n]).group.invariant_factors()));
  return rep;
}

} // namespace gw
