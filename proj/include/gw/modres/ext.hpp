#pragma once

#include "gw/modres/injective.hpp"

namespace gw {

/// Hom_R(M, N) as the kernel of N^k → N^k ⊕ N^{k·g}: a tuple (y_j) of images of the
/// canonical generators of M must be killed by m_j and commute with the additive
/// generators of R.
struct HomR {
  ModPtr source, target;
  Subobject sub; // inclusion into N^k on generator coordinates

  const FpAbGroup &group() const { return sub.group; }
  /// The R-map encoded by an element of `group()`.
  ModuleMap decode(const FpAbGroup::Element &h) const {
    IntVector y = sub.inclusion.matrix() * sub.group.lift(h);
    const std::size_t k = source->rank(), n = target->rank();
    IntMatrix m(n, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t c = 0; c < n; ++c) m(c, j) = y[j * n + c];
    return ModuleMap(source, target, Mat64::from_int(m, target->additive().m));
  }
};

namespace detail {
inline FpAbGroup power(const FiniteModule &N, std::size_t k) {
  std::vector<FpAbGroup> parts(k, N.additive().fp());
  return direct_sum(parts).group;
}
} // namespace detail

inline HomR hom_R(const ModPtr &M, const ModPtr &N) {
  const std::size_t k = M->rank(), n = N->rank();
  const FiniteRing &R = *M->ring();
  auto gens = R.generators();
  IntMatrix phi(n * k * (1 + gens.size()), n * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < n; ++c) phi(j * n + c, j * n + c) = Int(static_cast<long>(M->additive().m[j]));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const Mat64 &A = M->action_matrix(gens[g]), &B = N->action_matrix(gens[g]);
    const std::size_t off = n * k * (1 + g);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t t = 0; t < k; ++t) phi(off + j * n + c, t * n + c) += Int(static_cast<long>(A(t, j)));
        for (std::size_t d = 0; d < n; ++d) phi(off + j * n + c, j * n + d) -= Int(static_cast<long>(B(c, d)));
      }
  }
  FpMorphism f(detail::power(*N, k), detail::power(*N, k * (1 + gens.size())), phi);
  return {M, N, kernel(f)};
}

/// Hom_R(M, ψ) : Hom_R(M, N) → Hom_R(M, N').
inline FpMorphism hom_induced(const HomR &from, const HomR &to, const ModuleMap &psi) {
  const std::size_t k = from.source->rank(), n = psi.source()->rank(), np = psi.target()->rank();
  IntMatrix blk(np * k, n * k);
  IntMatrix p = psi.matrix().to_int();
  for (std::size_t j = 0; j < k; ++j) blk.set_block(j * np, j * n, p);
  FpMorphism big(from.sub.inclusion.target(), to.sub.inclusion.target(), blk);
  return factor_through(to.sub.inclusion, compose(big, from.sub.inclusion));
}

struct ExtResult {
  InjectiveResolution resolution;
  std::vector<HomR> cochains;        // Hom_R(M, I_k)
  std::vector<FpMorphism> coboundary; // D_k : Hom_R(M, I_k) → Hom_R(M, I_{k+1})
  std::vector<FpAbGroup> groups;      // Ext^0 … Ext^nMax
};

/// Ext^n_R(M, N) for n ≤ nMax from an injective resolution of N.
inline ExtResult ext(const ModPtr &M, const ModPtr &N, std::size_t nMax, ResolutionOptions opt = {}) {
  opt.length = nMax + 1;
  ExtResult r;
  r.resolution = injective_resolution(N, opt);
  for (const auto &I : r.resolution.terms) r.cochains.push_back(hom_R(M, I));
  for (std::size_t k = 0; k + 1 < r.cochains.size(); ++k)
    r.coboundary.push_back(hom_induced(r.cochains[k], r.cochains[k + 1], r.resolution.maps[k + 1]));
  r.groups.push_back(kernel(r.coboundary[0]).group);
  for (std::size_t n = 1; n <= nMax; ++n) r.groups.push_back(homology(r.coboundary[n - 1], r.coboundary[n]).group);
  return r;
}

} // namespace gw
