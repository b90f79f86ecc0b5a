#pragma once

#include "gw/shcoh/godement.hpp"

namespace gw {

/// H⁰(F′) → H⁰(F) → H⁰(F″) → H¹(F′) → … → H^{nMax+1}(F′) → H^{nMax+1}(F).
struct LongExactSequence {
  std::vector<std::string> labels;
  std::vector<FpAbGroup> groups;
  std::vector<FpMorphism> maps;       // maps[i] : groups[i] → groups[i+1]
  std::vector<FpMorphism> connecting; // δⁿ : Hⁿ(F″) → Hⁿ⁺¹(F′)
  std::vector<bool> exact_at;         // exactness at groups[i]; the last group is not checked

  bool exact() const {
    for (bool e : exact_at)
      if (!e) return false;
    return true;
  }
};

/// Connecting maps by the zig-zag on the flasque Godement resolutions, which
/// form a short exact sequence of complexes. Preimages come from an exact
/// lattice solve, so the choice is deterministic.
inline LongExactSequence long_exact_sequence(const SheafMap &alpha, const SheafMap &beta, std::size_t nMax,
                                             std::size_t cap = element_cap()) {
  check_short_exact(alpha, beta);
  SheafCohomology Hp(alpha.source_ptr(), nMax + 1, GodementKind::Flasque, cap);
  SheafCohomology H(alpha.target_ptr(), nMax + 1, GodementKind::Flasque, cap);
  SheafCohomology Hpp(beta.target_ptr(), nMax + 1, GodementKind::Flasque, cap);
  const auto &Rp = Hp.resolution(), &R = H.resolution(), &Rpp = Hpp.resolution();
  auto ca = godement_chain_map(Rp, R, alpha);
  auto cb = godement_chain_map(R, Rpp, beta);

  LongExactSequence les;
  auto push = [&](const std::string &label, const FpAbGroup &g) {
    les.labels.push_back(label);
    les.groups.push_back(g);
  };
  for (std::size_t n = 0; n <= nMax; ++n) {
    const std::string d = std::to_string(n);
    FpMorphism a = quotient_map(Hp.quotient(n), H.quotient(n), ca.at(n));
    FpMorphism b = quotient_map(H.quotient(n), Hpp.quotient(n), cb.at(n));
    const FiniteQuotient &Q2 = Hpp.quotient(n), &Q1 = Hp.quotient(n + 1);
    IntMatrix dm(Q1.group().generator_count(), Q2.group().generator_count());
    for (std::size_t i = 0; i < Q2.group().generator_count(); ++i) {
      auto y = solve_modulo(cb.at(n), R.term(n).global.numerator(), Rpp.term(n).global.denominator(),
                            Q2.generator_vector(i));
      if (!y) throw Error("connecting map: cocycle does not lift");
      RatVector w = R.differential_matrix(n) * *y;
      auto x = solve_modulo(ca.at(n + 1), Rp.term(n + 1).global.numerator(), R.term(n + 1).global.denominator(), w);
      if (!x) throw Error("connecting map: coboundary not in the image of α");
      IntVector c = Q1.group().lift(Q1.coordinates(*x));
      for (std::size_t r = 0; r < c.size(); ++r) dm(r, i) = c[r];
    }
    FpMorphism delta(Q2.group(), Q1.group(), dm);
    push("H^" + d + "(F')", Hp.group(n));
    push("H^" + d + "(F)", H.group(n));
    push("H^" + d + "(F'')", Hpp.group(n));
    les.maps.push_back(a);
    les.maps.push_back(b);
    les.maps.push_back(delta);
    les.connecting.push_back(delta);
  }
  const std::string top = std::to_string(nMax + 1);
  push("H^" + top + "(F')", Hp.group(nMax + 1));
  push("H^" + top + "(F)", H.group(nMax + 1));
  les.maps.push_back(quotient_map(Hp.quotient(nMax + 1), H.quotient(nMax + 1), ca.at(nMax + 1)));

  les.exact_at.push_back(is_injective(les.maps[0]));
  for (std::size_t i = 1; i + 1 < les.groups.size(); ++i) {
    const FpMorphism &in = les.maps[i - 1], &out = les.maps[i];
    les.exact_at.push_back(compose(out, in).is_zero() && kernel(out).group.order() == image_order(in));
  }
  return les;
}

} // namespace gw
