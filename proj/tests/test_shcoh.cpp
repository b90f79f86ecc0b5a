#include <gtest/gtest.h>

#include "gw/shcoh.hpp"
#include "spaces.hpp"
#include "support.hpp"

using namespace gw;
using namespace gwtest;

namespace {

// Simplicial cohomology of the order complex of the specialization order,
// with coefficients in Z/ℓ (ℓ prime), by Gaussian elimination mod ℓ.
std::size_t rank_mod(std::vector<std::vector<long>> m, long l) {
  std::size_t r = 0, rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] % l == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    long inv = 1;
    while ((m[r][c] % l + l) % l * inv % l != 1) ++inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      long f = ((m[i][c] % l + l) % l) * inv % l;
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % l + l) % l;
    }
    ++r;
  }
  return r;
}

std::vector<std::size_t> simplicial_betti(const FiniteSpace &X, long l, std::size_t nMax) {
  const std::size_t n = X.point_count();
  auto lt = [&](std::size_t p, std::size_t q) { return p != q && X.leq(p, q); };
  std::vector<std::vector<std::vector<std::size_t>>> chains(nMax + 2);
  for (std::size_t p = 0; p < n; ++p) chains[0].push_back({p});
  for (std::size_t k = 1; k < nMax + 2; ++k)
    for (const auto &c : chains[k - 1])
      for (std::size_t q = 0; q < n; ++q)
        if (lt(c.back(), q)) {
          auto d = c;
          d.push_back(q);
          chains[k].push_back(d);
        }
  auto coboundary = [&](std::size_t k) {
    std::vector<std::vector<long>> m(chains[k + 1].size(), std::vector<long>(chains[k].size(), 0));
    for (std::size_t i = 0; i < chains[k + 1].size(); ++i)
      for (std::size_t f = 0; f < chains[k + 1][i].size(); ++f) {
        auto face = chains[k + 1][i];
        face.erase(face.begin() + long(f));
        std::size_t j = std::size_t(std::find(chains[k].begin(), chains[k].end(), face) - chains[k].begin());
        m[i][j] += f % 2 ? -1 : 1;
      }
    return m;
  };
  std::vector<std::size_t> ranks;
  for (std::size_t k = 0; k + 1 < nMax + 2; ++k) ranks.push_back(rank_mod(coboundary(k), l));
  std::vector<std::size_t> betti;
  for (std::size_t k = 0; k <= nMax; ++k)
    betti.push_back(chains[k].size() - ranks[k] - (k ? ranks[k - 1] : 0));
  return betti;
}

std::size_t exponent_of(const FpAbGroup &g, long l) {
  std::size_t e = 0;
  for (const auto &f : g.invariant_factors()) {
    EXPECT_EQ(f, l);
    ++e;
  }
  return e;
}

FiniteSpace chain_space(std::size_t n) {
  std::vector<std::string> pts;
  std::vector<std::vector<std::string>> sub;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back("x" + std::to_string(i));
    sub.push_back(pts);
  }
  return FiniteSpace::generate(pts, sub);
}

// Random F2-sheaf on the pseudo-circle: the specialization order has height one,
// so any restriction matrices are functorial.
SheafPtr random_circle_sheaf(std::mt19937_64 &g) {
  FiniteSpace X = pseudo_circle();
  std::vector<CyclicProduct> st;
  for (std::size_t p = 0; p < 4; ++p) st.emplace_back(std::vector<std::int64_t>(std::size_t(uniform(g, 0, 2)), 2));
  std::vector<AbelianSheaf::Restriction> rs;
  for (std::size_t q : {2u, 3u})
    for (std::size_t p : {0u, 1u}) {
      Mat64 m(st[p].rank(), st[q].rank());
      for (auto &v : m.a) v = uniform(g, 0, 1);
      rs.push_back({q, p, m});
    }
  return share(AbelianSheaf::make(X, st, rs));
}

SheafPtr constant(const FiniteSpace &X, std::vector<std::int64_t> A) { return share(constant_sheaf(X, A)); }

SheafMap scalar_map(const SheafPtr &F, const SheafPtr &G, const std::vector<std::vector<std::int64_t>> &m) {
  std::vector<Mat64> ms;
  for (std::size_t p = 0; p < F->point_count(); ++p) {
    Mat64 a(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[i].size(); ++j) a(i, j) = m[i][j];
    ms.push_back(a);
  }
  return SheafMap(F, G, ms);
}

} // namespace

TEST(AbelianSheaf, RestrictionChecks) {
  FiniteSpace X = chain_space(3); // U_x0 ⊂ U_x1 ⊂ U_x2
  CyclicProduct z4({4});
  Mat64 one = Mat64::identity(1), two(1, 1);
  two(0, 0) = 2;
  EXPECT_NO_THROW(AbelianSheaf::make(X, {z4, z4, z4}, {{2, 1, one}, {1, 0, one}}));
  try {
    AbelianSheaf::make(X, {z4, z4, z4}, {{2, 1, one}, {1, 0, one}, {2, 0, two}});
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_TRUE(e.has("NotFunctorial"));
  }
  try {
    AbelianSheaf::make(X, {z4, z4, z4}, {{0, 2, one}});
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_TRUE(e.has("NotASpecialization"));
  }
  try {
    AbelianSheaf::make(X, {z4, z4, z4}, {{2, 1, one}});
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_TRUE(e.has("MissingRestriction"));
  }
  // Z/2 → Z/4 by 1 ↦ 1 is not well defined
  EXPECT_THROW(AbelianSheaf::make(X, {z4, CyclicProduct({2}), z4}, {{2, 1, one}, {1, 0, one}}), ValidationError);
}

TEST(AbelianSheaf, UnderlyingPresheafIsASheaf) {
  for (const auto &X : {pseudo_circle(), sierpinski(), discrete_space(2), chain_space(3)}) {
    SpaceSite site = site_from_finite_space(X);
    for (const auto &F : {constant_sheaf(X, {2}), skyscraper(X, 0, {3}), zero_sheaf(X)}) {
      PshPtr P = share(F.to_presheaf(site));
      EXPECT_TRUE(is_sheaf(P, site.topology).sheaf);
    }
  }
  auto g = rng(11);
  SpaceSite site = site_from_finite_space(pseudo_circle());
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(is_sheaf(share(random_circle_sheaf(g)->to_presheaf(site)), site.topology).sheaf);
}

TEST(GlobalSections, Examples) {
  EXPECT_EQ(constant_sheaf(pseudo_circle(), {3}).global_sections().describe(), "Z/3");
  EXPECT_TRUE(zero_sheaf(pseudo_circle()).global_sections().is_trivial());
  EXPECT_EQ(constant_sheaf(discrete_space(2), {2}).global_sections().describe(), "Z/2 ⊕ Z/2");
  // sections of a skyscraper at the closed point c
  FiniteSpace X = pseudo_circle();
  EXPECT_EQ(skyscraper(X, X.point("c"), {2}).global_sections().describe(), "Z/2");
}

TEST(GlobalSections, Functorial) {
  FiniteSpace X = pseudo_circle();
  SheafPtr A = constant(X, {2}), B = constant(X, {4});
  SheafMap f = scalar_map(A, B, {{2}}), g = scalar_map(B, A, {{1}});
  EXPECT_TRUE(compose(g, f).on_global_sections().same_map(compose(g.on_global_sections(), f.on_global_sections())));
  EXPECT_TRUE(SheafMap::identity(A).on_global_sections().same_map(FpMorphism::identity(A->global_sections())));
}

TEST(Godement, EmbeddingExamples) {
  FiniteSpace X = pseudo_circle();
  std::size_t c = X.point("c");
  // skyscraper at the closed point c: only G⁰_c is nonzero, and it is the hull
  SheafPtr S = share(skyscraper(X, c, {2}));
  GodementResolution R(S, 1);
  const GodementTerm &G = R.term(0);
  for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(G.stalk[q].ambient_dim() > 0, q == c);
  EXPECT_EQ(G.stalk[c].type().describe(), "(Q/Z)^2");
  EXPECT_TRUE(R.embedding_monic());
  // F = 0
  EXPECT_EQ(godement_embedding(share(zero_sheaf(X))).global.ambient_dim(), 0u);
  // constant Z/2: four stalks, each hull (Q/Z)²
  GodementTerm T = godement_embedding(constant(X, {2}));
  EXPECT_EQ(T.global.type().describe(), "(Q/Z)^8");
  EXPECT_TRUE(T.divisible());
}

TEST(Godement, ResolutionIsAComplex) {
  for (const auto &X : {pseudo_circle(), chain_space(3)}) {
    GodementResolution R(constant(X, {2}), 3);
    EXPECT_TRUE(R.squares_to_zero());
    EXPECT_TRUE(R.embedding_monic());
    for (std::size_t k = 0; k < 3; ++k) EXPECT_TRUE(R.term(k).divisible());
  }
}

TEST(Cohomology, PseudoCircle) {
  CohomologyReport r = sheaf_cohomology(constant(pseudo_circle(), {3}), 2);
  EXPECT_EQ(r.text(), "H^0 = Z/3\nH^1 = Z/3\nH^2 = 0\n");
}

TEST(Cohomology, PseudoSphere) {
  CohomologyReport r = sheaf_cohomology(constant(pseudo_sphere(), {2}), 2);
  EXPECT_EQ(r.degrees[0].describe(), "Z/2");
  EXPECT_TRUE(r.degrees[1].is_trivial());
  EXPECT_EQ(r.degrees[2].describe(), "Z/2");
}

TEST(Cohomology, MatchesSimplicialOracle) {
  std::vector<FiniteSpace> spaces{pseudo_circle(), sierpinski(), discrete_space(2), chain_space(3), indiscrete_space(2)};
  for (const auto &X : spaces)
    for (long l : {2L, 3L}) {
      auto betti = simplicial_betti(X, l, 2);
      for (auto kind : {GodementKind::Injective, GodementKind::Flasque}) {
        CohomologyReport r = sheaf_cohomology(constant(X, {l}), 2, kind);
        for (std::size_t n = 0; n <= 2; ++n) EXPECT_EQ(exponent_of(r.degrees[n], l), betti[n]) << n;
      }
    }
  auto betti = simplicial_betti(pseudo_sphere(), 3, 2);
  CohomologyReport r = sheaf_cohomology(constant(pseudo_sphere(), {3}), 2, GodementKind::Flasque);
  for (std::size_t n = 0; n <= 2; ++n) EXPECT_EQ(exponent_of(r.degrees[n], 3), betti[n]);
}

TEST(Cohomology, DegreeZeroIsGlobalSections) {
  auto g = rng(3);
  for (int i = 0; i < 6; ++i) {
    SheafPtr F = random_circle_sheaf(g);
    EXPECT_TRUE(sheaf_cohomology(F, 0).degrees[0].isomorphic_to(F->global_sections()));
  }
  FiniteSpace X = pseudo_sphere();
  SheafPtr S = share(skyscraper(X, X.point("c"), {2, 4}));
  EXPECT_TRUE(sheaf_cohomology(S, 0).degrees[0].isomorphic_to(S->global_sections()));
}

TEST(Cohomology, GodementTermsAreAcyclic) {
  auto g = rng(5);
  for (int i = 0; i < 4; ++i) {
    FlasqueEmbedding E = flasque_godement(random_circle_sheaf(g));
    CohomologyReport r = sheaf_cohomology(E.sheaf, 2);
    EXPECT_TRUE(r.degrees[1].is_trivial());
    EXPECT_TRUE(r.degrees[2].is_trivial());
  }
}

TEST(Cohomology, ResolutionsAgree) {
  auto g = rng(9);
  for (int i = 0; i < 6; ++i) {
    SheafPtr F = random_circle_sheaf(g);
    EXPECT_TRUE(sheaf_cohomology(F, 2, GodementKind::Injective)
                    .isomorphic_to(sheaf_cohomology(F, 2, GodementKind::Flasque)));
  }
}

TEST(Cech, Examples) {
  FiniteSpace X = pseudo_circle();
  SheafPtr F = constant(X, {3});
  CohomologyReport r = cech_cohomology(*F, {X.minimal_open(X.point("c")), X.minimal_open(X.point("d"))}, 1);
  EXPECT_EQ(r.text("Ȟ"), "Ȟ^0 = Z/3\nȞ^1 = Z/3\n");
  CohomologyReport one = cech_cohomology(*F, {X.whole()}, 2);
  EXPECT_TRUE(one.degrees[0].isomorphic_to(F->global_sections()));
  EXPECT_TRUE(one.degrees[1].is_trivial());
  FiniteSpace D = discrete_space(2);
  CohomologyReport d = cech_cohomology(*constant(D, {2}), {1, 2}, 1);
  EXPECT_EQ(d.degrees[0].describe(), "Z/2 ⊕ Z/2");
  EXPECT_TRUE(d.degrees[1].is_trivial());
  EXPECT_THROW(cech_cohomology(*F, {X.minimal_open(X.point("c"))}, 1), ValidationError);
}

TEST(Cech, AgreesWithDerivedOnLerayCover) {
  FiniteSpace X = pseudo_circle();
  std::vector<FiniteSpace::Mask> cover{X.minimal_open(X.point("c")), X.minimal_open(X.point("d"))};
  auto g = rng(13);
  for (int i = 0; i < 6; ++i) {
    SheafPtr F = random_circle_sheaf(g);
    CohomologyReport c = cech_cohomology(*F, cover, 1), h = sheaf_cohomology(F, 1);
    EXPECT_TRUE(c.isomorphic_to(h)) << c.text() << h.text();
  }
}

TEST(LongExact, Z2Z4Z2OnPseudoCircle) {
  FiniteSpace X = pseudo_circle();
  SheafPtr A = constant(X, {2}), B = constant(X, {4}), C = constant(X, {2});
  LongExactSequence les = long_exact_sequence(scalar_map(A, B, {{2}}), scalar_map(B, C, {{1}}), 1);
  EXPECT_EQ(les.groups.size(), 8u);
  EXPECT_TRUE(les.exact());
  EXPECT_EQ(les.groups[4].describe(), "Z/4"); // H¹ of Z/4
}

TEST(LongExact, SplitSequenceHasZeroConnectingMaps) {
  FiniteSpace X = pseudo_circle();
  SheafPtr A = constant(X, {2}), B = constant(X, {2, 2}), C = constant(X, {2});
  LongExactSequence les = long_exact_sequence(scalar_map(A, B, {{1}, {0}}), scalar_map(B, C, {{0, 1}}), 1);
  EXPECT_TRUE(les.exact());
  for (const auto &d : les.connecting) EXPECT_TRUE(d.is_zero());
}

TEST(LongExact, EffaceableCase) {
  // 0 → F → G → G/F → 0 with G flasque: δ⁰ maps H⁰(G/F)/im onto H¹(F)
  auto g = rng(17);
  for (int i = 0; i < 4; ++i) {
    SheafPtr F = random_circle_sheaf(g);
    FlasqueEmbedding E = flasque_godement(F);
    CokernelSheaf Q = cokernel_sheaf(E.embedding);
    LongExactSequence les = long_exact_sequence(E.embedding, Q.projection, 1);
    EXPECT_TRUE(les.exact());
    const FpMorphism &b0 = les.maps[1], &d0 = les.maps[2];
    EXPECT_EQ(les.groups[2].order() / image_order(b0), les.groups[3].order());
    EXPECT_TRUE(is_surjective(d0));
  }
}

TEST(LongExact, RejectsNonExactInput) {
  FiniteSpace X = pseudo_circle();
  SheafPtr A = constant(X, {2}), B = constant(X, {4});
  EXPECT_THROW(long_exact_sequence(scalar_map(A, B, {{2}}), scalar_map(B, A, {{0}}), 1), ValidationError);
}

TEST(Functoriality, InducedMapsCompose) {
  FiniteSpace X = pseudo_circle();
  SheafPtr A = constant(X, {2}), B = constant(X, {4}), C = constant(X, {2});
  SheafMap f = scalar_map(A, B, {{2}}), g = scalar_map(B, C, {{1}});
  for (auto kind : {GodementKind::Injective, GodementKind::Flasque}) {
    SheafCohomology HA(A, 1, kind), HB(B, 1, kind), HC(C, 1, kind);
    for (std::size_t n = 0; n <= 1; ++n) {
      FpMorphism gf = induced_map(HA, HC, compose(g, f), n);
      EXPECT_TRUE(gf.same_map(compose(induced_map(HB, HC, g, n), induced_map(HA, HB, f, n))));
      EXPECT_TRUE(gf.is_zero());
      EXPECT_TRUE(induced_map(HA, HA, SheafMap::identity(A), n).same_map(FpMorphism::identity(HA.group(n))));
    }
  }
}

TEST(Functoriality, ConnectingMapsAreNatural) {
  // map of sequences (Z/2 → Z/4 → Z/2) ⇒ (Z/2 → Z/2² → Z/2) with components 0, 1 ↦ (0,1), id
  FiniteSpace X = pseudo_circle();
  SheafPtr A = constant(X, {2}), B = constant(X, {4}), C = constant(X, {2});
  SheafPtr A2 = constant(X, {2}), B2 = constant(X, {2, 2}), C2 = constant(X, {2});
  LongExactSequence top = long_exact_sequence(scalar_map(A, B, {{2}}), scalar_map(B, C, {{1}}), 1);
  LongExactSequence bot = long_exact_sequence(scalar_map(A2, B2, {{1}, {0}}), scalar_map(B2, C2, {{0, 1}}), 1);
  SheafMap fp = scalar_map(A, A2, {{0}}), fpp = scalar_map(C, C2, {{1}});
  EXPECT_NO_THROW(scalar_map(B, B2, {{0}, {1}}));
  for (std::size_t n = 0; n <= 1; ++n) {
    SheafCohomology HA(A, n + 1, GodementKind::Flasque), HA2(A2, n + 1, GodementKind::Flasque);
    SheafCohomology HC(C, n, GodementKind::Flasque), HC2(C2, n, GodementKind::Flasque);
    FpMorphism lhs = compose(bot.connecting[n], induced_map(HC, HC2, fpp, n));
    FpMorphism rhs = compose(induced_map(HA, HA2, fp, n + 1), top.connecting[n]);
    EXPECT_TRUE(lhs.same_map(rhs));
  }
}

TEST(ShcohJson, RoundTripAndShorthands) {
  Json sp = space_to_json(pseudo_circle());
  Json j{{"space", sp}, {"constant", {3}}};
  AbelianSheaf F = sheaf_from_json(j);
  EXPECT_EQ(F.global_sections().describe(), "Z/3");
  AbelianSheaf G = sheaf_from_json(sheaf_to_json(F));
  EXPECT_TRUE(sheaf_cohomology(share(G), 1).isomorphic_to(sheaf_cohomology(share(F), 1)));
  Json k{{"space", sp}, {"skyscraper", {{"point", "c"}, {"group", {2}}}}};
  EXPECT_EQ(sheaf_from_json(k).stalk(2).order(), 2u);
  Json bad{{"space", sp}, {"stalks", {{"a", {2}}, {"c", {2}}}}, {"restrictions", Json::array()}};
  EXPECT_THROW(sheaf_from_json(bad), ValidationError);
}
