#include <gtest/gtest.h>

#include <set>

#include "cats.hpp"
#include "psh_gen.hpp"
#include "support.hpp"

using namespace gw;
using namespace gwtest;

namespace {

Presheaf::Raw arrow_raw(const std::string &xa, const std::string &ya) {
  Presheaf::Raw r;
  r.fibers = {{"u"}, {"x", "y"}};
  r.action = {{"x", "a", xa}, {"y", "a", ya}};
  return r;
}

template <class F> std::string violation_kind(F &&f) {
  try {
    f();
  } catch (const ValidationError &e) {
    return e.violations().front().kind;
  }
  return "";
}

FinFunctor functor_by_objects(const CatPtr &C, const CatPtr &D, const std::vector<std::string> &objs) {
  for (const auto &f : enumerate_functors(C, D)) {
    bool ok = true;
    for (std::size_t a = 0; a < objs.size(); ++a) ok = ok && D->object_name(f.on_object(a)) == objs[a];
    if (ok) return f;
  }
  throw std::runtime_error("no such functor");
}

std::vector<PshPtr> small_presheaves(const CatPtr &C, std::size_t m, std::size_t per) {
  std::vector<PshPtr> out;
  for (const auto &s : size_vectors(C->object_count(), m))
    for (auto &p : presheaves_with_sizes(C, s, per)) out.push_back(p);
  return out;
}

} // namespace

TEST(Presheaf, ValidationExamples) {
  auto C = share(walking_arrow());
  Presheaf F = Presheaf::from_raw(C, arrow_raw("u", "u"));
  EXPECT_EQ(F.fiber_sizes(), (std::vector<std::size_t>{1, 2}));
  Presheaf::Raw bad = arrow_raw("y", "u");
  bad.fibers[1].push_back("z");
  EXPECT_EQ(violation_kind([&] { Presheaf::from_raw(C, bad); }), "ActionOutOfFiber");
  Presheaf::Raw nf = arrow_raw("u", "u");
  nf.action.push_back({"x", "id1", "y"});
  EXPECT_EQ(violation_kind([&] { Presheaf::from_raw(C, nf); }), "NonFunctorial");
  Presheaf::Raw miss = arrow_raw("u", "u");
  miss.action.pop_back();
  EXPECT_EQ(violation_kind([&] { Presheaf::from_raw(C, miss); }), "MissingActionEntry");
}

TEST(Presheaf, NonFunctorialOnComposite) {
  // Z/3 acting on 3 points with g1 a shift and g2 the identity breaks g1∘g1 = g2
  auto C = share(cyclic_group(3));
  Presheaf::Raw r;
  r.fibers = {{"p", "q", "s"}};
  r.action = {{"p", "g1", "q"}, {"q", "g1", "s"}, {"s", "g1", "p"}, {"p", "g2", "p"}, {"q", "g2", "q"}, {"s", "g2", "s"}};
  EXPECT_EQ(violation_kind([&] { Presheaf::from_raw(C, r); }), "NonFunctorial");
}

TEST(Representable, WalkingArrowFibers) {
  auto C = share(walking_arrow());
  Presheaf R1 = representable(C, C->object("1"));
  EXPECT_EQ(R1.to_raw().fibers, (std::vector<std::vector<std::string>>{{"a"}, {"id1"}}));
  Presheaf R0 = representable(C, C->object("0"));
  EXPECT_EQ(R0.to_raw().fibers, (std::vector<std::vector<std::string>>{{"id0"}, {}}));
  auto T = share(terminal_category());
  EXPECT_EQ(representable(T, 0).size(), 1u);
  EXPECT_THROW(representable(C, 7), InputError);
}

TEST(Representable, OnArrows) {
  auto C = share(walking_arrow());
  PresheafMap ra = representable_on_arrow(C, C->arrow("a"));
  EXPECT_EQ(ra.target()->name(ra(ra.source()->element("id0"))), "a");
  for (std::size_t o = 0; o < 2; ++o) {
    PresheafMap id = representable_on_arrow(C, C->identity(o));
    EXPECT_EQ(id, PresheafMap::identity(id.source()));
  }
  auto K = share(chain(3));
  for (std::size_t h = 0; h < K->arrow_count(); ++h)
    for (std::size_t k : K->arrows_into(K->dom(h)))
      EXPECT_EQ(compose(representable_on_arrow(K, h), representable_on_arrow(K, k)),
                representable_on_arrow(K, K->compose(h, k)));
}

TEST(Yoneda, ExamplesOnWalkingArrow) {
  auto C = share(walking_arrow());
  PshPtr F = share(Presheaf::from_raw(C, arrow_raw("u", "u")));
  YonedaReport r = yoneda_check(F, C->object("1"));
  EXPECT_EQ(r.transformations, 2u);
  EXPECT_TRUE(r.round_trips);
  PshPtr R1 = share(representable(C, 1));
  auto nats = enumerate_maps(R1, R1);
  for (const auto &nu : nats) {
    if (nu == PresheafMap::identity(R1)) {
      EXPECT_EQ(R1->name(yoneda_element(nu, 1)), "id1");
    }
  }
  PshPtr E = share(constant_presheaf(C, {}));
  EXPECT_EQ(yoneda_check(E, 0).transformations, 0u);
}

TEST(Yoneda, BijectionOverSmallCategories) {
  auto g = rng(1);
  std::vector<std::pair<CatPtr, std::size_t>> cases{{share(walking_arrow()), 1000}, {share(cyclic_group(3)), 1000},
                                                    {share(square()), 2}};
  std::size_t checked = 0;
  for (const auto &[C, per] : cases)
    for (const auto &s : size_vectors(C->object_count(), 3))
      for (const auto &F : presheaves_with_sizes(C, s, per, &g))
        for (std::size_t B = 0; B < C->object_count(); ++B) {
          YonedaReport r = yoneda_check(F, B);
          ASSERT_EQ(r.transformations, r.elements);
          ASSERT_TRUE(r.round_trips);
          ++checked;
        }
  EXPECT_GT(checked, 500u);
}

TEST(Representables, AreGenerators) {
  for (const auto &cc : {walking_arrow(), cyclic_group(2), span()}) {
    auto C = share(cc);
    auto ps = small_presheaves(C, 2, 3);
    std::vector<PshPtr> reps;
    for (std::size_t b = 0; b < C->object_count(); ++b) reps.push_back(share(representable(C, b)));
    for (const auto &F : ps)
      for (const auto &G : ps) {
        auto maps = enumerate_maps(F, G);
        for (std::size_t i = 0; i < maps.size(); ++i)
          for (std::size_t j = i + 1; j < maps.size(); ++j) {
            bool separated = false;
            for (const auto &R : reps)
              for (const auto &nu : enumerate_maps(R, F))
                if (compose(maps[i], nu).table() != compose(maps[j], nu).table()) separated = true;
            ASSERT_TRUE(separated);
          }
      }
  }
}

TEST(Representables, ColimitOfElements) {
  // cocone ν_x : R_B → F over the category of elements; a cocone into H is a family
  // of maps μ_x : R_B → H with μ_x ∘ R_f = μ_{x·f}; these must match Hom(F, H).
  for (const auto &cc : {walking_arrow(), cyclic_group(3), span()}) {
    auto C = share(cc);
    auto ps = small_presheaves(C, 2, 2);
    for (const auto &F : ps)
      for (const auto &H : ps) {
        std::vector<std::vector<PresheafMap>> options;
        for (std::size_t x = 0; x < F->size(); ++x)
          options.push_back(enumerate_maps(share(representable(C, F->over(x))), H));
        std::vector<std::size_t> pick(F->size());
        std::size_t cocones = 0;
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
          if (k == F->size()) {
            ++cocones;
            return;
          }
          for (pick[k] = 0; pick[k] < options[k].size(); ++pick[k]) {
            bool ok = true;
            // check against earlier elements related by an arrow
            for (std::size_t y = 0; y <= k && ok; ++y)
              for (std::size_t f : C->arrows_into(F->over(y))) {
                std::size_t z = F->act(y, f);
                if (std::max(y, z) != k) continue;
                PresheafMap lhs = compose(options[y][pick[y]], representable_on_arrow(C, f));
                if (lhs.table() != options[z][pick[z]].table()) ok = false;
              }
            if (ok) rec(k + 1);
          }
        };
        rec(0);
        auto hom = enumerate_maps(F, H);
        ASSERT_EQ(cocones, hom.size());
        std::set<std::vector<std::vector<std::size_t>>> images;
        for (const auto &phi : hom) {
          std::vector<std::vector<std::size_t>> fam;
          for (std::size_t x = 0; x < F->size(); ++x) fam.push_back(compose(phi, yoneda_map(F, F->over(x), x)).table());
          images.insert(fam);
        }
        ASSERT_EQ(images.size(), hom.size());
      }
  }
}

TEST(Limits, ProductFibersArePointwise) {
  auto g = rng(2);
  for (const auto &cc : {walking_arrow(), square(), cyclic_group(3)}) {
    auto C = share(cc);
    for (int t = 0; t < 20; ++t) {
      std::vector<std::size_t> s1, s2;
      for (std::size_t a = 0; a < C->object_count(); ++a) {
        s1.push_back(uniform(g, 0, 3));
        s2.push_back(uniform(g, 0, 3));
      }
      auto F = presheaves_with_sizes(C, s1, 1, &g), G = presheaves_with_sizes(C, s2, 1, &g);
      if (F.empty() || G.empty()) continue;
      PshPtr P = share(product(F[0], G[0]));
      for (std::size_t a = 0; a < C->object_count(); ++a) EXPECT_EQ(P->fiber(a).size(), s1[a] * s2[a]);
      auto [p, q] = product_projections(P, F[0], G[0]);
      // universal property: pairs of maps from each test presheaf T factor uniquely
      for (const auto &T : small_presheaves(C, 1, 1)) {
        auto tf = enumerate_maps(T, F[0]), tg = enumerate_maps(T, G[0]), tp = enumerate_maps(T, P);
        EXPECT_EQ(tp.size(), tf.size() * tg.size());
        (void)p;
        (void)q;
      }
    }
  }
}

TEST(Coproduct, Examples) {
  auto C = share(walking_arrow());
  auto fam = PresheafFamily::from_members(C, {{"r0", representable(C, 0)}, {"r1", representable(C, 1)}});
  EXPECT_EQ(coproduct(fam).fiber_sizes(), (std::vector<std::size_t>{2, 1}));
  auto empty = PresheafFamily::from_members(C, {});
  EXPECT_EQ(coproduct(empty).size(), 0u);
  EXPECT_EQ(fam.fiber(0, 1).size(), 1u);
}

TEST(Coequalizer, Examples) {
  auto C = share(walking_arrow());
  PshPtr R0 = share(representable(C, 0));
  auto fam = PresheafFamily::from_members(C, {{"l", representable(C, 0)}, {"r", representable(C, 0)}});
  PshPtr S = share(coproduct(fam));
  PresheafMap il(R0, S, {S->element("l/id0")}), ir(R0, S, {S->element("r/id0")});
  Coequalizer q = coequalizer(il, ir);
  EXPECT_TRUE(find_isomorphism(q.quotient, R0).has_value());
  EXPECT_EQ(compose(q.projection, il), compose(q.projection, ir));

  Coequalizer same = coequalizer(il, il);
  EXPECT_TRUE(find_isomorphism(same.quotient, S).has_value());

  PshPtr T = share(constant_presheaf(C, {"*"}));
  PshPtr K = share(constant_presheaf(C, {"p", "q"}));
  auto consts = enumerate_maps(T, K);
  ASSERT_EQ(consts.size(), 2u);
  Coequalizer k = coequalizer(consts[0], consts[1]);
  EXPECT_EQ(k.quotient->fiber_sizes(), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(k.quotient->name(0), "p@0");
}

TEST(Coequalizer, UniversalProperty) {
  for (const auto &cc : {walking_arrow(), cyclic_group(2), span()}) {
    auto C = share(cc);
    auto ps = small_presheaves(C, 2, 2);
    std::size_t checked = 0;
    for (const auto &F : ps)
      for (const auto &G : ps) {
        auto maps = enumerate_maps(F, G);
        for (std::size_t i = 0; i < maps.size() && i < 3; ++i)
          for (std::size_t j = 0; j < maps.size() && j < 3; ++j) {
            Coequalizer q = coequalizer(maps[i], maps[j]);
            ASSERT_EQ(compose(q.projection, maps[i]), compose(q.projection, maps[j]));
            for (const auto &H : ps) {
              std::size_t killing = 0;
              for (const auto &k : enumerate_maps(G, H))
                if (compose(k, maps[i]).table() == compose(k, maps[j]).table()) {
                  ++killing;
                  auto fac = factor_through_coequalizer(q, k);
                  ASSERT_TRUE(fac.has_value());
                  ASSERT_EQ(compose(*fac, q.projection), k);
                }
              ASSERT_EQ(killing, enumerate_maps(q.quotient, H).size());
              ++checked;
            }
          }
      }
    EXPECT_GT(checked, 0u);
  }
}

TEST(Kan, IdentityFunctor) {
  auto g = rng(3);
  for (const auto &cc : {walking_arrow(), square(), cyclic_group(3)}) {
    auto C = share(cc);
    FinFunctor id = FinFunctor::identity(C);
    std::vector<std::size_t> sz(C->object_count(), 2);
    for (const auto &G : presheaves_with_sizes(C, sz, 3, &g)) {
      EXPECT_TRUE(find_isomorphism(restrict_along(id, G).psh, G).has_value());
      EXPECT_TRUE(find_isomorphism(left_kan(id, G).psh, G).has_value());
      EXPECT_TRUE(find_isomorphism(right_kan(id, G).psh, G).has_value());
    }
  }
}

TEST(Kan, RightExtensionFromPoint) {
  // presheaves are contravariant: (u_*D)(B) = D^{Hom(uA... ,B)} with one factor per arrow u(*) → B
  auto T = share(terminal_category());
  auto C = share(walking_arrow());
  PshPtr D = share(constant_presheaf(T, {"d1", "d2", "d3"}));
  FinFunctor at0 = functor_by_objects(T, C, {"0"}), at1 = functor_by_objects(T, C, {"1"});
  EXPECT_EQ(right_kan(at0, D).psh->fiber_sizes(), (std::vector<std::size_t>{3, 3}));
  EXPECT_EQ(right_kan(at1, D).psh->fiber_sizes(), (std::vector<std::size_t>{1, 3}));
  // dually u_! uses arrows B → u(*)
  EXPECT_EQ(left_kan(at0, D).psh->fiber_sizes(), (std::vector<std::size_t>{3, 0}));
  EXPECT_EQ(left_kan(at1, D).psh->fiber_sizes(), (std::vector<std::size_t>{3, 3}));
}

TEST(Kan, LeftExtensionOfRepresentable) {
  // u_! R_A ≅ R_{uA}
  std::vector<std::pair<FinCategory, FinCategory>> pairs{
      {walking_arrow(), chain(3)}, {span(), square()}, {cyclic_group(3), cyclic_group(3)}, {chain(2), walking_iso()}};
  for (const auto &[c, d] : pairs) {
    auto C = share(c), D = share(d);
    for (const auto &u : enumerate_functors(C, D))
      for (std::size_t a = 0; a < C->object_count(); ++a) {
        PshPtr RA = share(representable(C, a));
        PshPtr RuA = share(representable(D, u.on_object(a)));
        ASSERT_TRUE(find_isomorphism(left_kan(u, RA).psh, RuA).has_value());
      }
  }
}

TEST(Kan, AdjunctionsAndTriangles) {
  auto g = rng(4);
  std::vector<std::pair<FinCategory, FinCategory>> pairs{{terminal_category(), walking_arrow()},
                                                         {walking_arrow(), terminal_category()},
                                                         {walking_arrow(), walking_iso()},
                                                         {discrete(2), span()},
                                                         {walking_arrow(), chain(3)},
                                                         {cyclic_group(3), terminal_category()}};
  std::size_t checked = 0;
  for (const auto &[c, d] : pairs) {
    auto C = share(c), D = share(d);
    auto us = enumerate_functors(C, D);
    auto Gs = small_presheaves(C, 2, 1), Fs = small_presheaves(D, 2, 1);
    std::shuffle(Gs.begin(), Gs.end(), g);
    std::shuffle(Fs.begin(), Fs.end(), g);
    Gs.resize(std::min<std::size_t>(Gs.size(), 4));
    Fs.resize(std::min<std::size_t>(Fs.size(), 4));
    for (const auto &u : us)
      for (const auto &G : Gs)
        for (const auto &F : Fs) {
          AdjunctionReport r = adjunction_check(u, G, F);
          ASSERT_TRUE(r.left_triangles);
          ASSERT_TRUE(r.right_triangles);
          ASSERT_EQ(r.hom_left_lhs, r.hom_left_rhs);
          ASSERT_EQ(r.hom_right_lhs, r.hom_right_rhs);
          ASSERT_TRUE(r.ok());
          ++checked;
        }
  }
  EXPECT_GT(checked, 20u);
}

TEST(Kan, FunctorialOnMaps) {
  auto C = share(walking_arrow()), D = share(chain(3));
  for (const auto &u : enumerate_functors(C, D)) {
    auto ps = small_presheaves(C, 1, 1);
    for (const auto &G : ps)
      for (const auto &H : ps)
        for (const auto &psi : enumerate_maps(G, H)) {
          RightKan a = right_kan(u, G), b = right_kan(u, H);
          LeftKan l = left_kan(u, G), m = left_kan(u, H);
          EXPECT_NO_THROW(right_kan_map(a, b, psi));
          EXPECT_NO_THROW(left_kan_map(l, m, psi));
        }
    for (const auto &G : ps) {
      RightKan a = right_kan(u, G);
      LeftKan l = left_kan(u, G);
      EXPECT_EQ(right_kan_map(a, a, PresheafMap::identity(G)), PresheafMap::identity(a.psh));
      EXPECT_EQ(left_kan_map(l, l, PresheafMap::identity(G)), PresheafMap::identity(l.psh));
    }
  }
}

TEST(Presheaf, JsonRoundTrip) {
  auto C = share(walking_arrow());
  Presheaf F = Presheaf::from_raw(C, arrow_raw("u", "u"));
  EXPECT_EQ(presheaf_from_json(presheaf_to_json(F)), F);
  Json j = presheaf_to_json(F, "walking-arrow");
  EXPECT_THROW(presheaf_from_json(j), InputError);
  EXPECT_EQ(presheaf_from_json(j, [&](const std::string &) { return C; }), F);
  Json bad = presheaf_to_json(F);
  bad["action"][0][2] = "x";
  EXPECT_THROW(presheaf_from_json(bad), ValidationError);
}
