#include <gtest/gtest.h>

#include <functional>

#include "gw/exactlin.hpp"
#include "support.hpp"

using namespace gw;

namespace {

IntMatrix random_matrix(std::mt19937_64 &g, std::size_t r, std::size_t c, long lo = -9, long hi = 9) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = gwtest::uniform(g, lo, hi);
  return m;
}

// Brute force: tuples (x_1..x_k) in B = prod Z/b_j with a_i x_i = 0.
std::size_t hom_count_oracle(const std::vector<long> &a, const std::vector<long> &b) {
  std::size_t per = 1;
  for (long ai : a) {
    std::size_t good = 0;
    std::vector<long> x(b.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == b.size()) {
        bool ok = true;
        for (std::size_t j = 0; j < b.size(); ++j)
          if ((ai * x[j]) % b[j] != 0) ok = false;
        good += ok;
        return;
      }
      for (x[k] = 0; x[k] < b[k]; ++x[k]) rec(k + 1);
    };
    rec(0);
    per *= good;
  }
  return per;
}

FpAbGroup cyclic_product(const std::vector<long> &fs) {
  std::vector<Int> v(fs.begin(), fs.end());
  return FpAbGroup::from_factors(v);
}

} // namespace

TEST(Smith, DiagTwoThree) {
  IntMatrix a{{2, 0}, {0, 3}};
  SmithForm s = smith_normal_form(a);
  EXPECT_EQ(s.U * a * s.V, s.D);
  EXPECT_EQ(s.D, (IntMatrix{{1, 0}, {0, 6}}));
  EXPECT_EQ(s.U * s.Uinv, IntMatrix::identity(2));
}

TEST(Smith, TrivialCases) {
  EXPECT_EQ(smith_normal_form(IntMatrix::identity(4)).D, IntMatrix::identity(4));
  EXPECT_EQ(smith_normal_form(IntMatrix(1, 1)).D, IntMatrix(1, 1));
  SmithForm e = smith_normal_form(IntMatrix(0, 3));
  EXPECT_EQ(e.D.rows(), 0u);
}

TEST(Smith, RandomPostconditions) {
  auto g = gwtest::rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = gwtest::uniform(g, 1, 8), c = gwtest::uniform(g, 1, 8);
    IntMatrix a = random_matrix(g, r, c);
    SmithForm s = smith_normal_form(a);
    ASSERT_EQ(s.U * a * s.V, s.D);
    ASSERT_EQ(abs(determinant(s.U)), 1);
    ASSERT_EQ(abs(determinant(s.V)), 1);
    ASSERT_EQ(s.U * s.Uinv, IntMatrix::identity(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) {
          ASSERT_EQ(s.D(i, j), 0);
        }
    for (std::size_t i = 0; i + 1 < std::min(r, c); ++i) {
      ASSERT_GE(s.D(i, i), 0);
      if (s.D(i, i) == 0) {
        ASSERT_EQ(s.D(i + 1, i + 1), 0);
      } else {
        ASSERT_TRUE(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
      }
    }
  }
}

TEST(Hermite, KernelAndSolve) {
  auto g = gwtest::rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = gwtest::uniform(g, 1, 6), c = gwtest::uniform(g, 1, 7);
    IntMatrix a = random_matrix(g, r, c, -5, 5);
    HermiteForm h = hermite_normal_form(a);
    ASSERT_EQ(a * h.T, h.H);
    ASSERT_EQ(abs(determinant(h.T)), 1);
    ASSERT_TRUE((a * h.kernel()).is_zero());
    IntVector x(c);
    for (auto &v : x) v = gwtest::uniform(g, -4, 4);
    auto sol = integer_solve(h, a * x);
    ASSERT_TRUE(sol.has_value());
    ASSERT_EQ(a * *sol, a * x);
  }
}

TEST(Hermite, CanonicalUnderColumnOperations) {
  auto g = gwtest::rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix a = random_matrix(g, 4, 5, -6, 6);
    IntMatrix b = a;
    for (int k = 0; k < 30; ++k) {
      std::size_t i = gwtest::uniform(g, 0, 4), j = gwtest::uniform(g, 0, 4);
      if (i == j) continue;
      long q = gwtest::uniform(g, -3, 3);
      for (std::size_t r = 0; r < 4; ++r) b(r, i) += q * b(r, j);
    }
    ASSERT_EQ(hermite_normal_form(a, false).basis(), hermite_normal_form(b, false).basis());
  }
}

TEST(FpAbGroup, Presentations) {
  EXPECT_EQ(FpAbGroup(2, IntMatrix{{2, 0}, {0, 3}}).invariant_factors(), std::vector<Int>{6});
  FpAbGroup z = FpAbGroup::free(1);
  EXPECT_EQ(z.invariant_factors(), std::vector<Int>{0});
  EXPECT_EQ(z.describe(), "Z");
  EXPECT_TRUE(FpAbGroup(1, IntMatrix{{1}}).is_trivial());
  EXPECT_EQ(FpAbGroup(2, IntMatrix{{2, 0}, {0, 4}}).describe(), "Z/2 ⊕ Z/4");
  EXPECT_TRUE(FpAbGroup(0, IntMatrix(0, 0)).is_trivial());
}

TEST(FpAbGroup, PresentationInvariance) {
  auto g = gwtest::rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = gwtest::uniform(g, 1, 5), m = gwtest::uniform(g, 0, 5);
    IntMatrix rels = random_matrix(g, n, m, -6, 6);
    FpAbGroup a(n, rels);
    IntMatrix r = rels;
    for (int k = 0; k < 100; ++k) {
      bool row = gwtest::uniform(g, 0, 1) || m < 2;
      long q = gwtest::uniform(g, -2, 2);
      if (row && n >= 2) {
        std::size_t i = gwtest::uniform(g, 0, n - 1), j = gwtest::uniform(g, 0, n - 1);
        if (i != j)
          for (std::size_t c = 0; c < m; ++c) r(i, c) += q * r(j, c);
      } else if (m >= 2) {
        std::size_t i = gwtest::uniform(g, 0, m - 1), j = gwtest::uniform(g, 0, m - 1);
        if (i != j)
          for (std::size_t c = 0; c < n; ++c) r(c, i) += q * r(c, j);
      }
    }
    ASSERT_EQ(FpAbGroup(n, r).invariant_factors(), a.invariant_factors());
  }
}

TEST(FpAbGroup, ElementIndexRoundTrip) {
  FpAbGroup a = cyclic_product({2, 6});
  auto els = a.elements();
  ASSERT_EQ(els.size(), 12u);
  for (std::size_t i = 0; i < els.size(); ++i) EXPECT_EQ(a.index_of(els[i]), Int(i));
}

TEST(Hom, SmallGroupsAgainstEnumeration) {
  EXPECT_EQ(hom_group(cyclic_product({2}), cyclic_product({4})).group().order(), 2);
  EXPECT_TRUE(hom_group(cyclic_product({2}), cyclic_product({3})).group().is_trivial());
  FpAbGroup b = cyclic_product({2, 6});
  EXPECT_TRUE(hom_group(FpAbGroup::free(1), b).group().isomorphic_to(b));
  std::vector<std::vector<long>> shapes = {{2}, {3}, {4}, {2, 2}, {2, 4}, {6}, {3, 6}};
  for (const auto &a : shapes)
    for (const auto &c : shapes) {
      HomGroup h = hom_group(cyclic_product(a), cyclic_product(c));
      EXPECT_EQ(h.group().order(), Int(hom_count_oracle(a, c)));
    }
}

TEST(Hom, DecodeEncodeAndSums) {
  std::vector<std::vector<long>> shapes = {{2}, {4}, {2, 2}, {6}, {2, 6}};
  for (const auto &a : shapes)
    for (const auto &b : shapes)
      for (const auto &c : shapes) {
        FpAbGroup A = cyclic_product(a), B = cyclic_product(b), C = cyclic_product(c);
        FpAbGroup AB = direct_sum({A, B}).group;
        EXPECT_EQ(hom_group(AB, C).group().order(),
                  hom_group(A, C).group().order() * hom_group(B, C).group().order());
      }
  HomGroup h = hom_group(cyclic_product({2, 4}), cyclic_product({4, 6}));
  std::set<std::vector<std::vector<Int>>> seen;
  for (const auto &e : h.group().elements()) {
    FpMorphism f = h.decode(e);
    EXPECT_EQ(h.encode(f), e);
    seen.insert(f.canonical_images());
  }
  EXPECT_EQ(Int(seen.size()), h.group().order());
}

TEST(KernelCokernel, TimesTwoOnZ4) {
  FpAbGroup z4 = FpAbGroup::cyclic(4);
  FpMorphism two(z4, z4, IntMatrix{{2}});
  auto k = kernel(two);
  auto q = cokernel(two);
  // enumeration oracle
  int kc = 0;
  std::set<int> im;
  for (int x = 0; x < 4; ++x) {
    if ((2 * x) % 4 == 0) ++kc;
    im.insert((2 * x) % 4);
  }
  EXPECT_EQ(k.group.order(), kc);
  EXPECT_EQ(q.group.order(), 4 / static_cast<int>(im.size()));
  EXPECT_EQ(k.group.describe(), "Z/2");
  EXPECT_EQ(q.group.describe(), "Z/2");
  for (const auto &e : k.group.elements()) EXPECT_TRUE(FpAbGroup::is_zero(two.apply(k.inclusion.apply(e))));
}

TEST(KernelCokernel, IdentityAndZero) {
  FpAbGroup a = cyclic_product({2, 6});
  FpAbGroup b = cyclic_product({4});
  EXPECT_TRUE(kernel(FpMorphism::identity(a)).group.is_trivial());
  EXPECT_TRUE(cokernel(FpMorphism::identity(a)).group.is_trivial());
  EXPECT_TRUE(kernel(FpMorphism::zero(a, b)).group.isomorphic_to(a));
  EXPECT_TRUE(cokernel(FpMorphism::zero(a, b)).group.isomorphic_to(b));
}

TEST(KernelCokernel, IllDefinedRejected) {
  EXPECT_THROW(FpMorphism(FpAbGroup::cyclic(2), FpAbGroup::cyclic(3), IntMatrix{{1}}), ValidationError);
}

TEST(KernelCokernel, RankNullityOnFreeGroups) {
  auto g = gwtest::rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = gwtest::uniform(g, 1, 6), m = gwtest::uniform(g, 1, 6);
    IntMatrix a = random_matrix(g, m, n, -4, 4);
    FpMorphism f(FpAbGroup::free(n), FpAbGroup::free(m), a);
    std::size_t rk = rank(to_rational(a));
    EXPECT_EQ(kernel(f).group.free_rank() + rk, n);
  }
}

TEST(KernelCokernel, ExactnessByEnumeration) {
  auto g = gwtest::rng(6);
  std::vector<std::vector<long>> shapes = {{2}, {4}, {2, 2}, {6}, {2, 4}, {3, 3}};
  for (int trial = 0; trial < 40; ++trial) {
    FpAbGroup A = cyclic_product(shapes[gwtest::uniform(g, 0, shapes.size() - 1)]);
    FpAbGroup B = cyclic_product(shapes[gwtest::uniform(g, 0, shapes.size() - 1)]);
    HomGroup h = hom_group(A, B);
    auto els = h.group().elements();
    FpMorphism f = h.decode(els[gwtest::uniform(g, 0, els.size() - 1)]);
    auto k = kernel(f);
    std::set<FpAbGroup::Element> kerSet, incl, image;
    for (const auto &x : A.elements())
      if (FpAbGroup::is_zero(f.apply(x))) kerSet.insert(x);
    for (const auto &x : k.group.elements()) incl.insert(k.inclusion.apply(x));
    EXPECT_EQ(kerSet, incl);
    auto q = cokernel(f);
    for (const auto &x : A.elements()) image.insert(f.apply(x));
    EXPECT_EQ(q.group.order() * Int(image.size()), B.order());
    for (const auto &y : image) EXPECT_TRUE(FpAbGroup::is_zero(q.projection.apply(y)));
  }
}

TEST(Homology, SimpleComplex) {
  // Z --2--> Z --0--> Z : homology in the middle is Z/2
  FpAbGroup z = FpAbGroup::free(1);
  FpMorphism in(z, z, IntMatrix{{2}});
  FpMorphism out = FpMorphism::zero(z, z);
  EXPECT_EQ(homology(in, out).group.describe(), "Z/2");
}

TEST(LatticePair, QuotientTypes) {
  auto qz2 = LatticePairGroup(Subgroup::full(2), Subgroup::integer_lattice(2)).type();
  EXPECT_EQ(qz2.divisible_rank, 2u);
  EXPECT_EQ(qz2.rational_rank, 0u);
  EXPECT_TRUE(qz2.factors.empty());
  EXPECT_EQ(qz2.describe(), "(Q/Z)^2");

  RatMatrix d{{2, 0}, {0, 3}};
  auto t = LatticePairGroup(Subgroup::integer_lattice(2), Subgroup::lattice(d)).type();
  EXPECT_EQ(t.describe(), "Z/6");
  EXPECT_TRUE(t.is_finite());

  Subgroup s = Subgroup::make(3, RatMatrix{{1}, {1}, {0}}, RatMatrix{{1, 0}, {0, 0}, {0, 5}});
  EXPECT_TRUE(LatticePairGroup(s, s).type().is_trivial());
  auto full = LatticePairGroup(Subgroup::full(3), Subgroup::lattice(RatMatrix{{1}, {0}, {0}})).type();
  EXPECT_EQ(full.describe(), "Q^2 ⊕ Q/Z");
}

TEST(LatticePair, ContainmentViolation) {
  EXPECT_THROW(LatticePairGroup(Subgroup::integer_lattice(1), Subgroup::full(1)), ValidationError);
}

TEST(LatticePair, CanonicalFormIsPresentationIndependent) {
  RatMatrix a{{2, 1}, {0, 3}};
  RatMatrix b{{2, 3}, {0, 3}}; // second column = first + original second
  EXPECT_EQ(Subgroup::lattice(a), Subgroup::lattice(b));
  RatMatrix c{{1, 0}, {0, 1}};
  EXPECT_FALSE(Subgroup::lattice(a) == Subgroup::lattice(c));
}

TEST(LatticePair, KernelImageZeroAndIdentity) {
  LatticePairGroup qz(Subgroup::full(1), Subgroup::integer_lattice(1));
  auto zero = latpair_kernel_image(RatMatrix{{0}}, qz, qz);
  EXPECT_EQ(zero.kernel, qz);
  EXPECT_TRUE(zero.image.type().is_trivial());
  auto id = latpair_kernel_image(RatMatrix{{1}}, qz, qz);
  EXPECT_TRUE(id.kernel.type().is_trivial());
  EXPECT_EQ(id.image, qz);
}

TEST(LatticePair, TimesTwoOnQmodZ) {
  LatticePairGroup qz(Subgroup::full(1), Subgroup::integer_lattice(1));
  auto ki = latpair_kernel_image(RatMatrix{{2}}, qz, qz);
  EXPECT_EQ(ki.kernel.type().describe(), "Z/2");
  EXPECT_EQ(ki.image, qz);
  // witness search: each x = k/N in [0,1) has a half x/2 with 2(x/2) = x
  for (int N = 1; N <= 12; ++N)
    for (int k = 0; k < N; ++k) {
      Rat x = make_rat(k, N), y = x / 2;
      EXPECT_TRUE(qz.is_zero({Rat(2 * y - x)}));
    }
  // the kernel elements are exactly 0 and 1/2 mod Z
  int count = 0;
  for (int k = 0; k < 24; ++k)
    if (ki.kernel.contains({make_rat(k, 24)})) ++count;
  EXPECT_EQ(count, 2);
}

TEST(LatticePair, MonotoneChains) {
  auto g = gwtest::rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    // nested lattices L2 ⊆ L1 ⊆ Z^3 with denominator 4Z^3 ⊆ L2
    RatMatrix den = to_rational(IntMatrix::diagonal({4, 4, 4}));
    RatMatrix g1 = den.hstack(to_rational(random_matrix(g, 3, 2, -3, 3)));
    RatMatrix g2 = g1.hstack(to_rational(random_matrix(g, 3, 2, -3, 3)));
    LatticePairGroup a(Subgroup::lattice(g1), Subgroup::lattice(den));
    LatticePairGroup b(Subgroup::lattice(g2), Subgroup::lattice(den));
    auto ta = a.type(), tb = b.type();
    Int oa = 1, ob = 1;
    for (auto &f : ta.factors) oa *= f;
    for (auto &f : tb.factors) ob *= f;
    EXPECT_TRUE(mpz_divisible_p(ob.get_mpz_t(), oa.get_mpz_t()));
    EXPECT_LE(ta.factors.size(), tb.factors.size());
  }
}

TEST(LatticePair, PreimageAgainstMembership) {
  auto g = gwtest::rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    RatMatrix a = to_rational(random_matrix(g, 2, 2, -3, 3));
    Subgroup dom = Subgroup::integer_lattice(2);
    Subgroup tgt = Subgroup::lattice(RatMatrix{{3, 0}, {0, 2}});
    Subgroup pre = preimage(a, dom, tgt);
    for (int x = -6; x <= 6; ++x)
      for (int y = -6; y <= 6; ++y) {
        RatVector v{Rat(x), Rat(y)};
        EXPECT_EQ(pre.contains(v), tgt.contains(a * v));
      }
  }
}

TEST(LatticePair, SolveModulo) {
  // find x in Z^2 with [[2,0],[0,3]] x ≡ (4, 9) mod 6Z^2
  RatMatrix a{{2, 0}, {0, 3}};
  Subgroup tgt = Subgroup::lattice(RatMatrix{{6, 0}, {0, 6}});
  auto x = solve_modulo(a, Subgroup::integer_lattice(2), tgt, {Rat(4), Rat(9)});
  ASSERT_TRUE(x.has_value());
  RatVector r = a * *x;
  EXPECT_TRUE(tgt.contains(RatVector{r[0] - 4, r[1] - 9}));
  EXPECT_FALSE(solve_modulo(a, Subgroup::integer_lattice(2), tgt, {Rat(1), Rat(0)}).has_value());
}

TEST(LatticePair, FiniteQuotientCoordinates) {
  // (1/2 Z ⊕ 1/3 Z) / Z^2 ≅ Z/6
  RatMatrix halfThird(2, 2);
  halfThird(0, 0) = Rat(1, 2);
  halfThird(1, 1) = Rat(1, 3);
  LatticePairGroup gpair(Subgroup::lattice(halfThird), Subgroup::integer_lattice(2));
  FiniteQuotient fq(gpair);
  EXPECT_EQ(fq.group().describe(), "Z/6");
  std::set<FpAbGroup::Element> seen;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) seen.insert(fq.coordinates({Rat(i, 2) + 5, Rat(j, 3) - 2}));
  EXPECT_EQ(seen.size(), 6u);
  for (const auto &e : fq.group().elements()) EXPECT_EQ(fq.coordinates(fq.representative(e)), e);
}

TEST(Json, MatrixRoundTrip) {
  IntMatrix a{{1, -2}, {30000000, 0}};
  a(1, 0) *= Int("100000000000000000000");
  EXPECT_EQ(int_matrix_from_json(matrix_to_json(a)), a);
  EXPECT_THROW(int_matrix_from_json(Json::parse(R"([["1"],["2","3"]])")), InputError);
}
