#include <gtest/gtest.h>

#include "gw/mttchk.hpp"
#include "mtt_corpus.hpp"
#include "mtt_oracle.hpp"

using namespace gw;
using namespace gw::mtt;
using namespace gwtest;

namespace {

void expect_round_trip(const std::string &text) {
  FormP f = parse_formula(text);
  std::string canon = print(f);
  FormP g = parse_formula(canon);
  EXPECT_TRUE(same(f, g)) << text << "\n" << canon;
  EXPECT_EQ(print(g), canon);
}

bool has_abstract(const FormP &f) {
  bool hit = false;
  detail::each_term(f, [&](const Term &t) { hit = hit || t.kind == TermKind::Abstract; });
  return hit;
}

} // namespace

TEST(Parse, Examples) {
  FormP a = parse_formula("∀x∈A. x=x");
  ASSERT_EQ(a->kind, FormKind::Forall);
  EXPECT_EQ(a->bound_rel, Rel::In);
  EXPECT_EQ(a->a->rel, Rel::Eq);
  FormP b = parse_formula("∃P. ∀x. (x∈P ↔ x⊆N)");
  ASSERT_EQ(b->kind, FormKind::Exists);
  EXPECT_FALSE(b->bound_rel.has_value());
  EXPECT_EQ(b->a->a->kind, FormKind::Iff);
  FormP c = parse_formula("∀X:Class. X∈₂𝔅");
  EXPECT_EQ(c->var.sort, Sort::cls());
  EXPECT_EQ(c->a->rel, Rel::In2);
  EXPECT_EQ(c->a->rhs->sort, Sort::collection());
}

TEST(Parse, AsciiAlternatives) {
  EXPECT_TRUE(same(parse_formula("forall x in A. exists y in B. <<x, y>> in F"), parse_formula("∀x∈A. ∃y∈B. ⟨x, y⟩∈F")));
  EXPECT_TRUE(same(parse_formula("forall X:Class. X in2 𝔅"), parse_formula("∀X:Class. X∈₂𝔅")));
  EXPECT_TRUE(same(parse_formula("not x in y and y subseteq pow(z) -> x in1 𝒜 <-> u = v"),
                   parse_formula("¬x∈y ∧ y⊆𝒫(z) → x∈₁𝒜 ↔ u=v")));
  EXPECT_TRUE(same(parse_formula("(∀A∈₁𝒜)(∃!B∈₁ℬ) ⟨A,B⟩∈₁𝓕"), parse_formula("∀A∈₁𝒜. ∃!B∈₁ℬ. ⟨A, B⟩∈₁𝓕")));
  EXPECT_TRUE(same(parse_formula("x∉y"), parse_formula("¬x∈y")));
}

TEST(Parse, Precedence) {
  FormP f = parse_formula("a∈b ∧ c∈d ∨ e∈f → g∈h ↔ i∈j");
  EXPECT_EQ(f->kind, FormKind::Iff);
  EXPECT_EQ(f->a->kind, FormKind::Implies);
  EXPECT_EQ(f->a->a->kind, FormKind::Or);
  EXPECT_EQ(f->a->a->a->kind, FormKind::And);
  FormP r = parse_formula("a∈b → c∈d → e∈f");
  EXPECT_EQ(r->b->kind, FormKind::Implies);
  // a quantifier body extends as far right as possible
  FormP q = parse_formula("∀x. x∈a ∧ x∈b");
  EXPECT_EQ(q->kind, FormKind::Forall);
}

TEST(Parse, SyntaxErrorsCarryPositions) {
  try {
    parse_formula("∀x∈A. x==");
    FAIL();
  } catch (const SyntaxError &e) {
    EXPECT_GT(e.position(), 6u);
  }
  EXPECT_THROW(parse_formula("x ∈"), SyntaxError);
  EXPECT_THROW(parse_formula("(x∈y"), SyntaxError);
  EXPECT_THROW(parse_formula("x∈y z"), SyntaxError);
  EXPECT_THROW(parse_formula(""), SyntaxError);
}

TEST(Parse, SortErrors) {
  EXPECT_THROW(parse_formula("𝒜 = ℬ"), SortError);              // no identity for classes
  EXPECT_THROW(parse_formula("x∈₂𝔅"), SortError);               // a set is not a member of a collection
  EXPECT_THROW(parse_formula("x∈𝒜"), SortError);                // class membership is ∈₁
  EXPECT_THROW(parse_formula("𝒜∈x"), SortError);                // classes are not members of sets
  EXPECT_THROW(parse_formula("∀x∈₁A. x=x"), SortError);         // ∈₁ bound must be a class
  EXPECT_THROW(parse_formula("∃!𝒳. 𝒳⊆𝒳"), SortError);          // ∃! needs identity
  EXPECT_THROW(parse_formula("x∈y ∧ y:Class∈₂𝔅"), SortError);   // y used at two sorts
  EXPECT_THROW(parse_formula("⟨𝒜, ℬ⟩ ∈ {⟨𝒳⟩ | 𝒳⊆𝒳}"), SortError);
  EXPECT_NO_THROW(parse_formula("x∈₁𝒜 ∧ 𝒜∈₂𝔅"));
}

TEST(Print, RoundTrip) {
  for (const char *t : {"∀x∈A. x=x", "∃P. ∀x. (x∈P ↔ x⊆N)", "∀X:Class. X∈₂𝔅", "¬(∀x. x∈y) ∧ z=z",
                        "(a ∪ b) ∩ c ∈ 𝒫(d×e)", "a∈b → (c∈d → e∈f)", "(a∈b → c∈d) → e∈f", "¬¬a∈b",
                        "x∈{y∈A | y⊆x} ∨ {u, v}⊆∅", "q:Class ⊆ 𝒜", "⟨𝒜, ℬ⟩ ∈ {⟨𝒳, 𝒴⟩ | 𝒳⊆𝒴}",
                        corpus::rn_formula, corpus::class_inclusion, corpus::collection_inclusion})
    expect_round_trip(t);
  for (const char *t : {corpus::small_category, corpus::class_category, corpus::function_collection,
                        corpus::iterated_powerset}) {
    TermP a = parse_term(t);
    TermP b = parse_term(print(a));
    EXPECT_TRUE(same(a, b)) << print(a);
  }
}

TEST(Delta0, Examples) {
  EXPECT_TRUE(is_delta0(parse_formula(corpus::rn_formula)));
  Delta0Report r = delta0_report(parse_formula("∃P. ∀x. (x∈P ↔ x⊆N)"));
  EXPECT_FALSE(r.delta0);
  ASSERT_EQ(r.unbounded.size(), 2u);
  EXPECT_EQ(r.unbounded[0], "∃P");
  EXPECT_TRUE(is_delta0(parse_formula("∀x∈A. ∃y∈B. ⟨x,y⟩∈F")));
  EXPECT_THROW(is_delta0(parse_formula(corpus::class_inclusion)), SortError);
}

TEST(Delta0, BoundedShapesAreRecognized) {
  EXPECT_TRUE(is_delta0(parse_formula("∀x. (x∈A → x∈B)")));
  EXPECT_TRUE(is_delta0(parse_formula("∃x. (x∈A ∧ x=x)")));
  EXPECT_FALSE(is_delta0(parse_formula("∀x. (x∈𝒫(x) → x∈B)")));  // bound mentions x
  EXPECT_FALSE(is_delta0(parse_formula("∀x. (x∈A ∧ x∈B)")));
  EXPECT_FALSE(is_delta0(parse_formula("∃x. (x∈A → x∈B)")));
  FormP n = normalize_bounded(parse_formula("∀x. (x∈A → ∃y. (y∈x ∧ y=y))"));
  EXPECT_EQ(print(n), "∀x∈A. ∃y∈x. y=y");
}

TEST(Delta0, SeparationBodiesCount) {
  EXPECT_TRUE(is_delta0(parse_formula("z∈{x∈A | ∀y∈x. y∈B}")));
  EXPECT_FALSE(is_delta0(parse_formula("z∈{x∈A | ∀y. y∈x}")));
  EXPECT_FALSE(is_delta0(parse_formula("∀z∈{x∈A | ∃y. x∈y}. z=z")));
}

TEST(Delta0, AgreesWithRecursiveOracle) {
  auto g = rng(31);
  FormulaGen gen(g);
  Render render(g);
  std::size_t yes = 0;
  for (int i = 0; i < 1000; ++i) {
    GFormP f = gen.formula(4);
    std::string text = render.form(f);
    FormP p = parse_formula(text);
    bool expect = oracle_delta0(f);
    ASSERT_EQ(is_delta0(p), expect) << text;
    yes += expect;
    FormP q = parse_formula(print(p));
    ASSERT_TRUE(same(p, q)) << text;
  }
  EXPECT_GT(yes, 100u);
  EXPECT_LT(yes, 900u);
}

TEST(Delta0, ClosureProperties) {
  auto g = rng(37);
  FormulaGen gen(g);
  Render render(g);
  std::vector<FormP> d0;
  while (d0.size() < 60) {
    GFormP f = gen.formula(3);
    if (oracle_delta0(f)) d0.push_back(parse_formula(render.form(f)));
  }
  for (std::size_t i = 0; i + 1 < d0.size(); ++i) {
    const FormP &a = d0[i], &b = d0[i + 1];
    for (auto k : {FormKind::And, FormKind::Or, FormKind::Implies, FormKind::Iff})
      EXPECT_TRUE(is_delta0(make_binary(k, a, b)));
    EXPECT_TRUE(is_delta0(make_unary(a)));
    EXPECT_TRUE(is_delta0(make_quantifier(FormKind::Forall, {"w", Sort::set(), {}}, Rel::In, make_var("A", Sort::set()), a)));
    EXPECT_TRUE(is_delta0(make_quantifier(FormKind::Exists, {"w", Sort::set(), {}}, Rel::In, make_var("w2", Sort::set()), b)));
  }
}

TEST(Delta0, SubstitutionPreserves) {
  auto g = rng(41);
  FormulaGen gen(g);
  Render render(g);
  std::vector<TermP> terms{parse_term("𝒫(x)"), parse_term("⟨x, y⟩"), parse_term("{w∈z | w∈x}"), parse_term("u ∪ A")};
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    GFormP f = gen.formula(3);
    if (!oracle_delta0(f)) continue;
    FormP p = parse_formula(render.form(f));
    Substitution s;
    for (const auto &v : free_vars(p)) s[v] = terms[std::size_t(uniform(g, 0, 3))];
    FormP q = substitute(p, s);
    EXPECT_TRUE(is_delta0(q)) << print(p) << " ⇒ " << print(q);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Substitution, AvoidsCapture) {
  FormP f = parse_formula("∀x∈A. x∈y");
  FormP g = substitute(f, {{"y", make_var("x", Sort::set())}});
  EXPECT_EQ(print(g), "∀x1∈A. x1∈x");
  EXPECT_EQ(free_vars(g), (std::set<std::string>{"A", "x"}));
  FormP h = substitute(f, {{"x", make_var("z", Sort::set())}});
  EXPECT_TRUE(same(h, f));
}

TEST(SetTheoretic, Examples) {
  EXPECT_TRUE(is_set_theoretic(parse_formula(corpus::class_inclusion)));
  EXPECT_TRUE(is_set_theoretic(parse_formula("𝒜 ⊆ ℬ")));
  SetTheoreticReport r = set_theoretic_report(parse_formula(corpus::collection_inclusion));
  EXPECT_FALSE(r.set_theoretic);
  ASSERT_EQ(r.offending.size(), 1u);
  EXPECT_EQ(r.offending[0], "∀𝒳");
  EXPECT_FALSE(is_set_theoretic(parse_formula("𝔄 ⊆ 𝔅")));
  EXPECT_TRUE(is_set_theoretic(parse_formula(corpus::rn_formula)));
  // free higher-sort variables are allowed
  EXPECT_TRUE(is_set_theoretic(parse_formula("∀x∈₁𝒜. 𝒜∈₂𝔅")));
}

TEST(SetTheoretic, AgreesWithOracle) {
  auto g = rng(43);
  FormulaGen gen(g, true);
  Render render(g);
  std::size_t yes = 0;
  for (int i = 0; i < 400; ++i) {
    GFormP f = gen.formula(4);
    std::string text = render.form(f);
    FormP p = parse_formula(text);
    ASSERT_EQ(is_set_theoretic(p), oracle_set_theoretic(f)) << text;
    yes += oracle_set_theoretic(f);
  }
  EXPECT_GT(yes, 40u);
  EXPECT_LT(yes, 360u);
}

TEST(Abstracts, Sorts) {
  EXPECT_EQ(abstract_wf(parse_term("{x | x∈₁𝒜 ∧ x∈₁ℬ}")), Sort::cls());
  Sort cat = abstract_wf(parse_term(corpus::small_category));
  EXPECT_EQ(cat.kind, Sort::Kind::Class);
  EXPECT_EQ(cat.str(), "Class[Set×Set×Set×Set×Set]");
  EXPECT_EQ(abstract_wf(parse_term(corpus::class_category)).str(), "Collection[Class×Class×Class×Class×Class]");
  EXPECT_EQ(abstract_wf(parse_term(corpus::function_collection)), Sort::collection());
  try {
    abstract_wf(parse_term("{x | ∀𝒳:Class. x∈₁𝒳}"));
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_TRUE(e.has("NotSetTheoretic"));
  }
  EXPECT_THROW(parse_term("{𝔛 | 𝔛⊆𝔛}"), SortError); // no collections of collections
  EXPECT_THROW(abstract_wf(parse_term("𝒫(x)")), SortError);
}

TEST(Abstracts, RuleSixPrimeReduction) {
  Reduction r = reduce_abstracts(parse_formula("⟨𝒞, 𝒟⟩ ∈ {⟨𝒳, 𝒴⟩ | ∀x. (x∈₁𝒳 → x∈₁𝒴)}"));
  EXPECT_EQ(print(r.formula), "∀x. x∈₁𝒞 → x∈₁𝒟");
  EXPECT_TRUE(r.notes.empty());
  // nested: the substituted class is itself an abstract, reduced in turn
  Reduction n = reduce_abstracts(parse_formula("⟨{y | y∈A}⟩ ∈ {⟨𝒳⟩ | ∀x∈B. x∈₁𝒳}"));
  EXPECT_EQ(print(n.formula), "∀x∈B. x∈A");
  // capture: the body's bound x must not capture the free x of the argument
  Reduction c = reduce_abstracts(parse_formula("{z | z∈x} ∈₂ {𝒳 | ∀x∈A. x∈₁𝒳}"));
  EXPECT_EQ(print(c.formula), "∀x1∈A. x1∈x");
  // a tuple of sets into the small-category abstract
  Reduction s = reduce_abstracts(parse_formula(std::string("⟨O, M, s, t, c⟩ ∈₁ ") + corpus::small_category));
  EXPECT_TRUE(is_delta0(s.formula));
  EXPECT_EQ(free_vars(s.formula), (std::set<std::string>{"O", "M", "s", "t", "c"}));
  // mixed tuples are accepted and flagged
  Reduction m = reduce_abstracts(parse_formula("⟨{x | x∈₁𝒜}, ℬ⟩ ∈ {⟨𝒳, 𝒴⟩ | ∀x. (x∈₁𝒳 → x∈₁𝒴)}"));
  ASSERT_EQ(m.notes.size(), 1u);
  EXPECT_NE(m.notes[0].find("mixed"), std::string::npos);
}

TEST(Abstracts, RuleSeven) {
  // membership in a free variable of product type stays as written
  FormP f = parse_formula("⟨{x | x∈₁𝒜}, ℬ⟩ ∈ 𝔓:Collection[Class×Class]");
  Reduction r = reduce_abstracts(f);
  EXPECT_TRUE(same(r.formula, f));
  EXPECT_THROW(parse_formula("⟨{x | x∈₁𝒜}, ℬ, 𝒞⟩ ∈ 𝔓:Collection[Class×Class]"), SortError);
}

TEST(Abstracts, ReductionKeepsSetTheoreticity) {
  auto g = rng(47);
  FormulaGen gen(g, true);
  Render render(g);
  for (int i = 0; i < 150; ++i) {
    std::string body = render.form(gen.formula(3));
    std::string arg = render.form(gen.formula(2));
    FormP f = parse_formula("⟨{w | " + arg + "}, ℬ⟩ ∈ {⟨𝒳, 𝒴⟩ | " + body + " ∧ ∀q. (q∈₁𝒳 → q∈₁𝒴)}");
    Reduction r = reduce_abstracts(f);
    EXPECT_EQ(is_set_theoretic(r.formula), is_set_theoretic(f)) << print(f);
    EXPECT_FALSE(has_abstract(r.formula)) << print(r.formula);
  }
}

TEST(Separation, Instances) {
  EXPECT_TRUE(separation_instance(parse_term(corpus::bounded_separation)).licensed);
  SeparationVerdict v = separation_instance(parse_term(corpus::iterated_powerset));
  EXPECT_FALSE(v.licensed);
  ASSERT_FALSE(v.reasons.empty());
  EXPECT_EQ(v.reasons[0], "unbounded ∃f");
  EXPECT_TRUE(separation_instance(parse_term("{y∈𝒫(ℕ×ℝ) | (∀p∈y. ∃a∈ℕ. ∃b∈ℝ. p=⟨a, b⟩) ∧ ∀a∈ℕ. ∃!b∈ℝ. ⟨a, b⟩∈y}"))
                  .licensed);
  SeparationVerdict c = separation_instance(parse_term("{x∈A | x∈₁𝒜}"));
  EXPECT_FALSE(c.licensed);
  EXPECT_THROW(separation_instance(parse_term("{x | x∈A}")), SortError);
}
