#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "support.hpp"

// Random formulas kept as a test-side tree, rendered to text for the parser.
// The Δ0 and set-theoretic verdicts are computed on the tree, independently of the library.
namespace gwtest {

struct GTerm {
  enum Kind { Var, Pow, Pair, Union, Sep } kind = Var;
  std::string name;
  std::vector<std::shared_ptr<GTerm>> args;
  std::shared_ptr<struct GForm> body; // Sep
};

struct GForm {
  enum Kind { In, Eq, Sub, Less, Not, And, Or, Imp, Iff, All, Ex, ExU, In1, ClassAll } kind = In;
  std::shared_ptr<GTerm> l, r;
  std::shared_ptr<GForm> a, b;
  std::string var;
  std::shared_ptr<GTerm> bound; // null for unbounded quantifiers
};

using GTermP = std::shared_ptr<GTerm>;
using GFormP = std::shared_ptr<GForm>;

class FormulaGen {
public:
  explicit FormulaGen(std::mt19937_64 &g, bool classes = false) : g_(g), classes_(classes) {}

  GFormP formula(int depth) {
    long pick = uniform(g_, 0, depth <= 0 ? 1 : classes_ ? 13 : 11);
    auto f = std::make_shared<GForm>();
    switch (pick) {
    case 0:
    case 1: return atom(depth);
    case 2:
      f->kind = GForm::Not;
      f->a = formula(depth - 1);
      return f;
    case 3:
    case 4:
    case 5:
    case 6:
      f->kind = pick == 3 ? GForm::And : pick == 4 ? GForm::Or : pick == 5 ? GForm::Imp : GForm::Iff;
      f->a = formula(depth - 1);
      f->b = formula(depth - 1);
      return f;
    case 7:
    case 8:
    case 9: { // quantifier, bounded or not
      f->kind = pick == 7 ? GForm::All : pick == 8 ? GForm::Ex : GForm::ExU;
      f->var = var();
      if (uniform(g_, 0, 2) != 0) f->bound = term(depth - 1);
      f->a = formula(depth - 1);
      return f;
    }
    case 10:
    case 11: { // deliberate sugar shape ∀v.(v∈t → φ) / ∃v.(v∈t ∧ φ)
      f->kind = pick == 10 ? GForm::All : GForm::Ex;
      f->var = var();
      auto m = std::make_shared<GForm>();
      m->kind = GForm::In;
      m->l = std::make_shared<GTerm>(GTerm{GTerm::Var, f->var, {}, {}});
      m->r = term(depth - 1);
      auto c = std::make_shared<GForm>();
      c->kind = pick == 10 ? GForm::Imp : GForm::And;
      c->a = m;
      c->b = formula(depth - 1);
      f->a = c;
      return f;
    }
    case 12: { // membership in a class
      f->kind = GForm::In1;
      f->l = term(0);
      f->r = std::make_shared<GTerm>(GTerm{GTerm::Var, uniform(g_, 0, 1) ? "𝒜" : "ℬ", {}, {}});
      return f;
    }
    default: { // quantifier over classes
      f->kind = GForm::ClassAll;
      f->var = uniform(g_, 0, 1) ? "𝒳" : "𝒴";
      f->a = formula(depth - 1);
      return f;
    }
    }
  }

private:
  std::string var() {
    static const char *names[] = {"x", "y", "z", "u", "v", "A", "B"};
    return names[uniform(g_, 0, 6)];
  }

  GTermP term(int depth) {
    long pick = uniform(g_, 0, depth <= 0 ? 3 : 5);
    auto t = std::make_shared<GTerm>();
    if (pick <= 2) {
      t->kind = GTerm::Var;
      t->name = var();
    } else if (pick == 3) {
      t->kind = GTerm::Pow;
      t->args = {term(0)};
    } else if (pick == 4) {
      t->kind = uniform(g_, 0, 1) ? GTerm::Pair : GTerm::Union;
      t->args = {term(depth - 1), term(depth - 1)};
    } else {
      t->kind = GTerm::Sep;
      t->name = var();
      t->args = {term(0)};
      t->body = formula(depth - 1);
    }
    return t;
  }

  GFormP atom(int depth) {
    auto f = std::make_shared<GForm>();
    long pick = uniform(g_, 0, 5);
    f->kind = pick <= 2 ? GForm::In : pick == 3 ? GForm::Eq : pick == 4 ? GForm::Sub : GForm::Less;
    f->l = term(depth - 1);
    f->r = term(depth - 1);
    return f;
  }

  std::mt19937_64 &g_;
  bool classes_;
};

// ---- rendering, with ASCII alternatives chosen at random

class Render {
public:
  explicit Render(std::mt19937_64 &g) : g_(g) {}

  std::string term(const GTermP &t) {
    switch (t->kind) {
    case GTerm::Var: return t->name;
    case GTerm::Pow: return alt("𝒫", "pow") + "(" + term(t->args[0]) + ")";
    case GTerm::Pair: return alt("⟨", "<<") + term(t->args[0]) + ", " + term(t->args[1]) + alt("⟩", ">>");
    case GTerm::Union: return "(" + term(t->args[0]) + " " + alt("∪", "cup") + " " + term(t->args[1]) + ")";
    case GTerm::Sep:
      return "{" + t->name + " " + alt("∈", "in") + " " + term(t->args[0]) + " | " + form(t->body) + "}";
    }
    return "";
  }

  std::string form(const GFormP &f) {
    switch (f->kind) {
    case GForm::In: return term(f->l) + " " + alt("∈", "in") + " " + term(f->r);
    case GForm::In1: return term(f->l) + " " + alt("∈₁", "in1") + " " + term(f->r);
    case GForm::Eq: return term(f->l) + " = " + term(f->r);
    case GForm::Sub: return term(f->l) + " " + alt("⊆", "subseteq") + " " + term(f->r);
    case GForm::Less: return term(f->l) + " < " + term(f->r);
    case GForm::Not: return alt("¬", "not ") + "(" + form(f->a) + ")";
    case GForm::And: return "(" + form(f->a) + ") " + alt("∧", "and") + " (" + form(f->b) + ")";
    case GForm::Or: return "(" + form(f->a) + ") " + alt("∨", "or") + " (" + form(f->b) + ")";
    case GForm::Imp: return "(" + form(f->a) + ") " + alt("→", "->") + " (" + form(f->b) + ")";
    case GForm::Iff: return "(" + form(f->a) + ") " + alt("↔", "<->") + " (" + form(f->b) + ")";
    case GForm::ClassAll: return "∀" + f->var + ". (" + form(f->a) + ")";
    default: {
      std::string q = f->kind == GForm::All ? alt("∀", "forall ") : f->kind == GForm::Ex ? alt("∃", "exists ")
                                                                                        : alt("∃!", "exists! ");
      q += f->var;
      if (f->bound) q += " " + alt("∈", "in") + " " + term(f->bound);
      return q + ". (" + form(f->a) + ")";
    }
    }
  }

private:
  std::string alt(const char *u, const char *a) { return uniform(g_, 0, 3) == 0 ? a : u; }
  std::mt19937_64 &g_;
};

// ---- oracles

inline bool occurs(const GTermP &t, const std::string &v);
inline bool occurs(const GFormP &f, const std::string &v);

inline bool occurs(const GTermP &t, const std::string &v) {
  if (t->kind == GTerm::Var) return t->name == v;
  for (const auto &a : t->args)
    if (occurs(a, v)) return true;
  return t->kind == GTerm::Sep && t->name != v && occurs(t->body, v);
}

inline bool occurs(const GFormP &f, const std::string &v) {
  switch (f->kind) {
  case GForm::In:
  case GForm::In1:
  case GForm::Eq:
  case GForm::Sub:
  case GForm::Less: return occurs(f->l, v) || occurs(f->r, v);
  case GForm::Not: return occurs(f->a, v);
  case GForm::And:
  case GForm::Or:
  case GForm::Imp:
  case GForm::Iff: return occurs(f->a, v) || occurs(f->b, v);
  default: return (f->bound && occurs(f->bound, v)) || (f->var != v && occurs(f->a, v));
  }
}

inline bool oracle_delta0(const GFormP &f);

inline bool oracle_delta0(const GTermP &t) {
  for (const auto &a : t->args)
    if (!oracle_delta0(a)) return false;
  return t->kind != GTerm::Sep || oracle_delta0(t->body);
}

/// Recursive definition: atoms are Δ0, connectives preserve it, a quantifier must carry a
/// bound, or have the shape ∀v.(v∈t → φ) / ∃v.(v∈t ∧ φ) with v not in t.
inline bool oracle_delta0(const GFormP &f) {
  switch (f->kind) {
  case GForm::In:
  case GForm::Eq:
  case GForm::Sub:
  case GForm::Less: return oracle_delta0(f->l) && oracle_delta0(f->r);
  case GForm::Not: return oracle_delta0(f->a);
  case GForm::And:
  case GForm::Or:
  case GForm::Imp:
  case GForm::Iff: return oracle_delta0(f->a) && oracle_delta0(f->b);
  case GForm::All:
  case GForm::Ex:
  case GForm::ExU: {
    if (f->bound) return oracle_delta0(f->bound) && oracle_delta0(f->a);
    if (f->kind == GForm::ExU) return false;
    const GFormP &b = f->a;
    GForm::Kind shape = f->kind == GForm::All ? GForm::Imp : GForm::And;
    if (b->kind == shape && b->a->kind == GForm::In && b->a->l->kind == GTerm::Var && b->a->l->name == f->var &&
        !occurs(b->a->r, f->var))
      return oracle_delta0(b->a->r) && oracle_delta0(b->b);
    return false;
  }
  default: return false;
  }
}

inline bool oracle_set_theoretic(const GFormP &f);

inline bool oracle_set_theoretic(const GTermP &t) {
  for (const auto &a : t->args)
    if (!oracle_set_theoretic(a)) return false;
  return t->kind != GTerm::Sep || oracle_set_theoretic(t->body);
}

inline bool oracle_set_theoretic(const GFormP &f) {
  switch (f->kind) {
  case GForm::ClassAll: return false;
  case GForm::In:
  case GForm::In1:
  case GForm::Eq:
  case GForm::Sub:
  case GForm::Less: return oracle_set_theoretic(f->l) && oracle_set_theoretic(f->r);
  case GForm::Not: return oracle_set_theoretic(f->a);
  case GForm::And:
  case GForm::Or:
  case GForm::Imp:
  case GForm::Iff: return oracle_set_theoretic(f->a) && oracle_set_theoretic(f->b);
  default: return (!f->bound || oracle_set_theoretic(f->bound)) && oracle_set_theoretic(f->a);
  }
}

} // namespace gwtest
