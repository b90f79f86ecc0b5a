#pragma once

#include <functional>

#include "gw/mttchk/parse.hpp"

namespace gw::mtt {

// ---- substitution ------------------------------------------------------

using Substitution = std::map<std::string, TermP>;

namespace detail {

inline std::string fresh(const std::string &base, const std::set<std::string> &avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string n = base + std::to_string(i);
    if (!avoid.count(n)) return n;
  }
}

inline std::set<std::string> range_vars(const Substitution &s, const std::set<std::string> &only) {
  std::set<std::string> out;
  for (const auto &[k, t] : s)
    if (only.count(k)) free_vars(t, out);
  return out;
}

} // namespace detail

inline FormP substitute(const FormP &f, const Substitution &s);

inline TermP substitute(const TermP &t, const Substitution &s) {
  if (s.empty()) return t;
  if (t->kind == TermKind::Var) {
    auto it = s.find(t->name);
    return it == s.end() ? t : it->second;
  }
  auto out = std::make_shared<Term>(*t);
  for (auto &a : out->args) a = substitute(a, s);
  if (t->body) {
    Substitution inner = s;
    for (const auto &v : t->vars) inner.erase(v.name);
    std::set<std::string> body_free = free_vars(t->body);
    std::set<std::string> clash = detail::range_vars(inner, body_free);
    std::set<std::string> avoid = clash;
    avoid.insert(body_free.begin(), body_free.end());
    for (auto &v : out->vars)
      if (clash.count(v.name)) {
        std::string n = detail::fresh(v.name, avoid);
        avoid.insert(n);
        inner[v.name] = make_var(n, v.sort);
        v.name = n;
      }
    out->body = substitute(t->body, inner);
  }
  return out;
}

inline FormP substitute(const FormP &f, const Substitution &s) {
  if (s.empty()) return f;
  switch (f->kind) {
  case FormKind::Atom: return make_atom(f->rel, substitute(f->lhs, s), substitute(f->rhs, s), f->pos);
  case FormKind::Not: return make_unary(substitute(f->a, s), f->pos);
  case FormKind::And:
  case FormKind::Or:
  case FormKind::Implies:
  case FormKind::Iff: return make_binary(f->kind, substitute(f->a, s), substitute(f->b, s), f->pos);
  default: {
    TermP bound = f->bound ? substitute(f->bound, s) : nullptr;
    Substitution inner = s;
    inner.erase(f->var.name);
    std::set<std::string> body_free = free_vars(f->a);
    std::set<std::string> clash = detail::range_vars(inner, body_free);
    Binder v = f->var;
    if (clash.count(v.name)) {
      std::set<std::string> avoid = clash;
      avoid.insert(body_free.begin(), body_free.end());
      std::string n = detail::fresh(v.name, avoid);
      inner[v.name] = make_var(n, v.sort);
      v.name = n;
    }
    return make_quantifier(f->kind, v, f->bound_rel, bound, substitute(f->a, inner), f->pos);
  }
  }
}

// ---- traversal helpers -------------------------------------------------

namespace detail {

/// Rebuild bottom-up, applying `rw` to every formula node after its children.
inline FormP rewrite(const FormP &f, const std::function<FormP(const FormP &)> &rw);

inline TermP rewrite(const TermP &t, const std::function<FormP(const FormP &)> &rw) {
  if (t->kind == TermKind::Var) return t;
  auto out = std::make_shared<Term>(*t);
  for (auto &a : out->args) a = rewrite(a, rw);
  if (t->body) out->body = rewrite(t->body, rw);
  return out;
}

inline FormP rewrite(const FormP &f, const std::function<FormP(const FormP &)> &rw) {
  FormP g;
  switch (f->kind) {
  case FormKind::Atom: g = make_atom(f->rel, rewrite(f->lhs, rw), rewrite(f->rhs, rw), f->pos); break;
  case FormKind::Not: g = make_unary(rewrite(f->a, rw), f->pos); break;
  case FormKind::And:
  case FormKind::Or:
  case FormKind::Implies:
  case FormKind::Iff: g = make_binary(f->kind, rewrite(f->a, rw), rewrite(f->b, rw), f->pos); break;
  default:
    g = make_quantifier(f->kind, f->var, f->bound_rel, f->bound ? rewrite(f->bound, rw) : nullptr, rewrite(f->a, rw),
                        f->pos);
  }
  return rw(g);
}

/// Visit every quantifier, including those inside separation and abstract bodies.
inline void each_quantifier(const FormP &f, const std::function<void(const Formula &)> &visit);

inline void each_quantifier(const TermP &t, const std::function<void(const Formula &)> &visit) {
  for (const auto &a : t->args) each_quantifier(a, visit);
  if (t->body) each_quantifier(t->body, visit);
}

inline void each_quantifier(const FormP &f, const std::function<void(const Formula &)> &visit) {
  switch (f->kind) {
  case FormKind::Atom:
    each_quantifier(f->lhs, visit);
    each_quantifier(f->rhs, visit);
    return;
  case FormKind::Not: each_quantifier(f->a, visit); return;
  case FormKind::And:
  case FormKind::Or:
  case FormKind::Implies:
  case FormKind::Iff:
    each_quantifier(f->a, visit);
    each_quantifier(f->b, visit);
    return;
  default:
    visit(*f);
    if (f->bound) each_quantifier(f->bound, visit);
    each_quantifier(f->a, visit);
  }
}

inline void each_term(const FormP &f, const std::function<void(const Term &)> &visit);

inline void each_term(const TermP &t, const std::function<void(const Term &)> &visit) {
  visit(*t);
  for (const auto &a : t->args) each_term(a, visit);
  if (t->body) each_term(t->body, visit);
}

inline void each_term(const FormP &f, const std::function<void(const Term &)> &visit) {
  switch (f->kind) {
  case FormKind::Atom:
    each_term(f->lhs, visit);
    each_term(f->rhs, visit);
    return;
  case FormKind::Not: each_term(f->a, visit); return;
  case FormKind::And:
  case FormKind::Or:
  case FormKind::Implies:
  case FormKind::Iff:
    each_term(f->a, visit);
    each_term(f->b, visit);
    return;
  default:
    if (f->bound) each_term(f->bound, visit);
    each_term(f->a, visit);
  }
}

} // namespace detail

// ---- normal forms ------------------------------------------------------

/// ∀x.(x∈t → φ) ⇒ ∀x∈t. φ and ∃x.(x∈t ∧ φ) ⇒ ∃x∈t. φ, when x is not free in t.
inline FormP normalize_bounded(const FormP &f) {
  return detail::rewrite(f, [](const FormP &g) -> FormP {
    if ((g->kind != FormKind::Forall && g->kind != FormKind::Exists) || g->bound_rel) return g;
    FormKind shape = g->kind == FormKind::Forall ? FormKind::Implies : FormKind::And;
    const FormP &body = g->a;
    if (body->kind != shape) return g;
    const FormP &m = body->a;
    if (m->kind != FormKind::Atom || (m->rel != Rel::In && m->rel != Rel::In1 && m->rel != Rel::In2)) return g;
    if (m->lhs->kind != TermKind::Var || m->lhs->name != g->var.name) return g;
    if (free_vars(m->rhs).count(g->var.name)) return g;
    // tuple-typed containers (rule 7) are not bounds
    if (!m->rhs->sort.parts.empty() && m->rhs->sort.kind != Sort::Kind::Product) return g;
    return make_quantifier(g->kind, g->var, m->rel, m->rhs, body->b, g->pos);
  });
}

/// Replace ⊆ by its defining formula for the sort involved.
inline FormP expand_inclusions(const FormP &f) {
  return detail::rewrite(f, [](const FormP &g) -> FormP {
    if (g->kind != FormKind::Atom || g->rel != Rel::Sub) return g;
    std::set<std::string> avoid = free_vars(g->lhs);
    free_vars(g->rhs, avoid);
    const Sort &s = g->lhs->sort;
    if (s.setlike()) {
      std::string z = detail::fresh("z", avoid);
      return make_quantifier(FormKind::Forall, {z, Sort::set(), {}}, Rel::In, g->lhs,
                             make_atom(Rel::In, make_var(z, Sort::set()), g->rhs), g->pos);
    }
    bool cls = s.kind == Sort::Kind::Class;
    Sort m = cls ? Sort::set() : Sort::cls();
    std::string z = detail::fresh(cls ? "z" : "𝒵", avoid);
    Rel r = cls ? Rel::In1 : Rel::In2;
    return make_quantifier(FormKind::Forall, {z, m, {}}, std::nullopt, nullptr,
                           make_binary(FormKind::Implies, make_atom(r, make_var(z, m), g->lhs),
                                       make_atom(r, make_var(z, m), g->rhs)),
                           g->pos);
  });
}

// ---- classification ----------------------------------------------------

/// First variable or abstract of non-set sort, if any.
inline std::optional<std::string> non_set_symbol(const FormP &f) {
  std::optional<std::string> hit;
  detail::each_term(f, [&](const Term &t) {
    if (hit) return;
    if (t.kind == TermKind::Abstract) hit = "abstract " + print(std::make_shared<Term>(t));
    else if (t.kind == TermKind::Var && !t.sort.setlike()) hit = t.name + ":" + t.sort.str();
  });
  detail::each_quantifier(f, [&](const Formula &q) {
    if (!hit && !q.var.sort.setlike()) hit = q.var.name + ":" + q.var.sort.str();
  });
  return hit;
}

struct Delta0Report {
  bool delta0 = true;
  std::vector<std::string> unbounded; // quantifier prefixes, e.g. "∃P"
};

/// Every quantifier bounded by a set term, after recognizing the →/∧ bounded shapes.
/// Requires a formula over sets only.
inline Delta0Report delta0_report(const FormP &f) {
  if (auto bad = non_set_symbol(f)) throw SortError(f->pos, "Δ0 applies to set formulas; found " + *bad);
  Delta0Report r;
  detail::each_quantifier(normalize_bounded(f), [&](const Formula &q) {
    if (!q.bound_rel) r.unbounded.push_back(binder_label(q));
  });
  r.delta0 = r.unbounded.empty();
  return r;
}

inline bool is_delta0(const FormP &f) { return delta0_report(f).delta0; }

struct SetTheoreticReport {
  bool set_theoretic = true;
  std::vector<std::string> offending; // quantifiers over classes or collections
};

/// Quantifiers only over sets, after expanding inclusions; higher-sort free variables allowed.
inline SetTheoreticReport set_theoretic_report(const FormP &f) {
  SetTheoreticReport r;
  detail::each_quantifier(expand_inclusions(f), [&](const Formula &q) {
    if (!q.var.sort.setlike()) r.offending.push_back(binder_label(q));
  });
  r.set_theoretic = r.offending.empty();
  return r;
}

inline bool is_set_theoretic(const FormP &f) { return set_theoretic_report(f).set_theoretic; }

// ---- abstracts ---------------------------------------------------------

/// Sort of a well-formed abstract; its body must be set theoretic.
inline Sort abstract_wf(const TermP &a) {
  if (a->kind != TermKind::Abstract) throw SortError(a->pos, "not an abstract: " + print(a));
  SetTheoreticReport r = set_theoretic_report(a->body);
  if (!r.set_theoretic) {
    std::string q;
    for (const auto &o : r.offending) q += (q.empty() ? "" : ", ") + o;
    throw ValidationError("NotSetTheoretic", "abstract body quantifies over " + q);
  }
  return a->sort;
}

struct Reduction {
  FormP formula;
  std::vector<std::string> notes;
};

/// Rule 6′: ⟨A1,…,An⟩ ∈ {⟨v1,…,vn⟩ | Ψ} becomes Ψ(A1,…,An), repeatedly. Memberships in
/// free higher-sort variables (rule 7) are left in place.
inline Reduction reduce_abstracts(const FormP &f) {
  Reduction out;
  std::function<FormP(const FormP &)> step = [&](const FormP &g) -> FormP {
    if (g->kind != FormKind::Atom || g->rhs->kind != TermKind::Abstract) return g;
    if (g->rel != Rel::In && g->rel != Rel::In1 && g->rel != Rel::In2) return g;
    const Term &a = *g->rhs;
    std::vector<TermP> comps;
    if (g->lhs->kind == TermKind::Tuple && g->lhs->args.size() == a.vars.size()) comps = g->lhs->args;
    else if (a.vars.size() == 1) comps = {g->lhs};
    else if (g->lhs->kind == TermKind::Tuple || !g->lhs->sort.setlike())
      throw SortError(g->pos, "arity mismatch: " + print(g->lhs) + " against " + print(g->rhs));
    else {
      out.notes.push_back("kept " + print(g) + ": member is not written as a tuple");
      return g;
    }
    bool abstracts = false, vars = false;
    for (const auto &c : comps) {
      abstracts = abstracts || c->kind == TermKind::Abstract;
      vars = vars || (c->kind == TermKind::Var && !c->sort.setlike());
    }
    if (abstracts && vars) out.notes.push_back("mixed tuple of abstracts and variables in " + print(g));
    Substitution s;
    for (std::size_t i = 0; i < comps.size(); ++i) s[a.vars[i].name] = comps[i];
    return detail::rewrite(substitute(a.body, s), step);
  };
  out.formula = detail::rewrite(f, step);
  return out;
}

// ---- bounded separation ------------------------------------------------

struct SeparationVerdict {
  bool licensed = false;
  std::vector<std::string> reasons;
};

/// {x∈t | φ} is an instance of bounded separation iff φ is Δ0.
inline SeparationVerdict separation_instance(const TermP &sep) {
  if (sep->kind != TermKind::Separation) throw SortError(sep->pos, "not a separation term: " + print(sep));
  SeparationVerdict v;
  if (auto bad = non_set_symbol(sep->body)) {
    v.reasons.push_back("non-set symbol " + *bad);
    return v;
  }
  Delta0Report d = delta0_report(sep->body);
  for (const auto &q : d.unbounded) v.reasons.push_back("unbounded " + q);
  v.licensed = d.delta0;
  return v;
}

} // namespace gw::mtt
