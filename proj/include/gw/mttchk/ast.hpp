#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gw/error.hpp"

namespace gw::mtt {

class SyntaxError : public InputError {
public:
  SyntaxError(std::size_t pos, const std::string &msg)
      : InputError("syntax error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

class SortError : public InputError {
public:
  SortError(std::size_t pos, const std::string &msg) : InputError("sort error at " + std::to_string(pos) + ": " + msg) {}
};

/// Set, Class, Collection, or a product. A Class or Collection may record a
/// product member sort in `parts` (a class of n-tuples, a collection of tuples of classes).
struct Sort {
  enum class Kind { Set, Class, Collection, Product };
  Kind kind = Kind::Set;
  std::vector<Sort> parts;

  static Sort set() { return {}; }
  static Sort cls() { return {Kind::Class, {}}; }
  static Sort collection() { return {Kind::Collection, {}}; }
  static Sort product(std::vector<Sort> p) { return {Kind::Product, std::move(p)}; }

  bool operator==(const Sort &) const = default;

  /// 0 for sets and tuples of sets, 1 for classes and tuples with a class, 2 for collections.
  int level() const {
    switch (kind) {
    case Kind::Set: return 0;
    case Kind::Class: return 1;
    case Kind::Collection: return 2;
    case Kind::Product: {
      int l = 0;
      for (const auto &p : parts) l = std::max(l, p.level());
      return l;
    }
    }
    return 0;
  }
  bool setlike() const { return level() == 0; }

  /// Sort of the members of a Class or Collection.
  Sort member() const {
    if (!parts.empty()) return parts.front();
    return kind == Kind::Class ? set() : cls();
  }

  std::string str() const {
    switch (kind) {
    case Kind::Set: return "Set";
    case Kind::Class: return parts.empty() ? "Class" : "Class[" + parts[0].str() + "]";
    case Kind::Collection: return parts.empty() ? "Collection" : "Collection[" + parts[0].str() + "]";
    case Kind::Product: {
      std::string s;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "×";
        s += parts[i].kind == Kind::Product ? "(" + parts[i].str() + ")" : parts[i].str();
      }
      return s;
    }
    }
    return "";
  }
};

/// Sorts a bare name defaults to: script capitals are classes, fraktur capitals collections.
inline Sort default_sort(const std::string &name);

struct Term;
struct Formula;
using TermP = std::shared_ptr<const Term>;
using FormP = std::shared_ptr<const Formula>;

struct Binder {
  std::string name;
  Sort sort;
  std::optional<Sort> annot;
};

enum class TermKind { Var, Empty, Powerset, Union, Intersect, Product, Tuple, SetLit, Separation, Abstract };

struct Term {
  TermKind kind = TermKind::Var;
  std::string name;                 // Var
  std::optional<Sort> annot;        // Var, as written
  std::vector<TermP> args;          // operands, tuple and literal components, separation bound
  std::vector<Binder> vars;         // Separation (one), Abstract (one or more)
  bool tuple_binder = false;        // Abstract written {⟨v1,…,vn⟩ | …}
  FormP body;                       // Separation, Abstract
  Sort sort;                        // filled by resolution
  std::size_t pos = 0;
};

enum class Rel { In, In1, In2, Eq, Sub, Less };
enum class FormKind { Atom, Not, And, Or, Implies, Iff, Forall, Exists, ExistsUnique };

struct Formula {
  FormKind kind = FormKind::Atom;
  Rel rel = Rel::In;
  TermP lhs, rhs;                   // Atom
  FormP a, b;                       // connectives; quantifier body in a
  Binder var;                       // quantifiers
  std::optional<Rel> bound_rel;     // bounded quantifier ∀x∈t, ∀x∈₁𝒜, ∀𝒳∈₂𝔄
  TermP bound;
  std::size_t pos = 0;
};

inline bool is_quantifier(FormKind k) {
  return k == FormKind::Forall || k == FormKind::Exists || k == FormKind::ExistsUnique;
}

inline FormP make_atom(Rel r, TermP l, TermP rr, std::size_t pos = 0) {
  auto f = std::make_shared<Formula>();
  f->kind = FormKind::Atom;
  f->rel = r;
  f->lhs = std::move(l);
  f->rhs = std::move(rr);
  f->pos = pos;
  return f;
}

inline FormP make_unary(FormP x, std::size_t pos = 0) {
  auto f = std::make_shared<Formula>();
  f->kind = FormKind::Not;
  f->a = std::move(x);
  f->pos = pos;
  return f;
}

inline FormP make_binary(FormKind k, FormP x, FormP y, std::size_t pos = 0) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->a = std::move(x);
  f->b = std::move(y);
  f->pos = pos;
  return f;
}

inline FormP make_quantifier(FormKind k, Binder v, std::optional<Rel> br, TermP bound, FormP body, std::size_t pos = 0) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(v);
  f->bound_rel = br;
  f->bound = std::move(bound);
  f->a = std::move(body);
  f->pos = pos;
  return f;
}

inline TermP make_var(std::string name, Sort s, std::size_t pos = 0) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->name = std::move(name);
  t->sort = std::move(s);
  t->pos = pos;
  return t;
}

// ---- code points -------------------------------------------------------

namespace detail {

inline std::uint32_t decode(const std::string &s, std::size_t i, std::size_t &len) {
  auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    len = 1;
    return c;
  }
  int n = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
  if (n == 1 || i + std::size_t(n) > s.size()) throw SyntaxError(i, "invalid UTF-8");
  std::uint32_t cp = c & (0x7F >> n);
  for (int k = 1; k < n; ++k) {
    auto d = static_cast<unsigned char>(s[i + std::size_t(k)]);
    if ((d & 0xC0) != 0x80) throw SyntaxError(i, "invalid UTF-8");
    cp = (cp << 6) | (d & 0x3F);
  }
  len = std::size_t(n);
  return cp;
}

inline bool script_capital(std::uint32_t c) {
  if ((c >= 0x1D49C && c <= 0x1D4B5) || (c >= 0x1D4D0 && c <= 0x1D4E9)) return true;
  for (std::uint32_t x : {0x212Cu, 0x2130u, 0x2131u, 0x210Bu, 0x2110u, 0x2112u, 0x2133u, 0x211Bu})
    if (c == x) return true;
  return false;
}

inline bool fraktur_capital(std::uint32_t c) {
  if ((c >= 0x1D504 && c <= 0x1D51D) || (c >= 0x1D56C && c <= 0x1D585)) return true;
  for (std::uint32_t x : {0x212Du, 0x210Cu, 0x2111u, 0x211Cu, 0x2128u})
    if (c == x) return true;
  return false;
}

} // namespace detail

inline Sort default_sort(const std::string &name) {
  if (name.empty()) return Sort::set();
  std::size_t len = 0;
  std::uint32_t c = detail::decode(name, 0, len);
  if (detail::script_capital(c)) return Sort::cls();
  if (detail::fraktur_capital(c)) return Sort::collection();
  return Sort::set();
}

// ---- printing ----------------------------------------------------------

inline std::string rel_text(Rel r) {
  switch (r) {
  case Rel::In: return "∈";
  case Rel::In1: return "∈₁";
  case Rel::In2: return "∈₂";
  case Rel::Eq: return "=";
  case Rel::Sub: return "⊆";
  case Rel::Less: return "<";
  }
  return "";
}

namespace detail {

inline std::string binder_text(const Binder &b) {
  return b.sort == default_sort(b.name) ? b.name : b.name + ":" + b.sort.str();
}

inline int term_prec(const Term &t) {
  switch (t.kind) {
  case TermKind::Union: return 1;
  case TermKind::Intersect: return 2;
  case TermKind::Product: return 3;
  default: return 4;
  }
}

inline int form_prec(FormKind k) {
  switch (k) {
  case FormKind::Iff: return 1;
  case FormKind::Implies: return 2;
  case FormKind::Or: return 3;
  case FormKind::And: return 4;
  default: return 5;
  }
}

/// Canonical text; bound occurrences print bare, free ones carry a sort when it is not the default.
class Printer {
public:
  std::string term(const TermP &t) {
    auto list = [&](const char *open, const char *close) {
      std::string s = open;
      for (std::size_t i = 0; i < t->args.size(); ++i) s += (i ? ", " : "") + term(t->args[i]);
      return s + close;
    };
    switch (t->kind) {
    case TermKind::Var:
      for (const auto &b : bound_)
        if (b == t->name) return t->name;
      return binder_text({t->name, t->sort, {}});
    case TermKind::Empty: return "∅";
    case TermKind::Powerset: return "𝒫(" + term(t->args[0]) + ")";
    case TermKind::Union: return operand(t->args[0], 1, false) + " ∪ " + operand(t->args[1], 1, true);
    case TermKind::Intersect: return operand(t->args[0], 2, false) + " ∩ " + operand(t->args[1], 2, true);
    case TermKind::Product: return operand(t->args[0], 3, false) + "×" + operand(t->args[1], 3, true);
    case TermKind::Tuple: return list("⟨", "⟩");
    case TermKind::SetLit: return list("{", "}");
    case TermKind::Separation: {
      std::string head = "{" + binder_text(t->vars[0]) + "∈" + term(t->args[0]) + " | ";
      bound_.push_back(t->vars[0].name);
      std::string body = form(t->body);
      bound_.pop_back();
      return head + body + "}";
    }
    case TermKind::Abstract: {
      std::string v;
      for (std::size_t i = 0; i < t->vars.size(); ++i) v += (i ? ", " : "") + binder_text(t->vars[i]);
      if (t->tuple_binder) v = "⟨" + v + "⟩";
      for (const auto &b : t->vars) bound_.push_back(b.name);
      std::string body = form(t->body);
      bound_.resize(bound_.size() - t->vars.size());
      return "{" + v + " | " + body + "}";
    }
    }
    return "";
  }

  std::string form(const FormP &f) {
    switch (f->kind) {
    case FormKind::Atom: {
      std::string l = term(f->lhs), r = term(f->rhs);
      bool spaced = l.find(' ') != std::string::npos || r.find(' ') != std::string::npos;
      return spaced ? l + " " + rel_text(f->rel) + " " + r : l + rel_text(f->rel) + r;
    }
    case FormKind::Not: {
      const FormP &c = f->a;
      bool wrap = is_quantifier(c->kind) || form_prec(c->kind) < 5;
      return "¬" + (wrap ? "(" + form(c) + ")" : form(c));
    }
    case FormKind::And: return child(f->a, f->kind, false) + " ∧ " + child(f->b, f->kind, true);
    case FormKind::Or: return child(f->a, f->kind, false) + " ∨ " + child(f->b, f->kind, true);
    case FormKind::Implies: return child(f->a, f->kind, false) + " → " + child(f->b, f->kind, true);
    case FormKind::Iff: return child(f->a, f->kind, false) + " ↔ " + child(f->b, f->kind, true);
    default: {
      std::string q = prefix(*f);
      bound_.push_back(f->var.name);
      std::string body = form(f->a);
      bound_.pop_back();
      return q + ". " + body;
    }
    }
  }

  std::string prefix(const Formula &f) {
    std::string q = f.kind == FormKind::Forall ? "∀" : f.kind == FormKind::Exists ? "∃" : "∃!";
    q += binder_text(f.var);
    if (f.bound_rel) q += rel_text(*f.bound_rel) + term(f.bound);
    return q;
  }

private:
  std::string operand(const TermP &t, int prec, bool right) {
    int p = term_prec(*t);
    std::string s = term(t);
    return (p < prec || (right && p == prec)) ? "(" + s + ")" : s;
  }

  std::string child(const FormP &c, FormKind parent, bool right) {
    std::string s = form(c);
    if (is_quantifier(c->kind)) return "(" + s + ")";
    int pc = form_prec(c->kind), pp = form_prec(parent);
    bool wrap = pc < pp;
    if (pc == pp && pc < 5) wrap = parent == FormKind::Implies ? !right : right;
    return wrap ? "(" + s + ")" : s;
  }

  std::vector<std::string> bound_;
};

} // namespace detail

inline std::string print(const FormP &f) { return detail::Printer().form(f); }
inline std::string print(const TermP &t) { return detail::Printer().term(t); }

/// Quantifier prefix as written in reports, e.g. "∃P" or "∀y∈𝒫(N)".
inline std::string binder_label(const Formula &f) { return detail::Printer().prefix(f); }

// ---- structural equality -----------------------------------------------

inline bool same(const FormP &a, const FormP &b);

inline bool same(const TermP &a, const TermP &b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->name != b->name || !(a->sort == b->sort) || a->args.size() != b->args.size() ||
      a->vars.size() != b->vars.size() || a->tuple_binder != b->tuple_binder)
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same(a->args[i], b->args[i])) return false;
  for (std::size_t i = 0; i < a->vars.size(); ++i)
    if (a->vars[i].name != b->vars[i].name || !(a->vars[i].sort == b->vars[i].sort)) return false;
  return (!a->body && !b->body) || (a->body && b->body && same(a->body, b->body));
}

inline bool same(const FormP &a, const FormP &b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
  case FormKind::Atom: return a->rel == b->rel && same(a->lhs, b->lhs) && same(a->rhs, b->rhs);
  case FormKind::Not: return same(a->a, b->a);
  case FormKind::And:
  case FormKind::Or:
  case FormKind::Implies:
  case FormKind::Iff: return same(a->a, b->a) && same(a->b, b->b);
  default:
    return a->var.name == b->var.name && a->var.sort == b->var.sort && a->bound_rel == b->bound_rel &&
           same(a->bound, b->bound) && same(a->a, b->a);
  }
}

// ---- free variables ----------------------------------------------------

inline void free_vars(const FormP &f, std::set<std::string> &out);

inline void free_vars(const TermP &t, std::set<std::string> &out) {
  if (t->kind == TermKind::Var) {
    out.insert(t->name);
    return;
  }
  for (const auto &a : t->args) free_vars(a, out);
  if (t->body) {
    std::set<std::string> inner;
    free_vars(t->body, inner);
    for (const auto &v : t->vars) inner.erase(v.name);
    out.insert(inner.begin(), inner.end());
  }
}

inline void free_vars(const FormP &f, std::set<std::string> &out) {
  switch (f->kind) {
  case FormKind::Atom:
    free_vars(f->lhs, out);
    free_vars(f->rhs, out);
    return;
  case FormKind::Not: free_vars(f->a, out); return;
  case FormKind::And:
  case FormKind::Or:
  case FormKind::Implies:
  case FormKind::Iff:
    free_vars(f->a, out);
    free_vars(f->b, out);
    return;
  default: {
    if (f->bound) free_vars(f->bound, out);
    std::set<std::string> inner;
    free_vars(f->a, inner);
    inner.erase(f->var.name);
    out.insert(inner.begin(), inner.end());
  }
  }
}

template <class N> std::set<std::string> free_vars(const N &n) {
  std::set<std::string> out;
  free_vars(n, out);
  return out;
}

} // namespace gw::mtt
