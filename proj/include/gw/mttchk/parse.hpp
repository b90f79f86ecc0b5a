#pragma once

#include <cctype>
#include <map>
#include <string_view>

#include "gw/mttchk/ast.hpp"

namespace gw::mtt {

namespace detail {

inline bool ident_start(std::uint32_t c) {
  if (c < 0x80) return std::isalpha(int(c)) || c == '_';
  // operators and punctuation outside ASCII
  static const std::set<std::uint32_t> reserved{0x2200, 0x2203, 0x2208, 0x2209, 0x00AC, 0x2227, 0x2228, 0x2192, 0x2194,
                                                0x2286, 0x2282, 0x27E8, 0x27E9, 0x00D7, 0x222A, 0x2229, 0x2205, 0x1D4AB,
                                                0x21D2, 0x21D4, 0x2032, 0x2081, 0x2082};
  if (c >= 0x2080 && c <= 0x2089) return false;
  return !reserved.count(c) && c != 0x00A0 && c != 0x2003 && c != 0x2002;
}

inline bool ident_continue(std::uint32_t c) {
  if (c < 0x80) return std::isalnum(int(c)) || c == '_' || c == '\'';
  if (c >= 0x2080 && c <= 0x2089) return true; // subscript digits
  return c == 0x2032 || ident_start(c);
}

class Parser {
public:
  explicit Parser(std::string src) : s_(std::move(src)) {}

  FormP formula_eof() {
    FormP f = iff();
    ws();
    if (p_ != s_.size()) fail("unexpected input");
    return f;
  }

  TermP term_eof() {
    TermP t = term();
    ws();
    if (p_ != s_.size()) fail("unexpected input");
    return t;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const { throw SyntaxError(p_, msg); }

  void ws() {
    while (p_ < s_.size()) {
      std::size_t len = 0;
      std::uint32_t c = decode(s_, p_, len);
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == 0xA0) p_ += len;
      else break;
    }
  }

  bool at_ident_continue(std::size_t q) const {
    if (q >= s_.size()) return false;
    std::size_t len = 0;
    return ident_continue(decode(s_, q, len));
  }

  /// Exact token; ASCII words must end at a word boundary.
  bool accept(std::string_view tok) {
    ws();
    if (s_.compare(p_, tok.size(), tok) != 0) return false;
    bool word = std::isalpha(static_cast<unsigned char>(tok.back()));
    if (word && at_ident_continue(p_ + tok.size())) return false;
    p_ += tok.size();
    return true;
  }

  bool accept_any(std::initializer_list<std::string_view> toks) {
    for (auto t : toks)
      if (accept(t)) return true;
    return false;
  }

  void expect(std::initializer_list<std::string_view> toks, const char *what) {
    if (!accept_any(toks)) fail(std::string("expected ") + what);
  }

  static bool keyword(const std::string &w) {
    static const std::set<std::string> k{"forall", "exists", "in", "in1", "in2", "notin", "and", "or", "not",
                                         "implies", "iff", "pow", "cup", "cap", "empty", "subseteq"};
    return k.count(w) != 0;
  }

  std::optional<std::string> ident() {
    ws();
    std::size_t q = p_, len = 0;
    if (q >= s_.size() || !ident_start(decode(s_, q, len))) return std::nullopt;
    q += len;
    while (q < s_.size() && ident_continue(decode(s_, q, len))) q += len;
    std::string w = s_.substr(p_, q - p_);
    if (keyword(w) || w == "Set" || w == "Class" || w == "Collection") return std::nullopt;
    p_ = q;
    return w;
  }

  // ---- sorts

  Sort sort_atom() {
    if (accept("(")) {
      Sort s = sort_product();
      expect({")"}, "')'");
      return s;
    }
    if (accept("Set")) return Sort::set();
    bool cls = accept("Class");
    if (!cls && !accept("Collection")) fail("expected a sort");
    Sort s = cls ? Sort::cls() : Sort::collection();
    if (accept("[")) {
      Sort m = sort_product();
      expect({"]"}, "']'");
      if (!(m == s.member())) s.parts.push_back(m);
    }
    return s;
  }

  Sort sort_product() {
    std::vector<Sort> ps{sort_atom()};
    while (accept_any({"×", "*"})) ps.push_back(sort_atom());
    return ps.size() == 1 ? ps[0] : Sort::product(ps);
  }

  std::optional<Sort> annotation() {
    if (!accept(":")) return std::nullopt;
    return sort_product();
  }

  // ---- terms

  std::optional<Rel> membership() {
    if (accept_any({"∈₁", "in1"})) return Rel::In1;
    if (accept_any({"∈₂", "in2"})) return Rel::In2;
    if (accept_any({"∈", "in"})) return Rel::In;
    return std::nullopt;
  }

  TermP term() {
    TermP t = term_inter();
    while (true) {
      std::size_t at = p_;
      if (!accept_any({"∪", "cup"})) break;
      t = binary(TermKind::Union, t, term_inter(), at);
    }
    return t;
  }

  TermP term_inter() {
    TermP t = term_prod();
    while (true) {
      std::size_t at = p_;
      if (!accept_any({"∩", "cap"})) break;
      t = binary(TermKind::Intersect, t, term_prod(), at);
    }
    return t;
  }

  TermP term_prod() {
    TermP t = term_primary();
    while (true) {
      std::size_t at = p_;
      if (!accept_any({"×", "*"})) break;
      t = binary(TermKind::Product, t, term_primary(), at);
    }
    return t;
  }

  static TermP binary(TermKind k, TermP a, TermP b, std::size_t at) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->args = {std::move(a), std::move(b)};
    t->pos = at;
    return t;
  }

  std::vector<TermP> term_list(std::initializer_list<std::string_view> close, const char *what) {
    std::vector<TermP> out;
    if (accept_any(close)) return out;
    out.push_back(term());
    while (accept(",")) out.push_back(term());
    expect(close, what);
    return out;
  }

  Binder binder() {
    auto name = ident();
    if (!name) fail("expected a variable");
    Binder b{*name, {}, annotation()};
    return b;
  }

  TermP brace(std::size_t at) {
    auto t = std::make_shared<Term>();
    t->pos = at;
    std::size_t save = p_;
    // {⟨v1, …, vn⟩ | φ}
    if (accept_any({"⟨", "<<"})) {
      try {
        std::vector<Binder> vs{binder()};
        while (accept(",")) vs.push_back(binder());
        expect({"⟩", ">>"}, "'⟩'");
        expect({"|"}, "'|'");
        t->kind = TermKind::Abstract;
        t->vars = std::move(vs);
        t->tuple_binder = t->vars.size() > 1;
        t->body = iff();
        expect({"}"}, "'}'");
        return t;
      } catch (const SyntaxError &) {
        p_ = save;
      }
    }
    if (auto name = ident()) {
      std::size_t after = p_;
      Binder b{*name, {}, annotation()};
      if (accept("|")) {
        t->kind = TermKind::Abstract;
        t->vars = {b};
        t->body = iff();
        expect({"}"}, "'}'");
        return t;
      }
      if (accept_any({"∈", "in"}) && !(s_.compare(p_, 3, "₁") == 0 || s_.compare(p_, 3, "₂") == 0)) {
        std::size_t save2 = p_;
        try {
          TermP bound = term();
          if (accept("|")) {
            t->kind = TermKind::Separation;
            t->vars = {b};
            t->args = {bound};
            t->body = iff();
            expect({"}"}, "'}'");
            return t;
          }
        } catch (const SyntaxError &) {
        }
        p_ = save2;
      }
      (void)after;
      p_ = save;
    }
    t->kind = TermKind::SetLit;
    t->args = term_list({"}"}, "'}'");
    return t;
  }

  TermP term_primary() {
    ws();
    std::size_t at = p_;
    if (accept_any({"∅", "empty"})) {
      auto t = std::make_shared<Term>();
      t->kind = TermKind::Empty;
      t->pos = at;
      return t;
    }
    if (accept_any({"𝒫", "pow"})) {
      expect({"("}, "'(' after powerset");
      auto t = std::make_shared<Term>();
      t->kind = TermKind::Powerset;
      t->args = {term()};
      t->pos = at;
      expect({")"}, "')'");
      return t;
    }
    if (accept_any({"⟨", "<<"})) {
      auto t = std::make_shared<Term>();
      t->kind = TermKind::Tuple;
      t->args = term_list({"⟩", ">>"}, "'⟩'");
      if (t->args.empty()) fail("empty tuple");
      t->pos = at;
      return t;
    }
    if (accept("{")) return brace(at);
    if (accept("(")) {
      TermP t = term();
      expect({")"}, "')'");
      return t;
    }
    auto name = ident();
    if (!name) fail("expected a term");
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->name = *name;
    t->annot = annotation();
    t->pos = at;
    return t;
  }

  // ---- formulas

  FormP iff() {
    FormP f = implies();
    while (true) {
      std::size_t at = p_;
      if (!accept_any({"↔", "<->", "⇔", "iff"})) break;
      f = make_binary(FormKind::Iff, f, implies(), at);
    }
    return f;
  }

  FormP implies() {
    FormP f = disj();
    std::size_t at = p_;
    if (accept_any({"→", "->", "⇒", "implies"})) return make_binary(FormKind::Implies, f, implies(), at);
    return f;
  }

  FormP disj() {
    FormP f = conj();
    while (true) {
      std::size_t at = p_;
      if (!accept_any({"∨", "\\/", "or"})) break;
      f = make_binary(FormKind::Or, f, conj(), at);
    }
    return f;
  }

  FormP conj() {
    FormP f = unary();
    while (true) {
      std::size_t at = p_;
      if (!accept_any({"∧", "/\\", "&", "and"})) break;
      f = make_binary(FormKind::And, f, unary(), at);
    }
    return f;
  }

  std::optional<FormKind> quantifier() {
    if (accept_any({"∀", "forall"})) return FormKind::Forall;
    if (accept_any({"∃!", "exists!"})) return FormKind::ExistsUnique;
    if (accept_any({"∃", "exists"})) return FormKind::Exists;
    return std::nullopt;
  }

  /// After "(∀x∈t" either ")" closes a prefix (∀x∈t)φ, or the parentheses wrap the whole quantifier.
  FormP quantified(FormKind k, std::size_t at, bool paren) {
    Binder v = binder();
    std::optional<Rel> br;
    TermP bound;
    if ((br = membership())) bound = term();
    if (paren && accept(")")) return make_quantifier(k, std::move(v), br, std::move(bound), iff(), at);
    accept(".");
    FormP f = make_quantifier(k, std::move(v), br, std::move(bound), iff(), at);
    if (paren) expect({")"}, "')'");
    return f;
  }

  FormP unary() {
    ws();
    std::size_t at = p_;
    if (accept_any({"¬", "~", "not"})) return make_unary(unary(), at);
    if (auto q = quantifier()) return quantified(*q, at, false);
    if (accept("(")) {
      if (auto q = quantifier()) return quantified(*q, at, true);
      p_ = at;
      try {
        return atom();
      } catch (const SyntaxError &) {
        p_ = at;
      }
      accept("(");
      FormP f = iff();
      expect({")"}, "')'");
      return f;
    }
    return atom();
  }

  FormP atom() {
    ws();
    std::size_t at = p_;
    TermP l = term();
    ws();
    std::size_t relpos = p_;
    if (accept_any({"∉", "notin"})) return make_unary(make_atom(Rel::In, l, term(), relpos), at);
    if (auto m = membership()) return make_atom(*m, l, term(), relpos);
    if (accept("=")) return make_atom(Rel::Eq, l, term(), relpos);
    if (accept_any({"⊆", "⊂", "subseteq"})) return make_atom(Rel::Sub, l, term(), relpos);
    if (s_.compare(p_, 1, "<") == 0 && s_.compare(p_, 2, "<-") != 0 && s_.compare(p_, 2, "<<") != 0) {
      ++p_;
      return make_atom(Rel::Less, l, term(), relpos);
    }
    fail("expected a relation (∈, ∈₁, ∈₂, =, ⊆, <)");
  }

  std::string s_;
  std::size_t p_ = 0;
};

// ---- sort resolution ---------------------------------------------------

class Resolver {
public:
  FormP form(const FormP &f) {
    switch (f->kind) {
    case FormKind::Atom: return atom(f);
    case FormKind::Not: return make_unary(form(f->a), f->pos);
    case FormKind::And:
    case FormKind::Or:
    case FormKind::Implies:
    case FormKind::Iff: return make_binary(f->kind, form(f->a), form(f->b), f->pos);
    default: {
      Binder v = f->var;
      v.sort = v.annot ? *v.annot : default_sort(v.name);
      if (v.sort.kind == Sort::Kind::Product) throw SortError(f->pos, "cannot quantify over tuples: " + v.name);
      if (f->kind == FormKind::ExistsUnique && !v.sort.setlike())
        throw SortError(f->pos, "∃! needs identity, which only sets have: " + v.name);
      TermP bound;
      if (f->bound_rel) {
        bound = term(f->bound);
        check_bound(*f->bound_rel, v, bound->sort, f->pos);
      }
      scope_.emplace_back(v.name, v.sort);
      FormP body = form(f->a);
      scope_.pop_back();
      return make_quantifier(f->kind, v, f->bound_rel, bound, body, f->pos);
    }
    }
  }

  TermP term(const TermP &t) {
    auto out = std::make_shared<Term>(*t);
    for (auto &a : out->args) a = term(a);
    switch (t->kind) {
    case TermKind::Var: out->sort = var_sort(t->name, t->annot, t->pos); break;
    case TermKind::Empty: out->sort = Sort::set(); break;
    case TermKind::Powerset:
      need_set(out->args[0], "𝒫 applies to sets");
      out->sort = Sort::set();
      break;
    case TermKind::Union:
    case TermKind::Intersect:
    case TermKind::Product: {
      const Sort &a = out->args[0]->sort, &b = out->args[1]->sort;
      if (a.setlike() && b.setlike()) out->sort = Sort::set();
      else if (a.kind == Sort::Kind::Class && b.kind == Sort::Kind::Class)
        out->sort = t->kind == TermKind::Product ? Sort{Sort::Kind::Class, {Sort::product({a.member(), b.member()})}}
                                                 : Sort::cls();
      else throw SortError(t->pos, "operands must both be sets or both be classes");
      break;
    }
    case TermKind::Tuple: {
      std::vector<Sort> ps;
      for (const auto &a : out->args) {
        if (a->sort.level() > 1) throw SortError(a->pos, "a collection cannot be a tuple component");
        ps.push_back(a->sort);
      }
      out->sort = ps.size() == 1 ? ps[0] : Sort::product(ps);
      break;
    }
    case TermKind::SetLit:
      for (const auto &a : out->args) need_set(a, "set literals list sets");
      out->sort = Sort::set();
      break;
    case TermKind::Separation: {
      need_set(out->args[0], "separation is bounded by a set");
      Binder &v = out->vars[0];
      v.sort = v.annot ? *v.annot : Sort::set();
      if (!v.sort.setlike()) throw SortError(t->pos, "separation variable must be a set");
      scope_.emplace_back(v.name, v.sort);
      out->body = form(t->body);
      scope_.pop_back();
      out->sort = Sort::set();
      break;
    }
    case TermKind::Abstract: {
      std::vector<Sort> es;
      for (auto &v : out->vars) {
        v.sort = v.annot ? *v.annot : default_sort(v.name);
        if (v.sort.level() > 1) throw SortError(t->pos, "collections cannot be abstracted over: " + v.name);
        es.push_back(v.sort);
      }
      Sort e = (!t->tuple_binder && es.size() == 1) ? es[0] : Sort::product(es);
      out->sort = e.level() == 0 ? Sort::cls() : Sort::collection();
      if (!(e == out->sort.member())) out->sort.parts.push_back(e);
      for (const auto &v : out->vars) scope_.emplace_back(v.name, v.sort);
      out->body = form(t->body);
      scope_.resize(scope_.size() - out->vars.size());
      break;
    }
    }
    out->annot.reset();
    return out;
  }

private:
  Sort var_sort(const std::string &name, const std::optional<Sort> &annot, std::size_t pos) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) {
        if (annot && !(*annot == it->second))
          throw SortError(pos, name + " is bound with sort " + it->second.str() + ", annotated " + annot->str());
        return it->second;
      }
    auto f = free_.find(name);
    if (f != free_.end()) {
      if (annot && !(*annot == f->second))
        throw SortError(pos, name + " has sort " + f->second.str() + ", annotated " + annot->str());
      return f->second;
    }
    Sort s = annot ? *annot : default_sort(name);
    free_.emplace(name, s);
    return s;
  }

  static void need_set(const TermP &t, const char *why) {
    if (!t->sort.setlike()) throw SortError(t->pos, std::string(why) + ": " + print(t) + " has sort " + t->sort.str());
  }

  static bool compatible(const Sort &actual, const Sort &expected) {
    if (expected.setlike() && expected.kind != Sort::Kind::Product) return actual.setlike();
    if (expected.kind == Sort::Kind::Class) return actual.kind == Sort::Kind::Class;
    if (expected.kind == Sort::Kind::Collection) return actual.kind == Sort::Kind::Collection;
    if (actual.kind != Sort::Kind::Product || actual.parts.size() != expected.parts.size()) {
      // a single set may be a tuple of sets
      return expected.setlike() && actual.setlike() && actual.kind != Sort::Kind::Product;
    }
    for (std::size_t i = 0; i < actual.parts.size(); ++i)
      if (!compatible(actual.parts[i], expected.parts[i])) return false;
    return true;
  }

  static void check_bound(Rel r, const Binder &v, const Sort &b, std::size_t pos) {
    bool ok = (r == Rel::In && b.setlike() && v.sort.setlike()) ||
              (r == Rel::In1 && b.kind == Sort::Kind::Class && v.sort.setlike()) ||
              (r == Rel::In2 && b.kind == Sort::Kind::Collection && v.sort.kind == Sort::Kind::Class);
    if (!ok) throw SortError(pos, "bound " + rel_text(r) + " does not fit " + v.name + ":" + v.sort.str() + " in " + b.str());
  }

  FormP atom(const FormP &f) {
    TermP l = term(f->lhs), r = term(f->rhs);
    const Sort &L = l->sort, &R = r->sort;
    auto bad = [&](const std::string &why) {
      throw SortError(f->pos, why + ": " + print(l) + " " + rel_text(f->rel) + " " + print(r));
    };
    switch (f->rel) {
    case Rel::Eq:
      if (!L.setlike() || !R.setlike()) bad("= relates sets only; classes and collections have no identity");
      break;
    case Rel::Less:
      if (!L.setlike() || !R.setlike()) bad("< relates sets only");
      break;
    case Rel::Sub:
      if (!(L.setlike() && R.setlike()) && !(L.kind == Sort::Kind::Class && R.kind == Sort::Kind::Class) &&
          !(L.kind == Sort::Kind::Collection && R.kind == Sort::Kind::Collection))
        bad("⊆ needs two terms of the same sort");
      break;
    default: {
      if (R.setlike()) {
        if (f->rel != Rel::In) bad("membership in a set is ∈");
        if (!L.setlike()) bad("only sets are members of sets");
        break;
      }
      if (R.kind == Sort::Kind::Product) bad("a tuple of classes has no members");
      bool tuple_rule = r->kind == TermKind::Abstract || !R.parts.empty();
      Rel lvl = R.kind == Sort::Kind::Class ? Rel::In1 : Rel::In2;
      if (f->rel != lvl && !(f->rel == Rel::In && tuple_rule))
        bad(std::string("membership in a ") + (lvl == Rel::In1 ? "class is ∈₁" : "collection is ∈₂"));
      if (!compatible(L, R.member())) bad("member sort " + L.str() + " does not match " + R.member().str());
    }
    }
    return make_atom(f->rel, l, r, f->pos);
  }

  std::vector<std::pair<std::string, Sort>> scope_;
  std::map<std::string, Sort> free_;
};

} // namespace detail

/// Parse and sort-check a formula.
inline FormP parse_formula(const std::string &text) {
  detail::Parser p(text);
  FormP raw = p.formula_eof();
  return detail::Resolver().form(raw);
}

/// Parse and sort-check a term (set term, separation, or abstract).
inline TermP parse_term(const std::string &text) {
  detail::Parser p(text);
  TermP raw = p.term_eof();
  return detail::Resolver().term(raw);
}

} // namespace gw::mtt
