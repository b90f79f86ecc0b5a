#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gw/error.hpp"

namespace gw {

/// Unvalidated category table, as read from JSON.
struct RawCategory {
  struct Arrow {
    std::string id, dom, cod;
  };
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<std::array<std::string, 3>> compose; // g, f, g∘f
  std::vector<std::pair<std::string, std::string>> identities; // object, arrow
};

/// A finite category with explicit object/arrow sets and a full composition table.
/// Objects and arrows are addressed by dense indices; string ids are kept for I/O.
class FinCategory {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  FinCategory() = default;

  std::size_t object_count() const { return objects_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }
  const std::string &object_name(std::size_t a) const { return objects_.at(a); }
  const std::string &arrow_name(std::size_t f) const { return arrows_.at(f); }
  const std::vector<std::string> &object_names() const { return objects_; }
  const std::vector<std::string> &arrow_names() const { return arrows_; }

  std::size_t object(const std::string &name) const {
    auto it = obj_index_.find(name);
    if (it == obj_index_.end()) throw InputError("unknown object '" + name + "'");
    return it->second;
  }
  std::size_t arrow(const std::string &name) const {
    auto it = arrow_index_.find(name);
    if (it == arrow_index_.end()) throw InputError("unknown arrow '" + name + "'");
    return it->second;
  }
  bool has_object(const std::string &name) const { return obj_index_.count(name) != 0; }
  bool has_arrow(const std::string &name) const { return arrow_index_.count(name) != 0; }

  std::size_t dom(std::size_t f) const { return dom_.at(f); }
  std::size_t cod(std::size_t f) const { return cod_.at(f); }
  std::size_t identity(std::size_t a) const { return ident_.at(a); }
  bool is_identity(std::size_t f) const { return ident_[dom_[f]] == f; }

  /// g ∘ f; requires dom(g) = cod(f).
  std::size_t compose(std::size_t g, std::size_t f) const {
    std::size_t r = comp_[g * arrows_.size() + f];
    if (r == npos) throw InputError("arrows '" + arrows_[g] + "' and '" + arrows_[f] + "' are not composable");
    return r;
  }
  bool composable(std::size_t g, std::size_t f) const { return dom_[g] == cod_[f]; }

  const std::vector<std::size_t> &hom(std::size_t a, std::size_t b) const { return hom_[a * objects_.size() + b]; }
  const std::vector<std::size_t> &arrows_into(std::size_t b) const { return into_[b]; }
  const std::vector<std::size_t> &arrows_from(std::size_t a) const { return from_[a]; }

  /// Two-sided inverse of f, if f is an isomorphism.
  std::optional<std::size_t> inverse(std::size_t f) const {
    for (std::size_t g : hom(cod_[f], dom_[f]))
      if (compose(g, f) == ident_[dom_[f]] && compose(f, g) == ident_[cod_[f]]) return g;
    return std::nullopt;
  }
  bool is_isomorphism(std::size_t f) const { return inverse(f).has_value(); }

  RawCategory to_raw() const {
    RawCategory r;
    r.objects = objects_;
    for (std::size_t f = 0; f < arrows_.size(); ++f) r.arrows.push_back({arrows_[f], objects_[dom_[f]], objects_[cod_[f]]});
    for (std::size_t g = 0; g < arrows_.size(); ++g)
      for (std::size_t f = 0; f < arrows_.size(); ++f)
        if (composable(g, f)) r.compose.push_back({arrows_[g], arrows_[f], arrows_[compose(g, f)]});
    for (std::size_t a = 0; a < objects_.size(); ++a) r.identities.emplace_back(objects_[a], arrows_[ident_[a]]);
    return r;
  }

  friend bool operator==(const FinCategory &a, const FinCategory &b) {
    if (&a == &b) return true;
    return a.objects_ == b.objects_ && a.arrows_ == b.arrows_ && a.dom_ == b.dom_ && a.cod_ == b.cod_ &&
           a.ident_ == b.ident_ && a.comp_ == b.comp_;
  }

  /// Programmatic construction; `finish` runs the full validator.
  class Builder {
  public:
    Builder &object(std::string name) {
      raw_.objects.push_back(std::move(name));
      return *this;
    }
    Builder &arrow(std::string id, std::string dom, std::string cod) {
      raw_.arrows.push_back({std::move(id), std::move(dom), std::move(cod)});
      return *this;
    }
    Builder &identity(std::string obj, std::string id) {
      raw_.arrows.push_back({id, obj, obj});
      raw_.identities.emplace_back(std::move(obj), std::move(id));
      return *this;
    }
    Builder &compose(std::string g, std::string f, std::string gf) {
      raw_.compose.push_back({std::move(g), std::move(f), std::move(gf)});
      return *this;
    }
    const RawCategory &raw() const { return raw_; }
    FinCategory finish() const;

  private:
    RawCategory raw_;
  };

private:
  friend FinCategory validate_category(const RawCategory &raw);

  void index() {
    const std::size_t n = objects_.size();
    hom_.assign(n * n, {});
    into_.assign(n, {});
    from_.assign(n, {});
    for (std::size_t f = 0; f < arrows_.size(); ++f) {
      hom_[dom_[f] * n + cod_[f]].push_back(f);
      into_[cod_[f]].push_back(f);
      from_[dom_[f]].push_back(f);
    }
  }

  std::vector<std::string> objects_, arrows_;
  std::map<std::string, std::size_t> obj_index_, arrow_index_;
  std::vector<std::size_t> dom_, cod_, ident_;
  std::vector<std::size_t> comp_;
  std::vector<std::vector<std::size_t>> hom_, into_, from_;
};

/// Build a category from a raw table, reporting every violated axiom instance.
/// Unknown or duplicate ids are input errors; axiom failures raise ValidationError
/// with kinds MissingComposite, NonAssociative, BadIdentity, EndpointMismatch.
inline FinCategory validate_category(const RawCategory &raw) {
  FinCategory c;
  for (const auto &o : raw.objects) {
    if (!c.obj_index_.emplace(o, c.objects_.size()).second) throw InputError("duplicate object '" + o + "'");
    c.objects_.push_back(o);
  }
  std::vector<Violation> bad;
  for (const auto &a : raw.arrows) {
    if (!c.arrow_index_.emplace(a.id, c.arrows_.size()).second) throw InputError("duplicate arrow '" + a.id + "'");
    c.arrows_.push_back(a.id);
    c.dom_.push_back(c.object(a.dom));
    c.cod_.push_back(c.object(a.cod));
  }
  const std::size_t n = c.arrows_.size();
  constexpr std::size_t npos = FinCategory::npos;
  c.ident_.assign(c.objects_.size(), npos);
  for (const auto &[o, id] : raw.identities) {
    std::size_t a = c.object(o), f = c.arrow(id);
    if (c.ident_[a] != npos) throw InputError("object '" + o + "' has two identities");
    if (c.dom_[f] != a || c.cod_[f] != a) bad.push_back({"EndpointMismatch", "identity " + id + " is not an endomorphism of " + o});
    c.ident_[a] = f;
  }
  c.comp_.assign(n * n, npos);
  for (const auto &[g, f, gf] : raw.compose) {
    std::size_t ig = c.arrow(g), jf = c.arrow(f), k = c.arrow(gf);
    if (c.dom_[ig] != c.cod_[jf]) {
      bad.push_back({"EndpointMismatch", g + " ∘ " + f + " listed but dom(" + g + ") ≠ cod(" + f + ")"});
      continue;
    }
    std::size_t &slot = c.comp_[ig * n + jf];
    if (slot != npos && slot != k) throw InputError("conflicting composites for " + g + " ∘ " + f);
    slot = k;
    if (c.dom_[k] != c.dom_[jf] || c.cod_[k] != c.cod_[ig])
      bad.push_back({"EndpointMismatch", g + " ∘ " + f + " = " + gf + " has wrong endpoints"});
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f)
      if (c.dom_[g] == c.cod_[f] && c.comp_[g * n + f] == npos)
        bad.push_back({"MissingComposite", c.arrows_[g] + " ∘ " + c.arrows_[f]});
  for (std::size_t a = 0; a < c.objects_.size(); ++a) {
    std::size_t e = c.ident_[a];
    if (e == npos) {
      bad.push_back({"BadIdentity", c.objects_[a] + " (no identity)"});
      continue;
    }
    for (std::size_t f = 0; f < n; ++f) {
      if (c.cod_[f] == a && c.comp_[e * n + f] != npos && c.comp_[e * n + f] != f) {
        bad.push_back({"BadIdentity", c.objects_[a] + " (left unit fails on " + c.arrows_[f] + ")"});
        break;
      }
      if (c.dom_[f] == a && c.comp_[f * n + e] != npos && c.comp_[f * n + e] != f) {
        bad.push_back({"BadIdentity", c.objects_[a] + " (right unit fails on " + c.arrows_[f] + ")"});
        break;
      }
    }
  }
  // (h∘g)∘f = h∘(g∘f), over triples where every composite is present and well-typed
  auto ok = [&](std::size_t x, std::size_t y) {
    std::size_t r = c.comp_[x * n + y];
    return r != npos && c.dom_[r] == c.dom_[y] && c.cod_[r] == c.cod_[x];
  };
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t g = 0; g < n; ++g) {
      if (c.dom_[h] != c.cod_[g] || !ok(h, g)) continue;
      std::size_t hg = c.comp_[h * n + g];
      for (std::size_t f = 0; f < n; ++f) {
        if (c.dom_[g] != c.cod_[f] || !ok(g, f)) continue;
        std::size_t gf = c.comp_[g * n + f];
        if (!ok(hg, f) || !ok(h, gf)) continue;
        if (c.comp_[hg * n + f] != c.comp_[h * n + gf])
          bad.push_back({"NonAssociative", "(" + c.arrows_[h] + ", " + c.arrows_[g] + ", " + c.arrows_[f] + ")"});
      }
    }
  if (!bad.empty()) throw ValidationError(std::move(bad));
  c.index();
  return c;
}

inline FinCategory FinCategory::Builder::finish() const { return validate_category(raw_); }

inline FinCategory opposite(const FinCategory &c) {
  RawCategory r = c.to_raw();
  for (auto &a : r.arrows) std::swap(a.dom, a.cod);
  for (auto &t : r.compose) std::swap(t[0], t[1]);
  return validate_category(r);
}

/// The terminal category 1: one object "*", identity "id*".
inline FinCategory terminal_category() { return FinCategory::Builder().object("*").identity("*", "id*").compose("id*", "id*", "id*").finish(); }

inline FinCategory empty_category() { return validate_category(RawCategory{}); }

/// Poset category; arrow x→y exists iff leq(x, y). Arrow ids are "x<=y", identities "id_x".
template <class Leq> FinCategory poset_category(const std::vector<std::string> &elems, Leq leq) {
  FinCategory::Builder b;
  auto name = [&](std::size_t i, std::size_t j) { return i == j ? "id_" + elems[i] : elems[i] + "<=" + elems[j]; };
  for (const auto &e : elems) b.object(e);
  for (std::size_t i = 0; i < elems.size(); ++i) b.identity(elems[i], name(i, i));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (i != j && leq(i, j)) b.arrow(name(i, j), elems[i], elems[j]);
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j)
      for (std::size_t k = 0; k < elems.size(); ++k)
        if (leq(i, j) && leq(j, k)) b.compose(name(j, k), name(i, j), name(i, k));
  return b.finish();
}

/// One-object category from a monoid table; mul[a][b] = a·b read as a ∘ b, element 0 = unit.
inline FinCategory monoid_category(const std::vector<std::string> &names, const std::vector<std::vector<std::size_t>> &mul,
                                   const std::string &object = "*") {
  FinCategory::Builder b;
  b.object(object);
  b.identity(object, names.at(0));
  for (std::size_t i = 1; i < names.size(); ++i) b.arrow(names[i], object, object);
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j) b.compose(names[i], names[j], names.at(mul.at(i).at(j)));
  return b.finish();
}

/// Full subcategory on the listed objects, keeping original ids.
inline FinCategory full_subcategory(const FinCategory &c, const std::vector<std::size_t> &objs) {
  std::vector<bool> keep(c.object_count(), false);
  for (auto o : objs) keep.at(o) = true;
  RawCategory r;
  for (std::size_t a = 0; a < c.object_count(); ++a)
    if (keep[a]) {
      r.objects.push_back(c.object_name(a));
      r.identities.emplace_back(c.object_name(a), c.arrow_name(c.identity(a)));
    }
  for (std::size_t f = 0; f < c.arrow_count(); ++f)
    if (keep[c.dom(f)] && keep[c.cod(f)])
      r.arrows.push_back({c.arrow_name(f), c.object_name(c.dom(f)), c.object_name(c.cod(f))});
  for (std::size_t g = 0; g < c.arrow_count(); ++g)
    for (std::size_t f = 0; f < c.arrow_count(); ++f)
      if (c.composable(g, f) && keep[c.dom(f)] && keep[c.cod(f)] && keep[c.cod(g)])
        r.compose.push_back({c.arrow_name(g), c.arrow_name(f), c.arrow_name(c.compose(g, f))});
  return validate_category(r);
}

using CatPtr = std::shared_ptr<const FinCategory>;
inline CatPtr share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

} // namespace gw
