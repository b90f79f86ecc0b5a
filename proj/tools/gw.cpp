// gw: command-line front end. Exit codes: 0 success, 1 semantic failure,
// 2 input error, 3 resource cap.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include <CLI11.hpp>

#include "gw/catalog.hpp"
#include "gw/mttchk.hpp"

using namespace gw;

namespace {

/// Every command fills one of these; text and JSON are two renderings of it.
struct Report {
  std::string command;
  std::vector<std::string> lines;
  Json result = Json::object();
  int exit = 0;

  explicit Report(std::string c) : command(std::move(c)) {}
  void line(std::string s) { lines.push_back(std::move(s)); }
  void fail() { exit = std::max(exit, 1); }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

const Catalog &catalog() {
  static Catalog c;
  return c;
}

// ---- input resolution: a catalog name or a JSON file holding a payload or a full entry

Json payload_of(const std::string &arg, const std::string &kind) {
  if (std::filesystem::is_regular_file(arg)) {
    Json j = read_json_file(arg);
    if (j.is_object() && j.contains("kind") && j.contains("payload")) {
      CatalogEntry e = entry_from_json(j);
      if (e.kind != kind) throw InputError(arg + " is a " + e.kind + ", not a " + kind);
      return e.payload;
    }
    return j;
  }
  CatalogEntry e = catalog().raw(arg);
  if (e.kind != kind) throw InputError("catalog entry \"" + arg + "\" is a " + e.kind + ", not a " + kind);
  return e.payload;
}

CatPtr load_category(const std::string &a) { return share(category_from_json(payload_of(a, "category"))); }
PshPtr load_presheaf(const std::string &a) { return share(presheaf_from_json(payload_of(a, "presheaf"), catalog().categories())); }
Topology load_site(const std::string &a) { return site_from_json(payload_of(a, "site"), catalog().categories()); }
FiniteSpace load_space(const std::string &a) { return space_from_json(payload_of(a, "space")); }
CoverSpec load_cover(const std::string &a) { return catalog().cover_from_json(payload_of(a, "cover")); }
SheafPtr load_sheaf(const std::string &a) { return share(sheaf_from_json(payload_of(a, "sheaf"), catalog().spaces())); }

/// "Z6" or "Z2+Z4" / "Z2xZ4" / "0" as invariant factors.
std::vector<std::int64_t> parse_group(const std::string &s) {
  static const std::regex one("Z/?([0-9]+)");
  std::vector<std::int64_t> out;
  if (s == "0") return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find_first_of("+x", start);
    std::string part = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::smatch m;
    if (!std::regex_match(part, m, one)) throw InputError("group \"" + s + "\": expected Zn, Zn+Zm or 0");
    std::int64_t n = std::stoll(m[1]);
    if (n < 2) throw InputError("group \"" + s + "\": factors must be at least 2");
    out.push_back(n);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

RingPtr load_ring(const std::string &a) {
  if (!std::filesystem::is_regular_file(a) && !catalog().contains(a)) {
    static const std::regex cyc("Z/?([0-9]+)");
    std::smatch m;
    if (std::regex_match(a, m, cyc)) return share(FiniteRing::cyclic(std::stoll(m[1])));
  }
  return share(ring_from_json(payload_of(a, "ring")));
}

/// A catalog module, a module file, "R" for the regular module, or a group on which R acts through Z.
ModPtr load_module(const std::string &a, const RingPtr &R) {
  if (std::filesystem::is_regular_file(a) || (catalog().contains(a) && catalog().raw(a).kind == "module")) {
    ModPtr M = share(module_from_json(payload_of(a, "module"), catalog().rings()));
    if (!(*M->ring() == *R)) throw InputError("module \"" + a + "\" is over a different ring");
    return share(FiniteModule::from_table(R, M->additive(), M->table()));
  }
  if (a == "R") return share(FiniteModule::regular(R));
  return share(FiniteModule::through_integers(R, CyclicProduct(parse_group(a))));
}

/// --sheaf, or --space with --coef (constant) and optional --at (skyscraper).
struct SheafArgs {
  std::string sheaf, space, coef, at;

  void add(CLI::App *c) {
    c->add_option("--sheaf", sheaf, "sheaf (catalog name or file)");
    c->add_option("--space", space, "space for a constant or skyscraper sheaf");
    c->add_option("--coef", coef, "coefficient group, e.g. Z3 or Z2+Z2");
    c->add_option("--at", at, "point of a skyscraper sheaf");
  }

  SheafPtr get(const FiniteSpace *fallback = nullptr) const {
    if (!sheaf.empty()) return load_sheaf(sheaf);
    if (coef.empty()) throw InputError("give --sheaf, or --space with --coef");
    FiniteSpace X;
    if (!space.empty()) X = load_space(space);
    else if (fallback) X = *fallback;
    else throw InputError("--coef needs --space");
    auto f = parse_group(coef);
    return share(at.empty() ? constant_sheaf(X, f) : skyscraper(X, X.point(at), f));
  }
};

Json group_json(const FpAbGroup &G) {
  return {{"group", G.describe()}, {"invariants", factors_to_json(G.invariant_factors())}, {"order", G.order().get_str()}};
}

void cohomology_lines(Report &r, const CohomologyReport &c, const std::string &symbol) {
  Json degrees = Json::array();
  for (std::size_t n = 0; n < c.degrees.size(); ++n) {
    r.line(symbol + "^" + std::to_string(n) + " = " + c.degrees[n].describe());
    degrees.push_back(group_json(c.degrees[n]));
  }
  r.result["degrees"] = degrees;
}

// ---- commands

Report run_validate(const std::vector<std::string> &paths, const std::string &kind) {
  Report r{"validate"};
  Json files = Json::array();
  for (const auto &p : paths) {
    Json f{{"path", p}};
    try {
      Json j = read_json_file(p);
      CatalogEntry e;
      if (j.is_object() && j.contains("kind") && j.contains("payload")) e = entry_from_json(j);
      else if (!kind.empty()) e = {std::filesystem::path(p).stem().string(), kind, "", j};
      else throw InputError(p + ": not a catalog entry; pass --kind");
      f["kind"] = e.kind;
      catalog().validate(e);
      f["valid"] = true;
      r.line(p + ": valid " + e.kind);
    } catch (const ValidationError &v) {
      f["valid"] = false;
      Json vs = Json::array();
      r.line(p + ": invalid");
      for (const auto &x : v.violations()) {
        r.line("  " + x.kind + ": " + x.detail);
        vs.push_back({{"kind", x.kind}, {"detail", x.detail}});
      }
      f["violations"] = vs;
      r.fail();
    } catch (const InputError &e) {
      f["valid"] = false;
      f["error"] = e.what();
      r.line(p + ": input error: " + e.what());
      r.exit = 2;
    }
    files.push_back(f);
  }
  r.result["files"] = files;
  return r;
}

Report run_yoneda(const std::string &psh, const std::string &object) {
  Report r{"yoneda-check"};
  PshPtr F = load_presheaf(psh);
  const FinCategory &C = *F->category();
  Json rows = Json::array();
  for (std::size_t B = 0; B < C.object_count(); ++B) {
    if (!object.empty() && C.object_name(B) != object) continue;
    YonedaReport y = yoneda_check(F, B);
    bool ok = y.transformations == y.elements && y.round_trips;
    r.line(C.object_name(B) + ": |Nat(R_B, F)| = " + std::to_string(y.transformations) +
           ", |F(B)| = " + std::to_string(y.elements) + ", round trip " + (y.round_trips ? "identity" : "NOT identity"));
    rows.push_back({{"object", C.object_name(B)}, {"transformations", y.transformations}, {"elements", y.elements},
                    {"round_trips", y.round_trips}});
    if (!ok) r.fail();
  }
  if (rows.empty()) throw InputError("unknown object \"" + object + "\"");
  r.result["objects"] = rows;
  return r;
}

Json fibers_json(const Presheaf &F) {
  Json fib = Json::object();
  for (std::size_t a = 0; a < F.category()->object_count(); ++a) {
    Json xs = Json::array();
    for (std::size_t x : F.fiber(a)) xs.push_back(F.name(x));
    fib[F.category()->object_name(a)] = xs;
  }
  return fib;
}

void fiber_lines(Report &r, const Presheaf &F, const std::string &label) {
  for (std::size_t a = 0; a < F.category()->object_count(); ++a) {
    std::string s;
    for (std::size_t x : F.fiber(a)) s += (s.empty() ? "" : ", ") + F.name(x);
    r.line(label + "(" + F.category()->object_name(a) + ") = {" + s + "}");
  }
}

Report run_sheafify(const std::string &psh, const std::string &site) {
  Report r{"sheafify"};
  PshPtr F = load_presheaf(psh);
  Topology J = load_site(site);
  Sheafification a = sheafify(F, J);
  fiber_lines(r, *a.sheaf, "aF");
  bool iso = a.unit.is_isomorphism();
  r.line(std::string("unit i_F: ") + (iso ? "isomorphism" : "not an isomorphism"));
  r.result["sheaf"] = fibers_json(*a.sheaf);
  r.result["unit_isomorphism"] = iso;
  return r;
}

Report run_is_sheaf(const std::string &psh, const std::string &site) {
  Report r{"is-sheaf"};
  SheafVerdict v = is_sheaf(load_presheaf(psh), load_site(site));
  r.result["sheaf"] = v.sheaf;
  if (v.sheaf) r.line("sheaf");
  else {
    r.line("not a sheaf: " + v.kind + " on " + v.cover + ": " + v.detail);
    r.result["violation"] = {{"kind", v.kind}, {"cover", v.cover}, {"detail", v.detail}};
    r.fail();
  }
  return r;
}

GodementKind godement_kind(const std::string &s) {
  if (s == "injective") return GodementKind::Injective;
  if (s == "flasque") return GodementKind::Flasque;
  throw InputError("--resolution must be injective or flasque");
}

Report run_cohomology(const SheafArgs &sa, std::size_t nmax, const std::string &kind) {
  Report r{"cohomology"};
  cohomology_lines(r, sheaf_cohomology(sa.get(), nmax, godement_kind(kind)), "H");
  return r;
}

Report run_cech(const SheafArgs &sa, const std::string &cover, std::size_t nmax) {
  Report r{"cech"};
  CoverSpec c = load_cover(cover);
  SheafPtr F = sa.get(&c.space);
  if (!(F->space() == c.space)) throw InputError("sheaf and cover live on different spaces");
  cohomology_lines(r, cech_cohomology(*F, c.opens, nmax), "Ȟ");
  return r;
}

/// {"space", "sheaves": [F′, F, F″], "maps": [{point: matrix}, {point: matrix}]}; missing points are zero maps.
Report run_les(const std::string &file, std::size_t nmax) {
  Report r{"les"};
  Json j = read_json_file(file);
  const Json &sh = json_field(j, "sheaves");
  const Json &mp = json_field(j, "maps");
  if (!sh.is_array() || sh.size() != 3) throw InputError("\"sheaves\" must list F′, F, F″");
  if (!mp.is_array() || mp.size() != 2) throw InputError("\"maps\" must list α and β");
  std::vector<SheafPtr> F;
  for (const auto &s : sh) {
    if (s.is_string()) F.push_back(load_sheaf(s.get<std::string>()));
    else {
      Json p = s;
      if (!p.contains("space") && j.contains("space")) p["space"] = j["space"];
      F.push_back(share(sheaf_from_json(p, catalog().spaces())));
    }
  }
  auto map_of = [&](std::size_t k) {
    const SheafPtr &A = F[k], &B = F[k + 1];
    std::vector<Mat64> ms;
    for (std::size_t p = 0; p < A->point_count(); ++p) {
      const std::string &pt = A->space().point_name(p);
      std::size_t rows = B->stalk(p).rank(), cols = A->stalk(p).rank();
      Mat64 m(rows, cols);
      if (mp[k].contains(pt)) {
        IntMatrix im = int_matrix_from_json(mp[k].at(pt), cols);
        if (im.rows() != rows || im.cols() != cols) throw InputError("map matrix at " + pt + " has the wrong shape");
        for (std::size_t x = 0; x < rows; ++x)
          for (std::size_t y = 0; y < cols; ++y) m(x, y) = im(x, y).get_si();
      }
      ms.push_back(m);
    }
    return SheafMap(A, B, ms);
  };
  LongExactSequence les = long_exact_sequence(map_of(0), map_of(1), nmax);
  Json pos = Json::array();
  for (std::size_t i = 0; i < les.groups.size(); ++i) {
    std::string s = les.labels[i] + " = " + les.groups[i].describe();
    Json p{{"label", les.labels[i]}, {"group", les.groups[i].describe()}};
    if (i < les.exact_at.size()) {
      s += les.exact_at[i] ? "  exact" : "  NOT exact";
      p["exact"] = bool(les.exact_at[i]);
    }
    r.line(s);
    pos.push_back(p);
  }
  r.line(std::string("long exact sequence: ") + (les.exact() ? "exact" : "not exact"));
  r.result["positions"] = pos;
  r.result["exact"] = les.exact();
  if (!les.exact()) r.fail();
  return r;
}

Report run_ext(const std::string &ring, const std::string &mod, const std::string &against, std::size_t nmax) {
  Report r{"ext"};
  RingPtr R = load_ring(ring);
  ExtResult e = ext(load_module(mod, R), load_module(against, R), nmax);
  Json gs = Json::array();
  for (std::size_t n = 0; n < e.groups.size(); ++n) {
    r.line("Ext^" + std::to_string(n) + " = " + e.groups[n].describe() + ", order " + e.groups[n].order().get_str());
    gs.push_back(group_json(e.groups[n]));
  }
  r.result["degrees"] = gs;
  return r;
}

std::string module_text(const FiniteModule &M) {
  return FpAbGroup::describe_factors(M.additive().fp().invariant_factors()) + " (order " + std::to_string(M.size()) + ")";
}

Report run_resolve(const std::string &ring, const std::string &mod, std::size_t length, bool baer) {
  Report r{"resolve"};
  RingPtr R = load_ring(ring);
  InjectiveResolution res = injective_resolution(load_module(mod, R), {.length = length});
  Json terms = Json::array();
  for (std::size_t k = 0; k < res.terms.size(); ++k) {
    std::string s = "I_" + std::to_string(k) + " = " + module_text(*res.terms[k]);
    Json t{{"term", k}, {"order", res.terms[k]->size()}};
    if (baer) {
      bool inj = baer_check(*res.terms[k]).injective;
      s += inj ? ", Baer: injective" : ", Baer: NOT injective";
      t["injective"] = inj;
      if (!inj) r.fail();
    }
    r.line(s);
    terms.push_back(t);
  }
  bool monic = res.first_monic(), exact = res.exact();
  r.line("first map monic: " + yes_no(monic));
  r.line("exact: " + yes_no(exact));
  r.result["terms"] = terms;
  r.result["first_monic"] = monic;
  r.result["exact"] = exact;
  if (!monic || !exact) r.fail();
  return r;
}

Report run_baer(const std::string &ring, const std::string &mod) {
  Report r{"baer"};
  RingPtr R = load_ring(ring);
  ModPtr M = load_module(mod, R);
  BaerVerdict v = baer_check(*M);
  r.result["injective"] = v.injective;
  if (v.injective) r.line("injective: every map from a left ideal extends");
  else {
    r.line("not injective: the map " + v.map + " on the ideal " + v.ideal + " does not extend");
    r.result["ideal"] = v.ideal;
    r.result["map"] = v.map;
    r.fail();
  }
  return r;
}

/// A catalog sigma entry, or comma-separated arrow names over --category.
ArrowClass load_sigma(const std::string &category, const std::string &sigma) {
  if (std::filesystem::is_regular_file(sigma) || (catalog().contains(sigma) && catalog().raw(sigma).kind == "sigma"))
    return arrow_class_from_json(payload_of(sigma, "sigma"), catalog().categories());
  if (category.empty()) throw InputError("--sigma as arrow names needs --category");
  std::vector<std::string> names;
  std::stringstream ss(sigma);
  for (std::string a; std::getline(ss, a, ',');)
    if (!a.empty()) names.push_back(a);
  return ArrowClass::from_names(load_category(category), names);
}

void ore_lines(Report &r, const OreVerdict &v) {
  Json fs = Json::array();
  for (const auto &f : v.failures) {
    r.line("  " + f.kind + ": " + f.detail);
    fs.push_back({{"kind", f.kind}, {"detail", f.detail}});
  }
  r.result["ore"] = v.ok;
  r.result["failures"] = fs;
}

Report run_ore(const std::string &category, const std::string &sigma) {
  Report r{"ore"};
  OreVerdict v = check_ore(load_sigma(category, sigma));
  r.line(v.ok ? "right calculus of fractions: holds" : "right calculus of fractions: fails");
  ore_lines(r, v);
  if (!v.ok) r.fail();
  return r;
}

Report run_localize(const std::string &category, const std::string &sigma) {
  Report r{"localize"};
  ArrowClass S = load_sigma(category, sigma);
  OreVerdict v = check_ore(S);
  if (!v.ok) {
    r.line("cannot localize: right calculus of fractions fails");
    ore_lines(r, v);
    r.fail();
    return r;
  }
  LocalizedCategory L = localize(S);
  Json j = localized_to_json(L);
  for (const auto &[k, ids] : j["homs"].items()) {
    std::string s;
    for (const auto &id : ids) s += (s.empty() ? "" : ", ") + id.get<std::string>();
    r.line(k + " : {" + s + "}");
  }
  for (const auto &[f, q] : j["functor"].items()) r.line("Q(" + f + ") = " + q.get<std::string>());
  r.result["homs"] = j["homs"];
  r.result["functor"] = j["functor"];
  return r;
}

// ---- mtt

enum class MttMode { WellFormed, Delta0, SetTheoretic, Abstract, Reduce };

Report run_mtt_check(const std::string &file, MttMode mode) {
  Report r{"mtt check"};
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  Json items = Json::array();
  std::string text;
  for (std::size_t no = 1; std::getline(in, text); ++no) {
    auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    if (text.back() == '\r') text.pop_back();
    std::string head = std::to_string(no) + ": ";
    Json item{{"line", no}, {"input", text}};
    try {
      if (mode == MttMode::Abstract) {
        mtt::TermP t = mtt::parse_term(text);
        item["canonical"] = mtt::print(t);
        if (t->kind == mtt::TermKind::Separation) {
          mtt::SeparationVerdict v = mtt::separation_instance(t);
          std::string why;
          for (const auto &x : v.reasons) why += (why.empty() ? "" : "; ") + x;
          item["holds"] = v.licensed;
          item["reasons"] = v.reasons;
          r.line(head + (v.licensed ? "bounded separation instance" : "not a bounded separation instance: " + why));
          if (!v.licensed) r.fail();
        } else {
          try {
            mtt::Sort s = mtt::abstract_wf(t);
            item["holds"] = true;
            item["sort"] = s.str();
            r.line(head + "well-formed abstract of sort " + s.str());
          } catch (const ValidationError &v) {
            item["holds"] = false;
            item["reasons"] = Json::array({v.violations().front().detail});
            r.line(head + "not well-formed: " + v.violations().front().detail);
            r.fail();
          }
        }
      } else {
        mtt::FormP f = mtt::parse_formula(text);
        item["canonical"] = mtt::print(f);
        auto verdict = [&](bool holds, const std::string &yes, const std::string &no,
                           const std::vector<std::string> &why) {
          std::string w;
          for (const auto &x : why) w += (w.empty() ? "" : ", ") + x;
          item["holds"] = holds;
          item["reasons"] = why;
          r.line(head + (holds ? yes : no + ": " + w));
          if (!holds) r.fail();
        };
        switch (mode) {
        case MttMode::Delta0: {
          if (auto bad = mtt::non_set_symbol(f)) {
            verdict(false, "", "not Δ0", {"non-set symbol " + *bad});
            break;
          }
          mtt::Delta0Report d = mtt::delta0_report(f);
          std::vector<std::string> why;
          for (const auto &q : d.unbounded) why.push_back("unbounded " + q);
          verdict(d.delta0, "Δ0", "not Δ0", why);
          break;
        }
        case MttMode::SetTheoretic: {
          mtt::SetTheoreticReport s = mtt::set_theoretic_report(f);
          std::vector<std::string> why;
          for (const auto &q : s.offending) why.push_back("quantifies " + q);
          verdict(s.set_theoretic, "set-theoretic", "not set-theoretic", why);
          break;
        }
        case MttMode::Reduce: {
          mtt::Reduction red = mtt::reduce_abstracts(f);
          item["holds"] = true;
          item["reduced"] = mtt::print(red.formula);
          item["notes"] = red.notes;
          std::string s = head + mtt::print(red.formula);
          for (const auto &n : red.notes) s += "  [" + n + "]";
          r.line(s);
          break;
        }
        default:
          item["holds"] = true;
          r.line(head + "well-formed: " + mtt::print(f));
        }
      }
    } catch (const InputError &e) {
      item["error"] = e.what();
      r.line(head + e.what());
      r.exit = 2;
    }
    items.push_back(item);
  }
  r.result["items"] = items;
  return r;
}

// ---- catalog

Report run_catalog_list() {
  Report r{"catalog list"};
  Json es = Json::array();
  for (const auto &n : catalog().list()) {
    CatalogEntry e = catalog().raw(n);
    r.line(n + "  " + e.kind);
    es.push_back({{"name", n}, {"kind", e.kind}});
  }
  r.result["entries"] = es;
  return r;
}

Report run_catalog_show(const std::string &name) {
  Report r{"catalog show"};
  CatalogEntry e = catalog().load(name);
  std::string text = entry_text(e);
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) r.line(l);
  r.result["entry"] = entry_to_json(e);
  return r;
}

Report run_catalog_dump(const std::string &name, const std::string &path) {
  Report r{"catalog dump"};
  catalog().dump(name, path);
  r.line("wrote " + name + " to " + path);
  r.result["name"] = name;
  r.result["path"] = path;
  return r;
}

void emit(const Report &r, const std::string &format) {
  if (format == "json") {
    Json j{{"command", r.command}, {"exit", r.exit}, {"report", r.lines}, {"result", r.result}};
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto &l : r.lines) std::cout << l << "\n";
  }
}

void emit_error(const std::string &command, const std::string &format, int code, const std::string &msg,
                const std::vector<Violation> &vs = {}) {
  if (format == "json") {
    Json v = Json::array();
    for (const auto &x : vs) v.push_back({{"kind", x.kind}, {"detail", x.detail}});
    Json j{{"command", command}, {"exit", code}, {"error", msg}};
    if (!vs.empty()) j["violations"] = v;
    std::cout << j.dump(2) << "\n";
    return;
  }
  const char *what = code == 2 ? "input error" : code == 3 ? "resource cap exceeded" : "error";
  std::cerr << "gw: " << what << ": " << msg << "\n";
  for (const auto &x : vs) std::cerr << "  " << x.kind << ": " << x.detail << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"gw: finite models for categories, sheaves, cohomology, localization and set-theoretic formulas"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::function<Report()> job;
  std::string command;
  auto sub = [&](const char *name, const char *help) {
    CLI::App *c = app.add_subcommand(name, help);
    c->callback([&command, name] { command = name; });
    return c;
  };

  // validate
  std::vector<std::string> paths;
  std::string kind;
  {
    auto c = sub("validate", "validate JSON files (catalog entries, or raw payloads with --kind)");
    c->add_option("files", paths, "files")->required();
    c->add_option("--kind", kind, "schema kind for raw payloads");
    c->final_callback([&] { job = [&] { return run_validate(paths, kind); }; });
  }
  std::string psh, site, object, category, sigma, cover, file, ring, mod, against, resolution = "injective";
  std::size_t nmax = 2, length = 1;
  bool baer = false;
  SheafArgs sa;
  {
    auto c = sub("yoneda-check", "check Nat(R_B, F) ≅ F(B) for a presheaf");
    c->add_option("--presheaf", psh, "presheaf")->required();
    c->add_option("--object", object, "only this object");
    c->final_callback([&] { job = [&] { return run_yoneda(psh, object); }; });
  }
  {
    auto c = sub("sheafify", "sheafify a presheaf on a site");
    c->add_option("--presheaf", psh, "presheaf")->required();
    c->add_option("--site", site, "site")->required();
    c->final_callback([&] { job = [&] { return run_sheafify(psh, site); }; });
  }
  {
    auto c = sub("is-sheaf", "check the sheaf condition");
    c->add_option("--presheaf", psh, "presheaf")->required();
    c->add_option("--site", site, "site")->required();
    c->final_callback([&] { job = [&] { return run_is_sheaf(psh, site); }; });
  }
  {
    auto c = sub("cohomology", "sheaf cohomology of a finite space");
    sa.add(c);
    c->add_option("--max-degree", nmax, "highest degree");
    c->add_option("--resolution", resolution, "Godement resolution: injective or flasque");
    c->final_callback([&] { job = [&] { return run_cohomology(sa, nmax, resolution); }; });
  }
  {
    auto c = sub("cech", "Čech cohomology for a cover");
    sa.add(c);
    c->add_option("--cover", cover, "cover")->required();
    c->add_option("--max-degree", nmax, "highest degree");
    c->final_callback([&] { job = [&] { return run_cech(sa, cover, nmax); }; });
  }
  {
    auto c = sub("les", "long exact cohomology sequence of a short exact sequence of sheaves");
    c->add_option("file", file, "sequence file")->required();
    c->add_option("--max-degree", nmax, "highest degree");
    c->final_callback([&] { job = [&] { return run_les(file, nmax); }; });
  }
  {
    auto c = sub("ext", "Ext^n_R(M, N) via an injective resolution of N");
    c->add_option("--ring", ring, "ring")->required();
    c->add_option("--module", mod, "first argument M")->required();
    c->add_option("--against", against, "second argument N")->required();
    c->add_option("--max-degree", nmax, "highest degree");
    c->final_callback([&] { job = [&] { return run_ext(ring, mod, against, nmax); }; });
  }
  {
    auto c = sub("resolve", "injective resolution of a module");
    c->add_option("--ring", ring, "ring")->required();
    c->add_option("--module", mod, "module")->required();
    c->add_option("--length", length, "resolution length L");
    c->add_flag("--baer", baer, "run Baer's criterion on every term");
    c->final_callback([&] { job = [&] { return run_resolve(ring, mod, length, baer); }; });
  }
  {
    auto c = sub("baer", "Baer's criterion for a module");
    c->add_option("--ring", ring, "ring")->required();
    c->add_option("--module", mod, "module")->required();
    c->final_callback([&] { job = [&] { return run_baer(ring, mod); }; });
  }
  {
    auto c = sub("localize", "category of fractions C[Σ⁻¹]");
    c->add_option("--category", category, "category");
    c->add_option("--sigma", sigma, "sigma entry, or comma-separated arrow names")->required();
    c->final_callback([&] { job = [&] { return run_localize(category, sigma); }; });
  }
  {
    auto c = sub("ore", "check the right calculus of fractions");
    c->add_option("--category", category, "category");
    c->add_option("--sigma", sigma, "sigma entry, or comma-separated arrow names")->required();
    c->final_callback([&] { job = [&] { return run_ore(category, sigma); }; });
  }
  MttMode mode = MttMode::WellFormed;
  {
    auto m = sub("mtt", "formula checks");
    m->require_subcommand(1);
    auto c = m->add_subcommand("check", "check one formula (or term) per line");
    c->add_option("file", file, "input file")->required();
    auto d0 = c->add_flag_callback("--delta0", [&] { mode = MttMode::Delta0; }, "every quantifier bounded");
    auto st = c->add_flag_callback("--set-theoretic", [&] { mode = MttMode::SetTheoretic; }, "quantifiers over sets only");
    auto ab = c->add_flag_callback("--abstract", [&] { mode = MttMode::Abstract; }, "abstracts and separation terms");
    auto rd = c->add_flag_callback("--reduce", [&] { mode = MttMode::Reduce; }, "eliminate memberships in abstracts");
    d0->excludes(st, ab, rd);
    st->excludes(ab, rd);
    ab->excludes(rd);
    c->final_callback([&] {
      command = "mtt check";
      job = [&] { return run_mtt_check(file, mode); };
    });
  }
  std::string name, out;
  {
    auto k = sub("catalog", "built-in examples");
    k->require_subcommand(1);
    k->add_subcommand("list", "list entries")->final_callback([&] { job = run_catalog_list; });
    auto show = k->add_subcommand("show", "print an entry");
    show->add_option("name", name, "entry")->required();
    show->final_callback([&] { job = [&] { return run_catalog_show(name); }; });
    auto dump = k->add_subcommand("dump", "write an entry's canonical file");
    dump->add_option("name", name, "entry")->required();
    dump->add_option("path", out, "output path")->required();
    dump->final_callback([&] { job = [&] { return run_catalog_dump(name, out); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    Report r = job();
    emit(r, format);
    return r.exit;
  } catch (const ValidationError &e) {
    emit_error(command, format, 1, "validation failed", e.violations());
    return 1;
  } catch (const ResourceCapExceeded &e) {
    emit_error(command, format, 3, e.what());
    return 3;
  } catch (const InputError &e) {
    emit_error(command, format, 2, e.what());
    return 2;
  } catch (const Error &e) {
    emit_error(command, format, 1, e.what());
    return 1;
  }
}
