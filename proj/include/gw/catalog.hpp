#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gw/frac.hpp"
#include "gw/modres.hpp"
#include "gw/psh.hpp"
#include "gw/shcoh.hpp"
#include "gw/site.hpp"

#ifndef GW_CATALOG_DIR
#define GW_CATALOG_DIR "catalog"
#endif

namespace gw {

/// One file under catalog/: {"name", "kind", "provenance", "payload"}.
struct CatalogEntry {
  std::string name;
  std::string kind; // category, presheaf, site, space, cover, ring, module, sheaf, sigma
  std::string provenance;
  Json payload;
};

inline Json entry_to_json(const CatalogEntry &e) {
  return {{"name", e.name}, {"kind", e.kind}, {"provenance", e.provenance}, {"payload", e.payload}};
}

inline CatalogEntry entry_from_json(const Json &j) {
  CatalogEntry e;
  e.name = json_string(json_field(j, "name"), "name");
  e.kind = json_string(json_field(j, "kind"), "kind");
  e.provenance = j.contains("provenance") ? json_string(j.at("provenance"), "provenance") : "";
  e.payload = json_field(j, "payload");
  return e;
}

/// Canonical text of an entry; catalog files are stored in exactly this form.
inline std::string entry_text(const CatalogEntry &e) { return entry_to_json(e).dump(2) + "\n"; }

inline Json read_json_file(const std::filesystem::path &p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

/// A finite space site: O(X) with its open-cover topology. Covers for Čech are lists of opens.
struct CoverSpec {
  FiniteSpace space;
  std::vector<FiniteSpace::Mask> opens;
};

class Catalog {
public:
  /// GW_CATALOG_DIR from the environment, else the build-time location.
  static std::filesystem::path default_dir() {
    if (const char *d = std::getenv("GW_CATALOG_DIR"); d && *d) return d;
    return GW_CATALOG_DIR;
  }

  explicit Catalog(std::filesystem::path dir = default_dir()) : dir_(std::move(dir)) {}

  const std::filesystem::path &dir() const { return dir_; }

  std::vector<std::string> list() const {
    std::vector<std::string> out;
    if (!std::filesystem::is_directory(dir_)) throw InputError("catalog directory not found: " + dir_.string());
    for (const auto &f : std::filesystem::directory_iterator(dir_))
      if (f.path().extension() == ".json") out.push_back(f.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
  }

  bool contains(const std::string &name) const { return std::filesystem::exists(path(name)); }

  /// Reads and validates an entry. Unknown names are input errors.
  CatalogEntry load(const std::string &name) const {
    CatalogEntry e = raw(name);
    validate(e);
    return e;
  }

  /// Writes the canonical text of `name` to `out`.
  void dump(const std::string &name, const std::filesystem::path &out) const {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write " + out.string());
    f << entry_text(load(name));
  }

  /// Runs the module validator for the entry's kind.
  void validate(const CatalogEntry &e) const {
    const std::string &k = e.kind;
    if (k == "category") category_from_json(e.payload);
    else if (k == "presheaf") presheaf_from_json(e.payload, categories());
    else if (k == "site") site_from_json(e.payload, categories());
    else if (k == "space") space_from_json(e.payload);
    else if (k == "cover") cover_from_json(e.payload);
    else if (k == "ring") ring_from_json(e.payload);
    else if (k == "module") module_from_json(e.payload, rings());
    else if (k == "sheaf") sheaf_from_json(e.payload, spaces());
    else if (k == "sigma") arrow_class_from_json(e.payload, categories());
    else throw InputError(e.name + ": unknown kind \"" + k + "\"");
  }

  CatPtr category(const std::string &name) const { return share(category_from_json(of_kind(name, "category"))); }
  FiniteSpace space(const std::string &name) const { return space_from_json(of_kind(name, "space")); }
  RingPtr ring(const std::string &name) const { return share(ring_from_json(of_kind(name, "ring"))); }
  ModPtr module(const std::string &name) const { return share(module_from_json(of_kind(name, "module"), rings())); }
  Presheaf presheaf(const std::string &name) const { return presheaf_from_json(of_kind(name, "presheaf"), categories()); }
  Topology site(const std::string &name) const { return site_from_json(of_kind(name, "site"), categories()); }
  AbelianSheaf sheaf(const std::string &name) const { return sheaf_from_json(of_kind(name, "sheaf"), spaces()); }
  ArrowClass sigma(const std::string &name) const { return arrow_class_from_json(of_kind(name, "sigma"), categories()); }
  CoverSpec cover(const std::string &name) const { return cover_from_json(of_kind(name, "cover")); }

  /// {"space": ref, "opens": [[points]...]}
  CoverSpec cover_from_json(const Json &j) const {
    CoverSpec c{space_ref_from_json(json_field(j, "space"), spaces()), {}};
    const Json &os = json_field(j, "opens");
    if (!os.is_array()) throw InputError("\"opens\" must be an array");
    for (const auto &o : os) {
      if (!o.is_array()) throw InputError("each open must be an array of points");
      FiniteSpace::Mask m = 0;
      for (const auto &p : o) m |= FiniteSpace::Mask(1) << c.space.point(json_string(p, "point"));
      if (!c.space.is_open(m)) throw ValidationError("NotOpen", "cover member is not open");
      c.opens.push_back(m);
    }
    return c;
  }

  CategoryResolver categories() const {
    return [this](const std::string &n) { return category(n); };
  }
  SpaceResolver spaces() const {
    return [this](const std::string &n) { return space(n); };
  }
  RingResolver rings() const {
    return [this](const std::string &n) { return ring(n); };
  }

  /// Names of all entries of one kind.
  std::vector<std::string> names_of_kind(const std::string &kind) const {
    std::vector<std::string> out;
    for (const auto &n : list())
      if (raw(n).kind == kind) out.push_back(n);
    return out;
  }

  CatalogEntry raw(const std::string &name) const {
    if (!contains(name)) throw InputError("unknown catalog entry \"" + name + "\"");
    CatalogEntry e = entry_from_json(read_json_file(path(name)));
    if (e.name != name) throw InputError(path(name).string() + ": name field is \"" + e.name + "\"");
    return e;
  }

private:
  std::filesystem::path path(const std::string &name) const { return dir_ / (name + ".json"); }

  Json of_kind(const std::string &name, const std::string &kind) const {
    CatalogEntry e = raw(name);
    if (e.kind != kind) throw InputError("catalog entry \"" + name + "\" is a " + e.kind + ", not a " + kind);
    return e.payload;
  }

  std::filesystem::path dir_;
};

} // namespace gw
