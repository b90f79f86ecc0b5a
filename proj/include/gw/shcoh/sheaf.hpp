#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "gw/modres/ring.hpp"
#include "gw/site/sheaf.hpp"
#include "gw/site/space.hpp"

namespace gw {

/// A sheaf of finite abelian groups on a finite space, stored by stalks
/// F_p = F(U_p) and restrictions F_q → F_p for p ∈ U_q. Values on other opens
/// are the limits over their points.
class AbelianSheaf {
public:
  struct Restriction {
    std::size_t from, to;
    Mat64 matrix; // canonical coordinates of F_from → F_to
  };

  AbelianSheaf() = default;

  /// Missing restrictions are composed along chains; all composites must agree.
  static AbelianSheaf make(FiniteSpace X, std::vector<CyclicProduct> stalks, const std::vector<Restriction> &given) {
    AbelianSheaf F;
    const std::size_t n = X.point_count();
    if (stalks.size() != n) throw InputError("one stalk per point required");
    for (const auto &s : stalks)
      for (auto d : s.m)
        if (d < 2) throw InputError("stalk invariant factors must be at least 2");
    F.X_ = std::move(X);
    F.stalks_ = std::move(stalks);
    F.star_.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      auto u = F.X_.minimal_open(q);
      for (std::size_t p = 0; p < n; ++p)
        if (u >> p & 1) F.star_[q].push_back(p);
    }
    F.r_.assign(n * n, std::nullopt);
    std::vector<Violation> bad;
    for (std::size_t q = 0; q < n; ++q) F.r_[q * n + q] = Mat64::identity(F.stalks_[q].rank());
    for (const auto &g : given) {
      if (g.from >= n || g.to >= n) throw InputError("restriction names an unknown point");
      const std::string lbl = F.X_.point_name(g.from) + "→" + F.X_.point_name(g.to);
      if (!F.below(g.to, g.from)) {
        bad.push_back({"NotASpecialization", lbl});
        continue;
      }
      if (g.matrix.rows != F.stalks_[g.to].rank() || g.matrix.cols != F.stalks_[g.from].rank())
        throw InputError("restriction " + lbl + " has the wrong shape");
      Mat64 m = g.matrix;
      for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = CyclicProduct::mod(m(i, j), F.stalks_[g.to].m[i]);
      if (!well_defined(m, F.stalks_[g.from], F.stalks_[g.to])) {
        bad.push_back({"IllDefinedRestriction", lbl});
        continue;
      }
      auto &slot = F.r_[g.from * n + g.to];
      if (slot && !(*slot == m)) bad.push_back({"NotFunctorial", lbl + " given twice"});
      slot = m;
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    // maps into or out of a zero stalk are forced
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p : F.star_[q])
        if (!F.r_[q * n + p] && (F.stalks_[q].rank() == 0 || F.stalks_[p].rank() == 0))
          F.r_[q * n + p] = Mat64(F.stalks_[p].rank(), F.stalks_[q].rank());
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t p : F.star_[q]) {
          if (F.r_[q * n + p]) continue;
          for (std::size_t t : F.star_[q])
            if (F.r_[q * n + t] && F.r_[t * n + p]) {
              F.r_[q * n + p] = mul_mod(*F.r_[t * n + p], *F.r_[q * n + t], F.stalks_[p]);
              grew = true;
              break;
            }
        }
    }
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p : F.star_[q])
        if (!F.r_[q * n + p]) bad.push_back({"MissingRestriction", F.X_.point_name(q) + "→" + F.X_.point_name(p)});
    if (!bad.empty()) throw ValidationError(std::move(bad));
    for (std::size_t q = 0; q < n && bad.size() < 8; ++q)
      for (std::size_t t : F.star_[q])
        for (std::size_t p : F.star_[t])
          if (!(mul_mod(F.restriction(t, p), F.restriction(q, t), F.stalks_[p]) == F.restriction(q, p)))
            bad.push_back({"NotFunctorial", F.X_.point_name(q) + "→" + F.X_.point_name(t) + "→" + F.X_.point_name(p)});
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return F;
  }

  const FiniteSpace &space() const { return X_; }
  std::size_t point_count() const { return stalks_.size(); }
  const CyclicProduct &stalk(std::size_t p) const { return stalks_.at(p); }
  const std::vector<CyclicProduct> &stalks() const { return stalks_; }
  /// p ∈ U_q.
  bool below(std::size_t p, std::size_t q) const { return X_.minimal_open(q) >> p & 1; }
  /// Points of U_q, ascending.
  const std::vector<std::size_t> &star(std::size_t q) const { return star_.at(q); }
  const Mat64 &restriction(std::size_t q, std::size_t p) const {
    const auto &m = r_.at(q * point_count() + p);
    if (!m) throw InputError(X_.point_name(p) + " is not in U_" + X_.point_name(q));
    return *m;
  }

  /// F(U) inside ⊕_{p∈U} F_p (generator order: points ascending, then coordinates).
  Subobject sections(FiniteSpace::Mask U) const {
    if (!X_.is_open(U)) throw InputError("not an open set: " + X_.open_name(U));
    std::vector<std::size_t> pts = points_of(U);
    std::vector<FpAbGroup> src, dst;
    std::map<std::size_t, std::size_t> off;
    std::size_t o = 0;
    for (std::size_t p : pts) {
      off[p] = o;
      o += stalks_[p].rank();
      src.push_back(stalks_[p].fp());
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t q : pts)
      for (std::size_t p : star_[q])
        if (p != q) {
          pairs.push_back({q, p});
          dst.push_back(stalks_[p].fp());
        }
    FpAbGroup S = direct_sum(src).group, T = direct_sum(dst).group;
    IntMatrix m(T.generator_count(), S.generator_count());
    std::size_t row = 0;
    for (auto [q, p] : pairs) {
      m.set_block(row, off[q], restriction(q, p).to_int());
      for (std::size_t i = 0; i < stalks_[p].rank(); ++i) m(row + i, off[p] + i) -= 1;
      row += stalks_[p].rank();
    }
    return kernel(FpMorphism(S, T, m));
  }

  FpAbGroup global_sections() const { return sections(X_.whole()).group; }

  std::vector<std::size_t> points_of(FiniteSpace::Mask U) const {
    std::vector<std::size_t> pts;
    for (std::size_t p = 0; p < point_count(); ++p)
      if (U >> p & 1) pts.push_back(p);
    return pts;
  }

  /// The underlying presheaf of sets on O(X); elements are named "(s_p,…)@U".
  Presheaf to_presheaf(const SpaceSite &site, std::size_t cap = 200000) const {
    const auto &os = X_.opens();
    std::vector<std::vector<std::vector<std::size_t>>> secs(os.size());
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> pos(os.size());
    std::vector<std::string> names;
    std::vector<std::size_t> over;
    for (std::size_t u = 0; u < os.size(); ++u) {
      std::vector<std::size_t> pts = points_of(os[u]);
      enumerate_sections(pts, [&](const std::vector<std::size_t> &s) {
        if (names.size() >= cap) throw ResourceCapExceeded("sheaf has too many sections to list");
        std::string nm = "(";
        for (std::size_t i = 0; i < s.size(); ++i) nm += (i ? "," : "") + stalks_[pts[i]].element_name(s[i]);
        nm += ")@" + X_.open_name(os[u]);
        pos[u][s] = names.size();
        secs[u].push_back(s);
        names.push_back(nm);
        over.push_back(u);
      });
    }
    std::vector<std::size_t> local(names.size());
    for (std::size_t u = 0; u < os.size(); ++u)
      for (std::size_t i = 0; i < secs[u].size(); ++i) local[pos[u][secs[u][i]]] = i;
    const FinCategory &C = *site.category;
    return Presheaf::from_tables(site.category, names, over, [&](std::size_t x, std::size_t f) {
      std::size_t u = C.cod(f), v = C.dom(f);
      const auto &s = secs[u][local[x]];
      std::vector<std::size_t> pu = points_of(os[u]), t;
      for (std::size_t i = 0; i < pu.size(); ++i)
        if (os[v] >> pu[i] & 1) t.push_back(s[i]);
      return pos[v].at(t);
    });
  }

private:
  template <class F> void enumerate_sections(const std::vector<std::size_t> &pts, F &&f) const {
    std::vector<std::size_t> s(pts.size(), 0);
    // points ascending; assign and prune on pairs already assigned
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == pts.size()) {
        f(s);
        return;
      }
      for (std::size_t x = 0; x < stalks_[pts[i]].order(); ++x) {
        s[i] = x;
        bool ok = true;
        for (std::size_t j = 0; j <= i && ok; ++j) {
          std::size_t a = pts[i], b = pts[j];
          if (below(b, a) && apply(a, b, s[i]) != s[j]) ok = false;
          if (below(a, b) && apply(b, a, s[j]) != s[i]) ok = false;
        }
        if (ok) rec(i + 1);
      }
    };
    rec(0);
  }
  std::size_t apply(std::size_t q, std::size_t p, std::size_t x) const {
    return stalks_[p].index(apply_mod(restriction(q, p), stalks_[q].coords(x), stalks_[p]));
  }

  FiniteSpace X_;
  std::vector<CyclicProduct> stalks_;
  std::vector<std::vector<std::size_t>> star_;
  std::vector<std::optional<Mat64>> r_;
};

using SheafPtr = std::shared_ptr<const AbelianSheaf>;
inline SheafPtr share(AbelianSheaf F) { return std::make_shared<const AbelianSheaf>(std::move(F)); }

inline AbelianSheaf constant_sheaf(const FiniteSpace &X, const std::vector<std::int64_t> &A) {
  std::vector<AbelianSheaf::Restriction> r;
  CyclicProduct g(A);
  for (std::size_t q = 0; q < X.point_count(); ++q)
    for (std::size_t p = 0; p < X.point_count(); ++p)
      if (p != q && (X.minimal_open(q) >> p & 1)) r.push_back({q, p, Mat64::identity(g.rank())});
  return AbelianSheaf::make(X, std::vector<CyclicProduct>(X.point_count(), g), r);
}

/// (i_x)_* A: stalk A at q iff x ∈ U_q.
inline AbelianSheaf skyscraper(const FiniteSpace &X, std::size_t x, const std::vector<std::int64_t> &A) {
  std::vector<CyclicProduct> st;
  std::vector<AbelianSheaf::Restriction> r;
  CyclicProduct g(A);
  for (std::size_t q = 0; q < X.point_count(); ++q) st.push_back(X.minimal_open(q) >> x & 1 ? g : CyclicProduct());
  for (std::size_t q = 0; q < X.point_count(); ++q)
    for (std::size_t p = 0; p < X.point_count(); ++p)
      if (p != q && (X.minimal_open(q) >> p & 1)) {
        Mat64 m(st[p].rank(), st[q].rank());
        if (st[p].rank() && st[q].rank()) m = Mat64::identity(g.rank());
        r.push_back({q, p, m});
      }
  return AbelianSheaf::make(X, st, r);
}

inline AbelianSheaf zero_sheaf(const FiniteSpace &X) {
  return AbelianSheaf::make(X, std::vector<CyclicProduct>(X.point_count()), {});
}

/// A morphism of abelian sheaves, by stalk matrices commuting with restrictions.
class SheafMap {
public:
  SheafMap(SheafPtr src, SheafPtr tgt, std::vector<Mat64> stalk)
      : src_(std::move(src)), tgt_(std::move(tgt)), m_(std::move(stalk)) {
    const std::size_t n = src_->point_count();
    if (!(src_->space() == tgt_->space())) throw InputError("sheaf map between different spaces");
    if (m_.size() != n) throw InputError("one stalk matrix per point required");
    std::vector<Violation> bad;
    for (std::size_t p = 0; p < n; ++p) {
      const auto &S = src_->stalk(p), &T = tgt_->stalk(p);
      if (m_[p].rows != T.rank() || m_[p].cols != S.rank()) throw InputError("stalk matrix has the wrong shape");
      for (std::size_t i = 0; i < m_[p].rows; ++i)
        for (std::size_t j = 0; j < m_[p].cols; ++j) m_[p](i, j) = CyclicProduct::mod(m_[p](i, j), T.m[i]);
      if (!well_defined(m_[p], S, T)) bad.push_back({"IllDefinedMap", src_->space().point_name(p)});
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p : src_->star(q))
        if (!(mul_mod(m_[p], src_->restriction(q, p), tgt_->stalk(p)) ==
              mul_mod(tgt_->restriction(q, p), m_[q], tgt_->stalk(p))))
          bad.push_back({"NotNatural", src_->space().point_name(q) + "→" + src_->space().point_name(p)});
    if (!bad.empty()) throw ValidationError(std::move(bad));
  }

  static SheafMap identity(const SheafPtr &F) {
    std::vector<Mat64> m;
    for (const auto &s : F->stalks()) m.push_back(Mat64::identity(s.rank()));
    return SheafMap(F, F, m);
  }

  const AbelianSheaf &source() const { return *src_; }
  const AbelianSheaf &target() const { return *tgt_; }
  const SheafPtr &source_ptr() const { return src_; }
  const SheafPtr &target_ptr() const { return tgt_; }
  const Mat64 &stalk(std::size_t p) const { return m_.at(p); }
  FpMorphism stalk_fp(std::size_t p) const {
    return FpMorphism(src_->stalk(p).fp(), tgt_->stalk(p).fp(), m_.at(p).to_int());
  }

  /// Γ(φ) : Γ(F) → Γ(G).
  FpMorphism on_global_sections() const {
    Subobject a = src_->sections(src_->space().whole()), b = tgt_->sections(tgt_->space().whole());
    const std::size_t n = src_->point_count();
    std::size_t rs = 0, rt = 0;
    for (std::size_t p = 0; p < n; ++p) {
      rs += src_->stalk(p).rank();
      rt += tgt_->stalk(p).rank();
    }
    IntMatrix big(rt, rs);
    for (std::size_t p = 0, i = 0, j = 0; p < n; ++p) {
      big.set_block(i, j, m_[p].to_int());
      i += tgt_->stalk(p).rank();
      j += src_->stalk(p).rank();
    }
    return factor_through(b.inclusion, compose(FpMorphism(a.inclusion.target(), b.inclusion.target(), big), a.inclusion));
  }

private:
  SheafPtr src_, tgt_;
  std::vector<Mat64> m_;
};

inline SheafMap compose(const SheafMap &g, const SheafMap &f) {
  std::vector<Mat64> m;
  for (std::size_t p = 0; p < f.source().point_count(); ++p)
    m.push_back(mul_mod(g.stalk(p), f.stalk(p), g.target().stalk(p)));
  return SheafMap(f.source_ptr(), g.target_ptr(), m);
}

/// Stalkwise exactness of 0 → F′ → F → F″ → 0.
inline void check_short_exact(const SheafMap &a, const SheafMap &b) {
  if (a.target_ptr() != b.source_ptr()) throw InputError("maps do not compose");
  std::vector<Violation> bad;
  for (std::size_t p = 0; p < a.source().point_count(); ++p) {
    const std::string nm = a.source().space().point_name(p);
    FpMorphism fa = a.stalk_fp(p), fb = b.stalk_fp(p);
    if (!is_injective(fa)) bad.push_back({"NotExact", "α not injective at " + nm});
    if (!is_surjective(fb)) bad.push_back({"NotExact", "β not surjective at " + nm});
    if (!compose(fb, fa).is_zero() || kernel(fb).group.order() != image_order(fa))
      bad.push_back({"NotExact", "ker β ≠ im α at " + nm});
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

/// Cokernel sheaf of φ with its projection; stalks are cokernels of φ_p in canonical form.
struct CokernelSheaf {
  SheafPtr sheaf;
  SheafMap projection;
};

inline CokernelSheaf cokernel_sheaf(const SheafMap &phi) {
  const AbelianSheaf &G = phi.target();
  const std::size_t n = G.point_count();
  std::vector<FpAbGroup> Q;
  std::vector<CyclicProduct> st;
  for (std::size_t p = 0; p < n; ++p) {
    Q.push_back(cokernel(phi.stalk_fp(p)).group);
    std::vector<std::int64_t> f;
    for (const auto &d : Q.back().invariant_factors()) f.push_back(d.get_si());
    st.emplace_back(f);
  }
  std::vector<AbelianSheaf::Restriction> rs;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p : G.star(q))
      if (p != q) {
        IntMatrix m = Q[p].coordinate_matrix() * G.restriction(q, p).to_int() * Q[q].lift_matrix();
        rs.push_back({q, p, Mat64::from_int(m, st[p].m)});
      }
  SheafPtr C = share(AbelianSheaf::make(G.space(), st, rs));
  std::vector<Mat64> proj;
  for (std::size_t p = 0; p < n; ++p) proj.push_back(Mat64::from_int(Q[p].coordinate_matrix(), st[p].m));
  return {C, SheafMap(phi.target_ptr(), C, proj)};
}

/// The flasque Godement sheaf G(U) = ∏_{p∈U} F_p with the embedding F → G.
struct FlasqueEmbedding {
  SheafPtr sheaf;
  SheafMap embedding;
};

inline FlasqueEmbedding flasque_godement(const SheafPtr &F) {
  const std::size_t n = F->point_count();
  std::vector<CyclicProduct> st;
  std::vector<std::vector<std::size_t>> off(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::int64_t> f;
    for (std::size_t p : F->star(q)) {
      off[q].push_back(f.size());
      for (auto d : F->stalk(p).m) f.push_back(d);
    }
    st.emplace_back(f);
  }
  std::vector<AbelianSheaf::Restriction> rs;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p : F->star(q)) {
      if (p == q) continue;
      Mat64 m(st[p].rank(), st[q].rank());
      const auto &sp = F->star(p), &sq = F->star(q);
      for (std::size_t i = 0; i < sp.size(); ++i) {
        std::size_t j = std::size_t(std::find(sq.begin(), sq.end(), sp[i]) - sq.begin());
        for (std::size_t x = 0; x < F->stalk(sp[i]).rank(); ++x) m(off[p][i] + x, off[q][j] + x) = 1;
      }
      rs.push_back({q, p, m});
    }
  SheafPtr G = share(AbelianSheaf::make(F->space(), st, rs));
  std::vector<Mat64> e;
  for (std::size_t q = 0; q < n; ++q) {
    Mat64 m(st[q].rank(), F->stalk(q).rank());
    const auto &sq = F->star(q);
    for (std::size_t i = 0; i < sq.size(); ++i) {
      const Mat64 &r = F->restriction(q, sq[i]);
      for (std::size_t x = 0; x < r.rows; ++x)
        for (std::size_t y = 0; y < r.cols; ++y) m(off[q][i] + x, y) = r(x, y);
    }
    e.push_back(m);
  }
  return {G, SheafMap(F, G, e)};
}

} // namespace gw
