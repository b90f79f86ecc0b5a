#pragma once

#include <algorithm>
#include <functional>
#include <string>

#include "gw/fincat.hpp"

// Every category on at most `max_objects` objects with at most `max_arrows`
// arrows, by backtracking over composition tables. Objects are ordered by
// hom-size signature to cut object relabelings; arrow relabelings inside a
// hom-set are not quotiented out.
namespace gwtest {

inline void enumerate_categories(std::size_t max_objects, std::size_t max_arrows,
                                 const std::function<void(const gw::FinCategory &)> &visit) {
  for (std::size_t m = 1; m <= max_objects; ++m) {
    std::vector<std::size_t> h(m * m, 0);
    // hom sizes: diagonal ≥ 1
    std::function<void(std::size_t, std::size_t)> sizes = [&](std::size_t k, std::size_t used) {
      if (k == m * m) {
        // object relabelings: keep the lexicographically least size vector
        std::vector<std::size_t> perm(m);
        for (std::size_t i = 0; i < m; ++i) perm[i] = i;
        while (std::next_permutation(perm.begin(), perm.end())) {
          std::vector<std::size_t> q(m * m);
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) q[perm[i] * m + perm[j]] = h[i * m + j];
          if (q < h) return;
        }
        // arrows: (dom, cod, index within hom)
        struct A {
          std::size_t dom, cod;
          std::string name;
        };
        std::vector<A> arrows;
        std::vector<std::vector<std::size_t>> hom(m * m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < h[i * m + j]; ++t) {
              hom[i * m + j].push_back(arrows.size());
              std::string nm = i == j && t == 0 ? "id" + std::to_string(i)
                                                : "f" + std::to_string(i) + std::to_string(j) + "_" + std::to_string(t);
              arrows.push_back({i, j, nm});
            }
        const std::size_t n = arrows.size(), npos = SIZE_MAX;
        std::vector<std::size_t> comp(n * n, npos);
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t g = 0; g < n; ++g)
          for (std::size_t f = 0; f < n; ++f) {
            if (arrows[f].cod != arrows[g].dom) continue;
            if (hom[arrows[g].dom * m + arrows[g].dom][0] == g) comp[g * n + f] = f;
            else if (hom[arrows[f].dom * m + arrows[f].dom][0] == f) comp[g * n + f] = g;
            else if (hom[arrows[f].dom * m + arrows[g].cod].empty()) return;
            else slots.emplace_back(g, f);
          }
        auto assoc_ok = [&](std::size_t g, std::size_t f) {
          // triples involving the pair (g, f) in either position
          for (std::size_t e = 0; e < n; ++e) {
            if (arrows[e].cod == arrows[f].dom) {
              std::size_t gf = comp[g * n + f], fe = comp[f * n + e];
              if (gf != npos && fe != npos) {
                std::size_t l = comp[gf * n + e], r = comp[g * n + fe];
                if (l != npos && r != npos && l != r) return false;
              }
            }
            if (arrows[e].dom == arrows[g].cod) {
              std::size_t eg = comp[e * n + g], gf = comp[g * n + f];
              if (eg != npos && gf != npos) {
                std::size_t l = comp[eg * n + f], r = comp[e * n + gf];
                if (l != npos && r != npos && l != r) return false;
              }
            }
          }
          return true;
        };
        auto full_check = [&]() {
          for (std::size_t c = 0; c < n; ++c)
            for (std::size_t b = 0; b < n; ++b) {
              if (arrows[b].cod != arrows[c].dom) continue;
              for (std::size_t a = 0; a < n; ++a)
                if (arrows[a].cod == arrows[b].dom &&
                    comp[comp[c * n + b] * n + a] != comp[c * n + comp[b * n + a]])
                  return false;
            }
          return true;
        };
        std::function<void(std::size_t)> fill = [&](std::size_t k) {
          if (k == slots.size()) {
            if (!full_check()) return;
            gw::FinCategory::Builder b;
            for (std::size_t i = 0; i < m; ++i) b.object(std::to_string(i));
            for (std::size_t i = 0; i < m; ++i) b.identity(std::to_string(i), arrows[hom[i * m + i][0]].name);
            for (const auto &a : arrows)
              if (a.name[0] == 'f') b.arrow(a.name, std::to_string(a.dom), std::to_string(a.cod));
            for (std::size_t g = 0; g < n; ++g)
              for (std::size_t f = 0; f < n; ++f)
                if (comp[g * n + f] != npos) b.compose(arrows[g].name, arrows[f].name, arrows[comp[g * n + f]].name);
            visit(b.finish());
            return;
          }
          auto [g, f] = slots[k];
          for (std::size_t c : hom[arrows[f].dom * m + arrows[g].cod]) {
            comp[g * n + f] = c;
            if (assoc_ok(g, f)) fill(k + 1);
          }
          comp[g * n + f] = npos;
        };
        fill(0);
        return;
      }
      std::size_t i = k / m, j = k % m;
      for (std::size_t s = (i == j ? 1 : 0); used + s <= max_arrows; ++s) {
        h[k] = s;
        sizes(k + 1, used + s);
      }
      h[k] = 0;
    };
    sizes(0, 0);
  }
}

} // namespace gwtest
