#pragma once

#include <algorithm>
#include <functional>
#include <random>

#include "gw/psh.hpp"

namespace gwtest {

/// Presheaves on C with the given fiber sizes, found by backtracking over the
/// action table with functoriality pruning. With `g`, choices are shuffled.
inline std::vector<gw::PshPtr> presheaves_with_sizes(const gw::CatPtr &C, const std::vector<std::size_t> &sizes,
                                                     std::size_t limit, std::mt19937_64 *g = nullptr) {
  const gw::FinCategory &c = *C;
  std::vector<std::string> names;
  std::vector<std::size_t> over;
  std::vector<std::vector<std::size_t>> fib(c.object_count());
  for (std::size_t a = 0; a < c.object_count(); ++a)
    for (std::size_t i = 0; i < sizes[a]; ++i) {
      fib[a].push_back(names.size());
      names.push_back(c.object_name(a) + "." + std::to_string(i));
      over.push_back(a);
    }
  const std::size_t n = c.arrow_count(), npos = gw::Presheaf::npos;
  std::vector<std::size_t> act(names.size() * n, npos);
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t x = 0; x < names.size(); ++x)
    for (std::size_t f : c.arrows_into(over[x])) {
      if (c.is_identity(f)) act[x * n + f] = x;
      else slots.emplace_back(x, f);
    }
  auto consistent = [&]() {
    for (std::size_t x = 0; x < names.size(); ++x)
      for (std::size_t f : c.arrows_into(over[x])) {
        std::size_t y = act[x * n + f];
        if (y == npos) continue;
        for (std::size_t h : c.arrows_into(c.dom(f))) {
          std::size_t z = act[y * n + h], w = act[x * n + c.compose(f, h)];
          if (z != npos && w != npos && z != w) return false;
        }
      }
    return true;
  };
  std::vector<gw::PshPtr> out;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (out.size() >= limit) return;
    if (k == slots.size()) {
      out.push_back(gw::share(gw::Presheaf::from_tables(C, names, over, [&](std::size_t x, std::size_t f) {
        return act[x * n + f];
      })));
      return;
    }
    auto [x, f] = slots[k];
    std::vector<std::size_t> choices = fib[c.dom(f)];
    if (g) std::shuffle(choices.begin(), choices.end(), *g);
    for (std::size_t y : choices) {
      act[x * n + f] = y;
      if (consistent()) rec(k + 1);
    }
    act[x * n + f] = npos;
  };
  rec(0);
  return out;
}

/// All size vectors with entries ≤ m.
inline std::vector<std::vector<std::size_t>> size_vectors(std::size_t objects, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> v(objects, 0);
  for (;;) {
    out.push_back(v);
    std::size_t k = 0;
    while (k < objects && ++v[k] > m) v[k++] = 0;
    if (k == objects) break;
  }
  return out;
}

} // namespace gwtest
