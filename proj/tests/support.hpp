#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>

namespace gwtest {

/// Seed for randomized tests; GW_TEST_SEED overrides the fixed default.
inline std::uint64_t seed() {
  if (const char *s = std::getenv("GW_TEST_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(seed() ^ (salt * 0x9E3779B97F4A7C15ull)); }

inline long uniform(std::mt19937_64 &g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

} // namespace gwtest
