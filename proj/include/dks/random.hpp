#pragma once

// Portable seeded randomness. std::mt19937_64 has a fully specified output
// sequence; the distributions below are written out by hand because the
// standard library ones are implementation-defined.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <unordered_set>
#include <vector>

namespace dks {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for trial `index` of a run seeded with `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ (index * 0xd1b54a32d192ed03ULL));
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, bound). bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// k distinct values from [0, n), sorted ascending (Floyd's algorithm).
inline std::vector<std::uint32_t> sample_subset(std::uint32_t n, std::uint32_t k,
                                                Rng& rng) {
  std::unordered_set<std::uint32_t> chosen;
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint32_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(uniform_below(rng, j + 1));
    const std::uint32_t pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Number of failures before the next success of a Bernoulli(p) sequence,
// for 0 < p < 1. Used to skip over non-edges when sampling G(n, p).
inline std::uint64_t geometric_skip(Rng& rng, double log1m_p) {
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  const double skip = std::floor(std::log(u) / log1m_p);
  return skip >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(skip);
}

}  // namespace dks
