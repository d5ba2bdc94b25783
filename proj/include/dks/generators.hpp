#pragma once

// Seeded random graph generators.

#include <cmath>
#include <cstdint>
#include <vector>

#include "dks/error.hpp"
#include "dks/graph.hpp"
#include "dks/random.hpp"

namespace dks {

// Edges of G(n, p) in lexicographic (u < v) order, drawn by geometric
// skipping so the cost is O(n + m) rather than O(n^2).
inline std::vector<Edge> gnp_edges(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("gen_gnp: p outside [0, 1]");
  std::vector<Edge> edges;
  if (n < 2 || p == 0.0) return edges;
  if (p == 1.0) {
    edges.reserve(n * (n - 1) / 2);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    return edges;
  }
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2 * 1.1) + 16);
  const double log1m_p = std::log1p(-p);
  // Walk the strictly lower triangle row by row: row v holds pairs (w, v), w < v.
  std::uint64_t v = 1;
  std::uint64_t w = 0;
  bool started = false;
  while (v < n) {
    const std::uint64_t skip = geometric_skip(rng, log1m_p);
    if (skip == UINT64_MAX) break;
    w += skip + (started ? 1 : 0);
    started = true;
    while (v < n && w >= v) {
      w -= v;
      ++v;
    }
    if (v < n) edges.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v)});
  }
  return edges;
}

inline Graph gen_gnp(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return Graph(n, gnp_edges(n, p, rng));
}

}  // namespace dks
