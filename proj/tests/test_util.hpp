#pragma once

#include <cstdint>
#include <vector>

#include "dks/graph.hpp"

namespace dks::testing {

inline Graph complete(std::size_t n, std::size_t extra_isolated = 0) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.push_back({u, v});
  return Graph(n + extra_isolated, std::move(e));
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u) e.push_back({u, static_cast<Vertex>((u + 1) % n)});
  return Graph(n, std::move(e));
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u + 1 < n; ++u) e.push_back({u, u + 1});
  return Graph(n, std::move(e));
}

// Center 0, leaves 1..leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.push_back({0, v});
  return Graph(leaves + 1, std::move(e));
}

inline Graph matching(std::size_t pairs) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < pairs; ++i) e.push_back({2 * i, 2 * i + 1});
  return Graph(2 * pairs, std::move(e));
}


// Graph on n vertices from the bits of `mask` over the pairs (u < v) in
// lexicographic order.
inline Graph from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Edge> e;
  int bit = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v, ++bit)
      if (mask >> bit & 1) e.push_back({u, v});
  return Graph(n, std::move(e));
}

// Hand count of edges with both ends in s, straight from the edge list.
inline std::size_t count_edges_inside(const Graph& g, const VertexSet& s) {
  std::size_t c = 0;
  for (const auto& e : g.edges()) c += s.contains(e.u) && s.contains(e.v);
  return c;
}

}  // namespace dks::testing
