#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dks/graph.hpp"

namespace dks {

struct SolveResult {
  VertexSet vertices;
  double density = 0.0;    // average degree of vertices in the host graph
  std::string provenance;  // e.g. "greedy", "local:t=3:leaves=4,9"
  double gamma = 1.0;      // greedy baseline max{D k / n, 1}
  std::optional<double> target_ratio;
  std::optional<std::pair<int, int>> rs;
};

inline SolveResult make_result(const Graph& g, VertexSet vertices, std::string provenance) {
  SolveResult r;
  r.density = average_degree(g, vertices);
  r.vertices = std::move(vertices);
  r.provenance = std::move(provenance);
  return r;
}

// Total order used to pick among candidates: higher density first, then
// fewer vertices, then the lexicographically smaller vertex list.
inline bool better_than(const SolveResult& a, const SolveResult& b) {
  if (a.density != b.density) return a.density > b.density;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

inline void keep_better(SolveResult& best, SolveResult candidate) {
  if (better_than(candidate, best)) best = std::move(candidate);
}

}  // namespace dks
