#pragma once

// Local extraction of a dense bipartite piece from (S, Γ(S)).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "dks/error.hpp"
#include "dks/graph.hpp"
#include "dks/result.hpp"

namespace dks {

// For k' = 1..k: T = the k' vertices of Γ(S) with the most neighbors in S,
// A = the min(k', |S|) members of S with the most neighbors in T (ties by
// id in both selections). Returns the densest A ∪ T, scored by average
// degree of the induced subgraph in g.
//
// `within`, when given, restricts Γ(S) to that vertex set; this is DkS-Local
// run on the subgraph induced on `within`.
inline SolveResult dks_local(const Graph& g, const VertexSet& s, std::size_t k,
                             const VertexSet* within = nullptr) {
  if (s.empty()) throw InvalidArgument("dks_local: empty set");
  if (k == 0) throw InvalidArgument("dks_local: k must be positive");
  check_members(g, s);

  const std::size_t n = g.n();
  std::vector<std::uint8_t> in_s(n, 0);
  for (Vertex v : s) in_s[v] = 1;
  std::vector<std::uint8_t> allowed;
  if (within) {
    allowed.assign(n, 0);
    for (Vertex v : *within) allowed[v] = 1;
  }

  // Degree into S of every vertex of Γ(S).
  std::vector<std::uint32_t> into_s(n, 0);
  std::vector<Vertex> gamma;
  for (Vertex a : s) {
    for (Vertex t : g.neighbors(a)) {
      if (within && !allowed[t]) continue;
      if (into_s[t]++ == 0) gamma.push_back(t);
    }
  }

  SolveResult best;
  best.provenance = "local";
  if (gamma.empty()) return best;

  std::sort(gamma.begin(), gamma.end(), [&](Vertex a, Vertex b) {
    return into_s[a] != into_s[b] ? into_s[a] > into_s[b] : a < b;
  });

  // Fast edge counting applies when S sits on one side of a bipartition:
  // then every induced edge of A ∪ T runs between A and T.
  bool one_sided = g.has_bipartition();
  if (one_sided) {
    const auto side = g.side(s[0]);
    for (Vertex v : s) {
      if (g.side(v) != side) {
        one_sided = false;
        break;
      }
    }
  }

  std::vector<std::uint32_t> into_t(n, 0);  // for members of S
  std::vector<Vertex> order(s.begin(), s.end());
  std::vector<std::uint8_t> mark(n, 0);
  const std::size_t kmax = std::min(k, gamma.size());
  bool have = false;

  for (std::size_t kp = 1; kp <= kmax; ++kp) {
    const Vertex added = gamma[kp - 1];
    for (Vertex a : g.neighbors(added))
      if (in_s[a]) ++into_t[a];

    const std::size_t m = std::min(kp, s.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                      [&](Vertex a, Vertex b) {
                        return into_t[a] != into_t[b] ? into_t[a] > into_t[b] : a < b;
                      });

    std::vector<Vertex> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    members.insert(members.end(), gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(kp));
    VertexSet candidate(std::move(members));

    std::size_t edges = 0;
    if (one_sided) {
      for (std::size_t i = 0; i < m; ++i) edges += into_t[order[i]];
    } else {
      for (Vertex v : candidate) mark[v] = 1;
      std::size_t twice = 0;
      for (Vertex v : candidate)
        for (Vertex u : g.neighbors(v)) twice += mark[u];
      for (Vertex v : candidate) mark[v] = 0;
      edges = twice / 2;
    }

    SolveResult r;
    r.density = 2.0 * static_cast<double>(edges) / static_cast<double>(candidate.size());
    r.vertices = std::move(candidate);
    r.provenance = "local:k'=" + std::to_string(kp);
    if (!have || better_than(r, best)) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace dks
