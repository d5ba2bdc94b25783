#pragma once

// Exhaustive densest-k-subgraph search. Test oracle for small graphs.

#include <cstdint>
#include <vector>

#include "dks/error.hpp"
#include "dks/graph.hpp"
#include "dks/result.hpp"

namespace dks {

inline constexpr std::uint64_t kDefaultBruteForceBudget = 48620;  // C(18, 9)

// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

// Exact densest k-subgraph by enumerating all k-subsets in lexicographic
// order; the first maximum wins, so ties resolve to the smallest set.
inline SolveResult brute_force_dks(const Graph& g, std::size_t k,
                                   std::uint64_t budget = kDefaultBruteForceBudget) {
  const std::size_t n = g.n();
  if (k > n) throw InvalidArgument("brute_force_dks: k exceeds vertex count");
  if (binomial(n, k) > budget) {
    throw BudgetExceeded("brute_force_dks: C(" + std::to_string(n) + ", " +
                         std::to_string(k) + ") exceeds budget " + std::to_string(budget));
  }
  if (k == 0) return make_result(g, {}, "brute-force");

  std::vector<Vertex> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = static_cast<Vertex>(i);
  std::size_t best_edges = 0;
  std::vector<Vertex> best = pick;
  bool first = true;

  auto count = [&]() {
    std::size_t e = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) e += g.has_edge(pick[i], pick[j]);
    }
    return e;
  };

  while (true) {
    const std::size_t e = count();
    if (first || e > best_edges) {
      best_edges = e;
      best = pick;
      first = false;
    }
    // Advance to the next combination.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return make_result(g, VertexSet::from_sorted(std::move(best)), "brute-force");
}

}  // namespace dks
