#include <gtest/gtest.h>

#include <cmath>

#include "dks/exact.hpp"
#include "dks/generators.hpp"
#include "dks/reductions.hpp"
#include "test_util.hpp"

using namespace dks;
using namespace dks::testing;

namespace {

Graph circulant(std::size_t n, std::size_t half) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v)
    for (std::size_t off = 1; off <= half; ++off) e.push_back({v, static_cast<Vertex>((v + off) % n)});
  return Graph(n, e);
}

Graph with_clique(const Graph& base, const std::vector<Vertex>& clique) {
  std::vector<Edge> e(base.edges().begin(), base.edges().end());
  for (std::size_t i = 0; i < clique.size(); ++i)
    for (std::size_t j = i + 1; j < clique.size(); ++j) e.push_back({clique[i], clique[j]});
  return Graph(base.n(), e);
}

std::size_t matching_edges_inside(const Graph& g, const VertexSet& s) { return count_edges_inside(g, s); }

}  // namespace

TEST(GreedyCore, CliqueDominates) {
  const Graph g = complete(10, 30);
  const auto r = greedy_core(g, 10);
  EXPECT_EQ(r.u.size(), 5u);
  for (Vertex v : r.u) EXPECT_LT(v, 10u);
  EXPECT_EQ(r.h_prime, VertexSet::range(10));
  EXPECT_DOUBLE_EQ(average_degree(g, r.h_prime), 9.0);
  EXPECT_DOUBLE_EQ(r.cap_degree, 9.0);
  EXPECT_DOUBLE_EQ(r.gamma, 9.0 * 10 / 40);
}

TEST(GreedyCore, PerfectMatchingHandTrace) {
  const Graph g = matching(5);
  const auto r = greedy_core(g, 4);
  EXPECT_EQ(r.u, (VertexSet{0, 1}));
  EXPECT_EQ(r.u_prime, (VertexSet{2, 3}));
  EXPECT_GE(matching_edges_inside(g, r.h_prime), 2u);
  EXPECT_GE(average_degree(g, r.h_prime), 1.0);
  EXPECT_DOUBLE_EQ(r.gamma, 1.0);
}

TEST(GreedyCore, PlantedCliqueTouchingU) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph base = gen_gnp(300, 0.02, seed);
    std::vector<Vertex> clique;
    for (Vertex v = 0; v < 24; ++v) clique.push_back(v * 12 + 1);
    const Graph g = with_clique(base, clique);
    const auto r = greedy_core(g, 24);
    // every vertex of U is a clique vertex, so the clique edges inside U
    // alone give average degree > d/4
    for (Vertex v : r.u) EXPECT_TRUE(VertexSet(clique).contains(v));
    EXPECT_GE(average_degree(g, r.h_prime), 23.0 / 4);
  }
}

TEST(GreedyCore, InvariantsOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 20 + seed * 3;
    Rng rng(seed);
    const double p = 0.01 + 0.2 * uniform01(rng);
    const Graph g = gen_gnp(n, p, seed);
    const std::size_t k = 2 + uniform_below(rng, n - 1);
    const auto r = greedy_core(g, k);
    const std::size_t half = (k + 1) / 2;
    EXPECT_EQ(r.u.size(), half);
    EXPECT_LE(r.h_prime.size(), k);
    EXPECT_GE(r.gamma, 1.0);
    EXPECT_LE(static_cast<double>(r.g_prime.max_degree()), r.cap_degree);
    // g_prime is V \ U relabeled
    EXPECT_EQ(r.g_prime.n(), n - half);
    for (Vertex h : r.g_prime_to_host) EXPECT_FALSE(r.u.contains(h));
    const auto overlap = set_intersection(r.h_prime, VertexSet(r.g_prime_to_host));
    if (!r.matching_fallback) {
      EXPECT_TRUE(overlap.is_subset_of(r.u_prime));
    }
    if (!r.matching_fallback) {
      const double bound = kGreedyConstant * r.cap_degree * static_cast<double>(k) / static_cast<double>(n);
      EXPECT_GE(average_degree(g, r.h_prime) + 1e-12, bound);
    }
  }
}

TEST(GreedyCore, MatchingFallback) {
  const Graph g(12, {{0, 1}, {5, 7}});
  const auto r = greedy_core(g, 8);
  EXPECT_TRUE(r.matching_fallback);
  EXPECT_EQ(r.h_prime.size(), 8u);
  EXPECT_EQ(count_edges_inside(g, r.h_prime), 2u);
}

TEST(GreedyCore, RejectsK) {
  EXPECT_THROW(greedy_core(path(5), 1), InvalidArgument);
  EXPECT_THROW(greedy_core(path(5), 6), InvalidArgument);
}

TEST(UnionUntilK, ProgressAfterEdgeRemoval) {
  // inner returns the first triangle it finds in what is left
  const Graph g(9, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {6, 7}, {7, 8}, {6, 8}});
  int calls = 0;
  const auto out = union_until_k(g, 6, [&](const Graph& cur) {
    ++calls;
    return brute_force_dks(cur, 3).vertices;
  });
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(out, (VertexSet{0, 1, 2, 3, 4, 5}));
}

TEST(UnionUntilK, TwoDisjointCliques) {
  std::vector<Edge> e;
  for (Vertex base : {0u, 7u})
    for (Vertex i = 0; i < 5; ++i)
      for (Vertex j = i + 1; j < 5; ++j) e.push_back({base + i, base + j});
  e.push_back({5, 6});
  const Graph g(14, e);
  const auto out = union_until_k(g, 10, [](const Graph& cur) { return brute_force_dks(cur, 5).vertices; });
  EXPECT_EQ(out, (VertexSet{0, 1, 2, 3, 4, 7, 8, 9, 10, 11}));
  EXPECT_DOUBLE_EQ(average_degree(g, out), 4.0);
}

TEST(UnionUntilK, OvershootPrunedWithinFactorTwo) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = gen_gnp(16, 0.3, seed);
    const std::size_t k = 6;
    std::vector<double> round_density;
    VertexSet acc;
    const auto out = union_until_k(g, k, [&](const Graph& cur) {
      const auto found = brute_force_dks(cur, 5).vertices;
      round_density.push_back(average_degree(cur, found));
      acc = set_union(acc, found);
      return found;
    });
    ASSERT_EQ(out.size(), k);
    if (round_density.empty()) continue;
    const double min_round = *std::min_element(round_density.begin(), round_density.end());
    EXPECT_GE(average_degree(g, out) + 1e-12, 0.5 * min_round) << "seed " << seed;
    EXPECT_GE(2.0 * average_degree(g, out) + 1e-12, average_degree(g, acc)) << "seed " << seed;
  }
}

TEST(UnionUntilK, PadsWhenEdgesRunOut) {
  const Graph g(6, {{2, 3}});
  const auto out = union_until_k(g, 4, [](const Graph& cur) { return VertexSet(std::vector<Vertex>{cur.edges()[0].u, cur.edges()[0].v}); });
  EXPECT_EQ(out, (VertexSet{0, 1, 2, 3}));
}

TEST(UnionUntilK, StallIsAnError) {
  EXPECT_THROW(union_until_k(path(6), 4, [](const Graph&) { return VertexSet{0, 2}; }), StallError);
  EXPECT_THROW(union_until_k(path(6), 4, [](const Graph&) { return VertexSet{}; }), StallError);
}

TEST(DoubleCover, SingleEdge) {
  const Graph c = bipartite_double_cover(path(2));
  EXPECT_EQ(c.n(), 4u);
  EXPECT_EQ(c.m(), 2u);
  EXPECT_TRUE(c.has_edge(0, 3));
  EXPECT_TRUE(c.has_edge(1, 2));
  EXPECT_TRUE(c.has_bipartition());
}

TEST(DoubleCover, TriangleIsSixCycle) {
  const Graph c = bipartite_double_cover(complete(3));
  EXPECT_EQ(c.m(), 6u);
  for (Vertex v = 0; v < 6; ++v) EXPECT_EQ(c.degree(v), 2u);
  // connected 2-regular graph on 6 vertices
  VertexSet reach{0};
  for (int i = 0; i < 6; ++i) reach = set_union(reach, neighborhood(c, reach));
  EXPECT_EQ(reach.size(), 6u);
}

TEST(DoubleCover, CliqueIsBicliqueMinusMatching) {
  const std::size_t k = 6;
  const Graph c = bipartite_double_cover(complete(k));
  EXPECT_EQ(c.m(), k * (k - 1));
  for (Vertex u = 0; u < k; ++u)
    for (Vertex v = 0; v < k; ++v) EXPECT_EQ(c.has_edge(u, static_cast<Vertex>(v + k)), u != v);
  for (Vertex u = 0; u < k; ++u)
    for (Vertex v = u + 1; v < k; ++v) EXPECT_FALSE(c.has_edge(u, v));
}

TEST(DoubleCover, DensestTwoKNotWorse) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 5 + seed % 5;
    const Graph g = gen_gnp(n, 0.4, seed);
    const Graph c = bipartite_double_cover(g);
    for (std::size_t k = 1; 2 * k <= 8 && k <= n; ++k) {
      EXPECT_GE(brute_force_dks(c, 2 * k).density + 1e-12, brute_force_dks(g, k).density);
    }
  }
}

TEST(CollapseCover, Examples) {
  EXPECT_EQ(collapse_double_cover(VertexSet{0, 5}, 5), (VertexSet{0}));
  EXPECT_EQ(collapse_double_cover(VertexSet{0, 1, 7}, 5), (VertexSet{0, 1, 2}));
  EXPECT_THROW(collapse_double_cover(VertexSet{10}, 5), InvalidArgument);
}

TEST(CollapseCover, DegreesNeverDrop) {
  const Graph tri = complete(3);
  const auto full = collapse_double_cover(VertexSet::range(6), 3);
  EXPECT_EQ(full, VertexSet::range(3));
  EXPECT_EQ(density_report(tri, full).min_degree, 2u);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = gen_gnp(10, 0.35, seed);
    const Graph c = bipartite_double_cover(g);
    Rng rng(seed);
    const auto pick = sample_subset(20, 8, rng);
    const VertexSet s(std::vector<Vertex>(pick.begin(), pick.end()));
    const auto col = collapse_double_cover(s, 10);
    for (Vertex v : s) {
      std::size_t cover_deg = 0;
      for (Vertex u : c.neighbors(v)) cover_deg += s.contains(u);
      std::size_t col_deg = 0;
      for (Vertex u : g.neighbors(v % 10)) col_deg += col.contains(u);
      EXPECT_GE(col_deg, cover_deg);
    }
  }
}

TEST(PruneKD, IdentityWhenSmall) {
  const Graph g = cycle(20);
  const auto r = prune_to_kD_le_n(g, 10, 3);
  EXPECT_EQ(r.graph, g);
  EXPECT_DOUBLE_EQ(r.retention, 1.0);
}

TEST(PruneKD, CliqueExpectation) {
  const std::size_t n = 40;
  const Graph g = complete(n);
  const double p = 1.0 / static_cast<double>(n - 1);
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  double total = 0.0, max_deg = 0.0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto r = prune_to_kD_le_n(g, n, static_cast<std::uint64_t>(seed));
    EXPECT_DOUBLE_EQ(r.retention, p);
    total += static_cast<double>(r.graph.m());
    max_deg += static_cast<double>(r.graph.max_degree());
  }
  const double mean = total / seeds;
  const double sigma = std::sqrt(pairs * p * (1 - p) / seeds);
  EXPECT_NEAR(mean, pairs * p, 3 * sigma);
  EXPECT_NEAR(pairs * p, n / 2.0, 1e-9);
  // D' around n/k = 1; the max over 40 vertices sits a few units above
  EXPECT_LE(max_deg / seeds, 6.0);
}

TEST(PruneKD, MaxDegreeNearNOverK) {
  const Graph g = gen_gnp(400, 0.25, 5);
  const std::size_t k = 40;
  const auto r = prune_to_kD_le_n(g, k, 9);
  const double expect = 400.0 / k;
  double mean_deg = 2.0 * static_cast<double>(r.graph.m()) / 400.0;
  EXPECT_LE(mean_deg, expect);
  EXPECT_LE(static_cast<double>(r.graph.max_degree()), 3 * expect);
}

TEST(PruneKD, DeterministicUnderSeed) {
  const Graph g = gen_gnp(200, 0.3, 1);
  EXPECT_EQ(prune_to_kD_le_n(g, 20, 77).graph, prune_to_kD_le_n(g, 20, 77).graph);
  EXPECT_FALSE(prune_to_kD_le_n(g, 20, 77).graph == prune_to_kD_le_n(g, 20, 78).graph);
}

TEST(WeightBuckets, EqualWeights) {
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}}, {3.0, 3.0, 3.0});
  const auto b = weight_buckets(g);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].m(), 3u);
  EXPECT_FALSE(b[0].is_weighted());
}

TEST(WeightBuckets, PowersOfTwoBoundaries) {
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}}, {1.0, 2.0, 4.0});
  const auto b = weight_buckets(g);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_TRUE(b[0].has_edge(2, 3));
  EXPECT_TRUE(b[1].has_edge(1, 2));
  EXPECT_TRUE(b[2].has_edge(0, 1));
  // 3 sits in (2, 4]
  const auto b2 = weight_buckets(Graph(3, {{0, 1}, {1, 2}}, {4.0, 3.0}));
  ASSERT_EQ(b2.size(), 1u);
  EXPECT_EQ(b2[0].m(), 2u);
}

TEST(WeightBuckets, DropsBelowFloor) {
  const double n = 5;
  const Graph g(5, {{0, 1}, {1, 2}}, {1.0, 1.0 / (n * n * n)});
  const auto b = weight_buckets(g);
  std::size_t total = 0;
  for (const auto& x : b) total += x.m();
  EXPECT_EQ(total, 1u);
}

TEST(WeightBuckets, CountBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph base = gen_gnp(30, 0.3, seed);
    Rng rng(seed);
    std::vector<double> w;
    for (std::size_t i = 0; i < base.m(); ++i) w.push_back(std::exp(-20 * uniform01(rng)));
    const Graph g(30, std::vector<Edge>(base.edges().begin(), base.edges().end()), w);
    EXPECT_LE(static_cast<double>(weight_buckets(g).size()), 2 * std::log2(30.0) + 1);
  }
  EXPECT_THROW(weight_buckets(path(3)), InvalidArgument);
}

TEST(ExpPreprocess, IdentityCase) {
  // 4-regular on 16 vertices with k = 4: d' k = n, d = 0
  const Graph g = circulant(16, 2);
  const auto r = exp_preprocess(g, 4, 0.0, 0.1, 1);
  EXPECT_EQ(r.step2, ExpPreprocessResult::Step2::None);
  EXPECT_DOUBLE_EQ(r.step1_retention, 1.0);
  EXPECT_EQ(r.graph, g);
}

TEST(ExpPreprocess, DenseRetention) {
  const std::size_t n = 64, k = 8;
  const Graph g = gen_gnp(n, 0.5, 3);
  const auto r = exp_preprocess(g, k, static_cast<double>(k), 0.1, 1);
  const double beta = std::log(8.0) / std::log(64.0);
  EXPECT_DOUBLE_EQ(r.beta, beta);
  EXPECT_NEAR(r.step1_retention, std::pow(8.0, -beta), 1e-12);
}

TEST(ExpPreprocess, SparseAddsRandomEdges) {
  const std::size_t n = 60, k = 6;
  const double expect = static_cast<double>(n * (n - 1) / 2) / static_cast<double>(k);
  double total = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto r = exp_preprocess(Graph(n), k, 0.0, 0.1, static_cast<std::uint64_t>(seed));
    ASSERT_EQ(r.step2, ExpPreprocessResult::Step2::AddedRandom);
    EXPECT_EQ(r.added_edges, r.graph.m());
    total += static_cast<double>(r.added_edges);
  }
  const double p = 1.0 / k;
  const double sigma = std::sqrt(static_cast<double>(n * (n - 1) / 2) * p * (1 - p) / seeds);
  EXPECT_NEAR(total / seeds, expect, 3 * sigma);
}

TEST(ExpPreprocess, ValidatesAndWarns) {
  EXPECT_THROW(exp_preprocess(path(10), 4, 1, 0.0, 1), InvalidArgument);
  EXPECT_THROW(exp_preprocess(path(10), 4, 1, 0.5, 1), InvalidArgument);
  EXPECT_THROW(exp_preprocess(path(10), 11, 1, 0.1, 1), InvalidArgument);
  const auto r = exp_preprocess(gen_gnp(100, 0.1, 1), 10, 1.0, 0.1, 1);
  EXPECT_FALSE(r.warnings.empty());
}
