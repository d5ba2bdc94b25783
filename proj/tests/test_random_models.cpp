#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dks/caterpillar.hpp"
#include "dks/exact.hpp"
#include "dks/generators.hpp"
#include "dks/random_models.hpp"
#include "dks/spectral.hpp"
#include "test_util.hpp"

using namespace dks;
using namespace dks::testing;

namespace {

Graph complete_bipartite(std::size_t m) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < m; ++u)
    for (Vertex v = 0; v < m; ++v) e.push_back({u, static_cast<Vertex>(m + v)});
  return Graph(2 * m, std::move(e));
}

Graph two_cliques(std::size_t m) {
  std::vector<Edge> e;
  for (Vertex off : {Vertex{0}, static_cast<Vertex>(m)})
    for (Vertex u = 0; u < m; ++u)
      for (Vertex v = u + 1; v < m; ++v) e.push_back({off + u, off + v});
  return Graph(2 * m, std::move(e));
}

std::vector<Edge> edge_list(const Graph& g) { return {g.edges().begin(), g.edges().end()}; }

// Largest |eigenvalue| of P A P with P projecting off the all-ones vector.
double deflated_oracle(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1;
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p * a * p);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Gnp, Extremes) {
  EXPECT_EQ(gen_gnp(30, 0.0, 1).m(), 0u);
  EXPECT_EQ(gen_gnp(30, 1.0, 1).m(), 30u * 29u / 2u);
  EXPECT_EQ(gen_gnp(1, 0.5, 1).m(), 0u);
  EXPECT_THROW(gen_gnp(10, 1.5, 1), InvalidArgument);
  EXPECT_THROW(gen_gnp(10, -0.1, 1), InvalidArgument);
}

TEST(Gnp, Deterministic) {
  const auto a = gen_gnp(200, 0.07, 42), b = gen_gnp(200, 0.07, 42), c = gen_gnp(200, 0.07, 43);
  EXPECT_EQ(edge_list(a), edge_list(b));
  EXPECT_NE(edge_list(a), edge_list(c));
}

TEST(Gnp, MeanDegreeConcentrates) {
  const std::size_t n = 1000;
  const double p = std::pow(static_cast<double>(n), -0.5);
  const double pairs = static_cast<double>(n) * (n - 1) / 2;
  const double mean = (n - 1) * p;
  const double sd = 2.0 * std::sqrt(pairs * p * (1 - p)) / static_cast<double>(n);
  int inside = 0;
  double total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double deg = 2.0 * static_cast<double>(gen_gnp(n, p, seed).m()) / static_cast<double>(n);
    inside += std::abs(deg - mean) <= 3 * sd;
    total += deg;
  }
  EXPECT_GE(inside, 97);
  EXPECT_NEAR(total / 100, mean, 3 * sd / 10);
}

TEST(Gnp, EdgeProbabilityMatchesPairwise) {
  // Each of a few fixed pairs is present in about p of the seeds.
  const double p = 0.3;
  int hits[3] = {0, 0, 0};
  const int runs = 2000;
  for (int s = 0; s < runs; ++s) {
    const auto g = gen_gnp(12, p, 7000 + static_cast<std::uint64_t>(s));
    hits[0] += g.has_edge(0, 1);
    hits[1] += g.has_edge(5, 11);
    hits[2] += g.has_edge(10, 11);
  }
  const double sd = std::sqrt(runs * p * (1 - p));
  for (int h : hits) EXPECT_NEAR(h, runs * p, 4 * sd);
}

TEST(Plant, BetaOneGivesClique) {
  const auto inst = plant(100, 0.5, 12, 1.0, 3);
  ASSERT_TRUE(inst.planted.has_value());
  EXPECT_EQ(inst.planted->size(), 12u);
  EXPECT_EQ(induced_edge_count(inst.graph, *inst.planted), 66u);
  EXPECT_DOUBLE_EQ(*inst.ground_truth_density, 11.0);
  EXPECT_EQ(inst.model, Model::RandomPlanted);
  EXPECT_EQ(inst.params.k, 12u);
}

TEST(Plant, OutsideEdgesUntouched) {
  const auto base = gen_null(150, 0.5, 11);
  const auto inst = plant(150, 0.5, 20, 0.7, 11);
  // Same seed stream: base is drawn first.
  const auto& s = *inst.planted;
  for (const auto& e : base.graph.edges()) {
    if (!(s.contains(e.u) && s.contains(e.v))) {
      EXPECT_TRUE(inst.graph.has_edge(e.u, e.v));
    }
  }
  for (const auto& e : inst.graph.edges()) {
    if (!(s.contains(e.u) && s.contains(e.v))) {
      EXPECT_TRUE(base.graph.has_edge(e.u, e.v));
    }
  }
  EXPECT_FALSE(base.planted.has_value());
  EXPECT_EQ(base.model, Model::Null);
}

TEST(Plant, Errors) {
  EXPECT_THROW(plant(10, 0.5, 11, 0.5, 1), InvalidArgument);
  EXPECT_THROW(plant(10, 1.5, 5, 0.5, 1), InvalidArgument);
  EXPECT_THROW(plant(10, 0.5, 5, 0.0, 1), InvalidArgument);
  EXPECT_THROW(gen_null(10, 0.0, 1), InvalidArgument);
  EXPECT_THROW(plant_arbitrary(Graph(10), Graph(3), VertexSet({1, 2}), 1), InvalidArgument);
  EXPECT_THROW(plant_arbitrary(Graph(10), Graph(2), VertexSet({1, 12}), 1), InvalidArgument);
}

TEST(PlantArbitrary, EmptyHClearsTheBlockOnly) {
  const Graph base = complete(8);
  const auto inst = plant_arbitrary(base, Graph(3), VertexSet({1, 4, 6}), 5);
  EXPECT_EQ(inst.graph.m(), 28u - 3u);
  EXPECT_EQ(induced_edge_count(inst.graph, VertexSet({1, 4, 6})), 0u);
  EXPECT_EQ(*inst.ground_truth_density, 0.0);
  EXPECT_EQ(inst.model, Model::DenseInRandom);
}

TEST(PlantArbitrary, CopiesHUpToRelabeling) {
  const Graph h = gen_min_degree(10, 4, 2);
  const VertexSet loc({3, 8, 9, 20, 21, 22, 30, 31, 40, 41});
  const auto inst = plant_arbitrary(Graph(50), h, loc, 9);
  EXPECT_EQ(inst.graph.m(), h.m());
  for (Vertex v : loc) EXPECT_EQ(inst.graph.degree(v), 4u);
  EXPECT_DOUBLE_EQ(*inst.ground_truth_density, 4.0);
}

TEST(GenMinDegree, RegularAndDeterministic) {
  for (double d : {1.0, 2.0, 3.0, 6.0}) {
    const Graph g = gen_min_degree(15, d, 4);
    const auto want = static_cast<std::size_t>(2 * std::ceil(d / 2));
    for (Vertex v = 0; v < 15; ++v) EXPECT_EQ(g.degree(v), want);
    EXPECT_EQ(edge_list(g), edge_list(gen_min_degree(15, d, 4)));
  }
  EXPECT_THROW(gen_min_degree(6, 6, 1), InvalidArgument);
}

TEST(PlantedDensity, BeatsNullMaxima) {
  // n = 2000, alpha = 1/2, k = 45, beta = 3/4.
  const std::size_t n = 2000, k = 45;
  const double planted_target = std::pow(static_cast<double>(k), 0.75);
  const double null_scale = std::max(static_cast<double>(k) / std::sqrt(static_cast<double>(n)), 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = plant(n, 0.5, k, 0.75, seed);
    EXPECT_NEAR(*inst.ground_truth_density, planted_target, 0.6 * planted_target);
    // The planted block beats the null k-subgraph scale by a clear margin.
    EXPECT_GT(*inst.ground_truth_density, 2 * null_scale);
  }
}

TEST(Lambda2, ClosedFormSpectra) {
  for (std::size_t n : {5u, 12u, 30u}) {
    const auto est = lambda2_estimate(complete(n), 1);
    EXPECT_NEAR(est.value, 1.0, 1e-4) << n;
    EXPECT_NEAR(deflated_oracle(complete(n)), 1.0, 1e-9);
  }
  for (std::size_t m : {3u, 6u, 10u}) {
    EXPECT_NEAR(lambda2_estimate(complete_bipartite(m), 2).value, static_cast<double>(m), 1e-4);
    EXPECT_NEAR(deflated_oracle(complete_bipartite(m)), static_cast<double>(m), 1e-9);
    EXPECT_NEAR(lambda2_estimate(two_cliques(m), 3).value, static_cast<double>(m - 1), 1e-3);
    EXPECT_NEAR(deflated_oracle(two_cliques(m)), static_cast<double>(m - 1), 1e-9);
  }
}

TEST(Lambda2, AgreesWithDenseSolveOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = gen_gnp(80, 0.1, seed);
    const double want = deflated_oracle(g);
    const auto est = lambda2_estimate(g, 2000, 1e-10, seed, 3);
    EXPECT_LE(est.value, want + 1e-6);
    EXPECT_NEAR(est.value, want, 0.03 * want) << seed;
  }
}

TEST(Lambda2, EdgeCasesAndDeterminism) {
  EXPECT_THROW(lambda2_estimate(Graph(0), 1), InvalidArgument);
  EXPECT_THROW(lambda2_estimate(Graph(4), 0, 1e-6, 1), InvalidArgument);
  EXPECT_EQ(lambda2_estimate(Graph(1), 1).value, 0.0);
  EXPECT_EQ(lambda2_estimate(Graph(6), 1).value, 0.0);
  const Graph g = gen_gnp(300, 0.05, 8);
  EXPECT_EQ(lambda2_estimate(g, 77).value, lambda2_estimate(g, 77).value);
  const auto capped = lambda2_estimate(g, 1, 1e-12, 77, 1);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.iterations, 1);
}

TEST(PlantedRayleigh, MatchesDirectSum) {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + uniform_below(rng, 20);
    const std::size_t k = 1 + uniform_below(rng, n - 1);
    const Graph g = gen_gnp(n, 0.3, 500 + static_cast<std::uint64_t>(trial));
    const VertexSet h(sample_subset(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k), rng));
    std::vector<double> x(n, -static_cast<double>(k) / static_cast<double>(n - k));
    for (Vertex v : h) x[v] = 1.0;
    double num = 0, den = 0, sum = 0;
    for (const auto& e : g.edges()) num += 2 * x[e.u] * x[e.v];
    for (double xi : x) {
      den += xi * xi;
      sum += xi;
    }
    const auto r = planted_rayleigh(g, h);
    EXPECT_NEAR(r.value(), num / den, 1e-9);
    EXPECT_EQ(r.coordinate_sum, Rational(0));
    EXPECT_NEAR(sum, 0.0, 1e-9);
  }
}

TEST(PlantedRayleigh, CliqueInEmptyGraph) {
  for (std::size_t k : {3u, 5u, 9u}) {
    const std::size_t n = 40;
    const auto r = planted_rayleigh(complete(k, n - k), VertexSet::range(k));
    const double kd = static_cast<double>(k);
    EXPECT_NEAR(r.value(), (kd - 1) * kd / (kd + kd * kd / static_cast<double>(n - k)), 1e-12);
  }
  EXPECT_THROW(planted_rayleigh(complete(4), VertexSet::range(4)), InvalidArgument);
  EXPECT_THROW(planted_rayleigh(complete(4), VertexSet{}), InvalidArgument);
}

TEST(SdpDual, EmptyGraph) {
  const auto c = sdp_dual_certificate(Graph(12), 4);
  EXPECT_EQ(c.dual_value, 0.0);
  EXPECT_GE(c.psd_margin, -1e-12);
  EXPECT_EQ(sdp_dual_certificate(Graph(0), 3).dual_value, 0.0);
}

TEST(SdpDual, WeakDualityOnSmallGraphs) {
  // x = indicator of H: x^T A x = 2|E(H)| <= lambda2 k + k^2 D/n.
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 6 + uniform_below(rng, 9);
    const std::size_t k = 2 + uniform_below(rng, n - 2);
    const Graph g = gen_gnp(n, 0.2 + 0.6 * uniform01(rng), 900 + static_cast<std::uint64_t>(trial));
    const auto c = sdp_dual_certificate(g, k);
    EXPECT_GE(c.psd_margin, -1e-9);
    std::size_t best_edges = 0;
    std::vector<Vertex> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = static_cast<Vertex>(i);
    while (true) {
      best_edges = std::max(best_edges, count_edges_inside(g, VertexSet(comb)));
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    EXPECT_GE(c.dual_value + 1e-9, 2.0 * static_cast<double>(best_edges)) << "trial " << trial;
  }
}

TEST(SdpDual, FieldsAreConsistent) {
  const Graph g = gen_gnp(60, 0.1, 4);
  const auto c = sdp_dual_certificate(g, 8);
  EXPECT_DOUBLE_EQ(c.average_degree, 2.0 * static_cast<double>(g.m()) / 60.0);
  EXPECT_DOUBLE_EQ(c.y, c.average_degree / 60.0);
  EXPECT_DOUBLE_EQ(c.t, c.lambda2 + 8 * c.y);
  EXPECT_DOUBLE_EQ(c.dual_value, 64 * c.y + 8 * c.lambda2);
  EXPECT_NEAR(c.psd_margin, 0.0, 1e-8);
}

TEST(Distinguishers, EmptyGraphIsNull) {
  const Graph g(50);
  const auto deg = degree_distinguisher(g, 5, 0.0);
  EXPECT_EQ(deg.value, 0.0);
  EXPECT_FALSE(deg.planted);
  EXPECT_EQ(intersection_distinguisher(g, 10'000, 1).value, 0.0);
  const auto sp = spectral_distinguisher(g, 0.5, 1);
  EXPECT_NEAR(sp.value, 0.0, 1e-12);
  EXPECT_FALSE(sp.planted);
  EXPECT_FALSE(sdp_distinguisher(g, 5).planted);
  const auto cat = caterpillar_distinguisher(g, 1, 2, 10'000, 1);
  EXPECT_EQ(cat.value, 0.0);
  EXPECT_FALSE(cat.planted);
}

TEST(Distinguishers, IntersectionExamples) {
  EXPECT_EQ(intersection_distinguisher(matching(20), 10'000, 1).value, 0.0);
  // 0 and 1 share neighbors 2..8; nothing else shares more than one.
  std::vector<Edge> e;
  for (Vertex v = 2; v <= 8; ++v) {
    e.push_back({0, v});
    e.push_back({1, v});
  }
  const auto v = intersection_distinguisher(Graph(30, e), 10'000, 1);
  EXPECT_EQ(v.value, 7.0);
  EXPECT_EQ(v.notes, "exhaustive");
  EXPECT_EQ(intersection_distinguisher(Graph(30, e), 10, 1).notes, "sampled 10 pairs");
}

TEST(Distinguishers, VerdictConvention) {
  const auto v = make_verdict("x", 2.0, 2.0);
  EXPECT_FALSE(v.planted);
  EXPECT_TRUE(make_verdict("x", 2.0001, 2.0).planted);
}

TEST(Distinguishers, DegreeSeparatesPlantedClique) {
  // K_20 in G(400, 0.05), 50 + 50 seeds.
  const std::size_t n = 400, k = 20;
  const double p = 0.05;
  const double expected = p * (n - 1);
  int correct = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Graph null_g = gen_gnp(n, p, seed);
    correct += !degree_distinguisher(null_g, k, expected).planted;
    const auto pl = plant_arbitrary(null_g, complete(k), VertexSet::range(k), seed);
    correct += degree_distinguisher(pl.graph, k, expected).planted;
  }
  EXPECT_GE(correct, 90);
}
