#include "oracles.hpp"

#include <adjstress/generators.hpp>
#include <adjstress/pivots.hpp>

#include <gtest/gtest.h>

using namespace adjstress;

namespace {

struct Quiet : ::testing::Environment {
  void SetUp() override { set_quiet(true); }
};
const auto* const quiet_env = ::testing::AddGlobalTestEnvironment(new Quiet);

} // namespace

TEST(ParseMatrixMarket, SmallestSymmetricPattern) {
  auto parsed = parse_matrix_market("%%MatrixMarket matrix coordinate pattern symmetric\n"
                                    "2 2 1\n"
                                    "2 1\n");
  EXPECT_EQ(parsed.graph.size(), 2u);
  ASSERT_EQ(parsed.graph.edge_count(), 1u);
  EXPECT_EQ(parsed.graph.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(parsed.dropped_nodes, 0u);
}

TEST(ParseMatrixMarket, SelfLoopDropped) {
  auto parsed = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n"
                                    "% comment line\n"
                                    "3 3 4\n"
                                    "1 2 0.5\n"
                                    "2 3 1.5\n"
                                    "3 3 9.0\n"
                                    "3 2 1.5\n");
  EXPECT_EQ(parsed.graph.size(), 3u);
  EXPECT_EQ(parsed.graph.edge_count(), 2u);
  for (NodeId v = 0; v < 3; ++v)
    EXPECT_FALSE(parsed.graph.has_edge(v, v));
}

TEST(ParseMatrixMarket, LargestComponentKept) {
  // components {1..5} (path) and {6,7}
  std::vector<std::pair<NodeId, NodeId>> raw = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {5, 6}};
  const auto sizes = oracle::component_sizes(7, raw);
  ASSERT_EQ(sizes, (std::vector<std::size_t>{5, 2}));

  auto parsed = parse_matrix_market("%%MatrixMarket matrix coordinate integer symmetric\n"
                                    "7 7 5\n"
                                    "2 1 1\n3 2 1\n4 3 1\n5 4 1\n7 6 1\n");
  EXPECT_EQ(parsed.graph.size(), sizes[0]);
  EXPECT_EQ(parsed.dropped_nodes, sizes[1]);
  EXPECT_TRUE(is_connected(parsed.graph));
  EXPECT_EQ(parsed.original_ids, (std::vector<NodeId>{0, 1, 2, 3, 4}));
}

TEST(ParseMatrixMarket, LargestComponentReindexedDensely) {
  auto parsed = parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n"
                                    "6 6 4\n"
                                    "1 2\n3 5\n5 6\n6 3\n");
  EXPECT_EQ(parsed.graph.size(), 3u);
  EXPECT_EQ(parsed.original_ids, (std::vector<NodeId>{2, 4, 5}));
  EXPECT_EQ(parsed.graph.edge_count(), 3u);
}

TEST(ParseMatrixMarket, DuplicatesMergedAcrossDirections) {
  auto parsed = parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n"
                                    "3 3 4\n1 2\n2 1\n1 2\n2 3\n");
  EXPECT_EQ(parsed.graph.edge_count(), 2u);
}

TEST(ParseMatrixMarket, Errors) {
  EXPECT_THROW(parse_matrix_market(""), ParseError);
  EXPECT_THROW(parse_matrix_market("hello\n1 1 0\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n"),
               ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 2\n"),
               ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n"),
               ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 3\n"),
               ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 2\n"),
               ParseError);
  // only a self-loop: empty after normalisation
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n"),
               ParseError);
}

TEST(BfsAllPairs, PathP3) {
  auto d = bfs_all_pairs(generators::path(3));
  const double expected[3][3] = {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_EQ(d(i, j), expected[i][j]);
}

TEST(BfsAllPairs, CompleteK4) {
  auto d = bfs_all_pairs(generators::complete(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_EQ(d(i, j), i == j ? 0.0 : 1.0);
}

TEST(BfsAllPairs, CycleC5MatchesFloydWarshall) {
  const Graph g = generators::cycle(5);
  auto d = bfs_all_pairs(g);
  auto fw = oracle::floyd_warshall(g);
  EXPECT_EQ(d(0, 2), 2.0);
  EXPECT_EQ(d(0, 3), 2.0);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      EXPECT_EQ(d(i, j), fw[i][j]);
}

TEST(BfsAllPairs, DisconnectedThrows) {
  Graph g(3, {{0, 1}});
  EXPECT_THROW(bfs_all_pairs(g), Error);
}

TEST(BfsAllPairs, PropertyTriangleSymmetryAndOracle) {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(99);
    const Graph g = generators::random_connected(n, rng.below(2 * n), rng);
    auto d = bfs_all_pairs(g);
    auto fw = oracle::floyd_warshall(g);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(d(i, i), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_EQ(d(i, j), d(j, i));
        ASSERT_EQ(d(i, j), fw[i][j]);
        if (i != j) {
          ASSERT_GE(d(i, j), 1.0);
        }
      }
    }
    for (int s = 0; s < 200; ++s) {
      auto i = rng.below(n), j = rng.below(n), k = rng.below(n);
      ASSERT_LE(d(i, j), d(i, k) + d(k, j));
    }
  }
}

TEST(ChoosePivots, SaturatesAtNodeCount) {
  const Graph g = generators::cycle(6);
  Rng rng(3);
  auto ps = choose_pivots(g, 10, rng);
  ASSERT_EQ(ps.size(), 6u);
  std::vector<NodeId> sorted = ps.pivots;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
  for (std::uint32_t q = 0; q < ps.size(); ++q)
    EXPECT_EQ(ps.region[ps.pivots[q]], q);
}

TEST(ChoosePivots, SinglePivotOwnsEverything) {
  const Graph g = generators::grid(3, 4);
  Rng rng(9);
  auto ps = choose_pivots(g, 1, rng);
  ASSERT_EQ(ps.size(), 1u);
  for (auto r : ps.region)
    EXPECT_EQ(r, 0u);
}

TEST(ChoosePivots, MaxMinSecondPivotOnPath) {
  const Graph g = generators::path(5);
  // find a seed whose first pivot is node 2
  std::uint64_t seed = 0;
  for (;; ++seed) {
    Rng probe(seed);
    if (probe.below(5) == 2)
      break;
  }
  // brute-force max-min: candidates at maximal distance from node 2
  auto from_first = bfs_distances(g, 2);
  const auto best = *std::max_element(from_first.begin(), from_first.end());
  EXPECT_EQ(best, 2u);

  Rng rng(seed);
  auto ps = choose_pivots(g, 2, rng);
  ASSERT_EQ(ps.pivots.size(), 2u);
  EXPECT_EQ(ps.pivots[0], 2u);
  EXPECT_TRUE(ps.pivots[1] == 0 || ps.pivots[1] == 4);
  EXPECT_EQ(from_first[ps.pivots[1]], best);
  EXPECT_EQ(ps.pivots[1], 0u); // lowest id among ties
}

TEST(ChoosePivots, DeterministicAndPartitions) {
  Rng gen(5);
  const Graph g = generators::random_connected(80, 60, gen);
  Rng a(77), b(77);
  auto pa = choose_pivots(g, 12, a);
  auto pb = choose_pivots(g, 12, b);
  EXPECT_EQ(pa.pivots, pb.pivots);
  EXPECT_EQ(pa.region, pb.region);
  std::set<NodeId> distinct(pa.pivots.begin(), pa.pivots.end());
  EXPECT_EQ(distinct.size(), 12u);
  // each node sits in the region of a nearest pivot, lowest index on ties
  std::vector<std::vector<std::uint32_t>> dist;
  for (NodeId p : pa.pivots)
    dist.push_back(bfs_distances(g, p));
  for (NodeId v = 0; v < g.size(); ++v) {
    std::uint32_t best = 0;
    for (std::uint32_t q = 1; q < pa.size(); ++q)
      if (dist[q][v] < dist[best][v])
        best = q;
    EXPECT_EQ(pa.region[v], best);
  }
}

TEST(SparseShortestPaths, AllPivotsMatchesAllPairs) {
  const Graph g = generators::grid(4, 5);
  Rng rng(1);
  auto ps = choose_pivots(g, g.size(), rng);
  auto sparse = sparse_shortest_paths(g, ps);
  auto d = bfs_all_pairs(g);
  EXPECT_EQ(sparse.pairs.size(), g.size() * (g.size() - 1) / 2);
  for (const auto& p : sparse.pairs)
    EXPECT_EQ(p.dist, d(p.i, p.j));
}

TEST(SparseShortestPaths, EdgesCarryUnitSymmetricWeights) {
  const Graph g = generators::grid(5, 5);
  Rng rng(2);
  auto sparse = sparse_shortest_paths(g, choose_pivots(g, 4, rng));
  for (const Edge& e : g.edges()) {
    const SparsePair* p = sparse.find(e.first, e.second);
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->dist, 1.0);
    EXPECT_EQ(sparse.weight_directed(e.first, e.second), 1.0);
    EXPECT_EQ(sparse.weight_directed(e.second, e.first), 1.0);
  }
}

TEST(SparseShortestPaths, RegionBoostOnStar) {
  // Region of pivot 0 is {0,1,2,3} at distances {0,1,1,2}; pivot 4 owns
  // only itself. The region is given explicitly here.
  Graph g(5, {{0, 1}, {0, 2}, {1, 3}, {3, 4}});
  PivotSet ps;
  ps.pivots = {0, 4};
  ps.region = {0, 0, 0, 0, 1}; // region of pivot 0: {0,1,2,3} at distances {0,1,1,2}
  auto sparse = sparse_shortest_paths(g, ps);
  // node 3 at distance 2 from pivot 0: s = |{j in R(0): d <= 1}| = 3
  EXPECT_DOUBLE_EQ(sparse.weight_directed(3, 0), 0.75);
  // node 4 at distance 3 from pivot 0: s = |{d <= 1.5}| = 3, w = 3/9
  EXPECT_DOUBLE_EQ(sparse.weight_directed(4, 0), 3.0 / 9.0);
  // pivot 0 seen from pivot 4 (distance 3): R(4) = {4}, s = 1
  EXPECT_DOUBLE_EQ(sparse.weight_directed(0, 4), 1.0 / 9.0);
  // non-pivot node 2 has no weight moving pivot 0 through its own term
  EXPECT_EQ(sparse.weight_directed(0, 2), 1.0); // edge
  const SparsePair* p = sparse.find(2, 4);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->dist, 4.0);
  EXPECT_EQ(sparse.weight_directed(4, 2), 0.0); // pivot 4 is not moved by node 2
}

TEST(SparseShortestPaths, PropertyDistancesAndBoostFactor) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.below(98);
    const Graph g = generators::random_connected(n, rng.below(n), rng);
    const auto d = bfs_all_pairs(g);
    auto ps = choose_pivots(g, 1 + rng.below(10), rng);
    auto sparse = sparse_shortest_paths(g, ps);
    std::set<std::pair<NodeId, NodeId>> expected;
    for (const Edge& e : g.edges())
      expected.insert({e.first, e.second});
    for (NodeId p : ps.pivots)
      for (NodeId v = 0; v < n; ++v)
        if (v != p)
          expected.insert({std::min(v, p), std::max(v, p)});
    ASSERT_EQ(sparse.pairs.size(), expected.size());
    for (const auto& term : sparse.pairs) {
      ASSERT_TRUE(expected.count({term.i, term.j}));
      ASSERT_EQ(term.dist, d(term.i, term.j));
    }
    // s >= 1: every non-neighbour pivot term is at least d^-2
    for (NodeId p : ps.pivots)
      for (NodeId v = 0; v < n; ++v)
        if (v != p && !g.has_edge(v, p)) {
          ASSERT_GE(sparse.weight_directed(v, p) * d(v, p) * d(v, p), 1.0 - 1e-12);
        }
  }
}
