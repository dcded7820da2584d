#pragma once

#include <adjstress/graph.hpp>
#include <adjstress/rng.hpp>

#include <unordered_map>

namespace adjstress {

/// Pivot nodes in selection order plus the nearest-pivot partition of V.
struct PivotSet {
  std::vector<NodeId> pivots;
  /// region[v] is an index into `pivots`: the pivot whose region owns v.
  std::vector<std::uint32_t> region;

  std::size_t size() const { return pivots.size(); }
};

/// Max-min (k-center) pivot sampling.
///
/// The first pivot is drawn uniformly; every further pivot is the node
/// farthest (in hops) from its nearest chosen pivot, lowest id on ties.
/// Each node belongs to the region of its nearest pivot, lowest pivot index
/// on ties. Selects min(h, n) pivots.
inline PivotSet choose_pivots(const Graph& g, std::size_t h, Rng& rng) {
  const std::size_t n = g.size();
  if (h == 0)
    throw Error("need at least one pivot");
  if (n == 0)
    throw Error("empty graph");
  const std::size_t count = std::min(h, n);

  PivotSet out;
  out.pivots.reserve(count);
  out.region.assign(n, 0);
  std::vector<std::uint32_t> nearest(n, kUnreached);
  std::vector<bool> chosen(n, false);

  auto add_pivot = [&](NodeId p) {
    const auto index = static_cast<std::uint32_t>(out.pivots.size());
    out.pivots.push_back(p);
    chosen[p] = true;
    auto dist = bfs_distances(g, p);
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] == kUnreached)
        throw Error("graph is not connected");
      if (dist[v] < nearest[v]) {
        nearest[v] = dist[v];
        out.region[v] = index;
      }
    }
  };

  add_pivot(static_cast<NodeId>(rng.below(n)));
  while (out.pivots.size() < count) {
    NodeId best = 0;
    std::uint32_t best_dist = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v])
        continue;
      if (!found || nearest[v] > best_dist) {
        best = v;
        best_dist = nearest[v];
        found = true;
      }
    }
    add_pivot(best);
  }
  return out;
}

/// One term of the sparse stress model. weight_ij caps the move of i,
/// weight_ji the move of j; a zero weight keeps that endpoint fixed.
struct SparsePair {
  NodeId i;
  NodeId j;
  double dist;
  double weight_ij;
  double weight_ji;
};

/// Distances and directed weights over E union (V x P).
struct SparseDistanceSet {
  std::size_t node_count = 0;
  /// Sorted by (i, j) with i < j.
  std::vector<SparsePair> pairs;

  const SparsePair* find(NodeId a, NodeId b) const {
    if (a > b)
      std::swap(a, b);
    auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{a, b},
                               [](const SparsePair& p, const std::pair<NodeId, NodeId>& key) {
                                 return std::pair{p.i, p.j} < key;
                               });
    if (it == pairs.end() || it->i != a || it->j != b)
      return nullptr;
    return &*it;
  }

  /// w' used to cap the move of `from` toward `to`.
  double weight_directed(NodeId from, NodeId to) const {
    const SparsePair* p = find(from, to);
    if (p == nullptr)
      return 0.0;
    return from == p->i ? p->weight_ij : p->weight_ji;
  }
};

/// Builds the sparse stress terms: one BFS per pivot, unit-weight edges, and
/// region-boosted pivot weights s * d^-2 where s counts the members of the
/// pivot's region no farther from the pivot than half the node's distance.
inline SparseDistanceSet sparse_shortest_paths(const Graph& g, const PivotSet& pivots) {
  const std::size_t n = g.size();
  std::unordered_map<std::uint64_t, SparsePair> terms;
  terms.reserve(n * pivots.size() + g.edge_count());
  auto slot = [&](NodeId a, NodeId b, double dist) -> SparsePair& {
    if (a > b)
      std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    auto [it, inserted] = terms.try_emplace(key, SparsePair{a, b, dist, 0.0, 0.0});
    return it->second;
  };

  for (std::uint32_t q = 0; q < pivots.size(); ++q) {
    const NodeId p = pivots.pivots[q];
    auto dist = bfs_distances(g, p);

    // cumulative count of region members by distance from p
    std::vector<std::size_t> within;
    for (std::size_t v = 0; v < n; ++v) {
      if (pivots.region[v] != q)
        continue;
      if (dist[v] >= within.size())
        within.resize(dist[v] + 1, 0);
      ++within[dist[v]];
    }
    for (std::size_t d = 1; d < within.size(); ++d)
      within[d] += within[d - 1];

    for (NodeId i = 0; i < n; ++i) {
      if (i == p)
        continue;
      if (dist[i] == kUnreached)
        throw Error("graph is not connected");
      const double d = dist[i];
      SparsePair& term = slot(i, p, d);
      if (dist[i] == 1)
        continue; // neighbour of p: handled as an edge term below
      const std::size_t half = dist[i] / 2;
      const double s =
          static_cast<double>(within.empty() ? 0 : within[std::min(half, within.size() - 1)]);
      const double w = s / (d * d);
      (i == term.i ? term.weight_ij : term.weight_ji) = w;
    }
  }

  for (const Edge& e : g.edges()) {
    SparsePair& term = slot(e.first, e.second, 1.0);
    term.weight_ij = 1.0;
    term.weight_ji = 1.0;
  }

  SparseDistanceSet out;
  out.node_count = n;
  out.pairs.reserve(terms.size());
  for (auto& [key, term] : terms)
    out.pairs.push_back(term);
  std::sort(out.pairs.begin(), out.pairs.end(), [](const SparsePair& a, const SparsePair& b) {
    return std::pair{a.i, a.j} < std::pair{b.i, b.j};
  });
  return out;
}

} // namespace adjstress
