#pragma once

#include <adjstress/graph.hpp>
#include <adjstress/rng.hpp>

#include <set>

// Small synthetic graphs used as fixtures by the tests and the sweep tool.

namespace adjstress::generators {

inline Graph path(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v < n; ++v)
    pairs.emplace_back(v - 1, v);
  return Graph(n, pairs);
}

inline Graph cycle(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 0; v < n; ++v)
    pairs.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return Graph(n, pairs);
}

/// rows x cols lattice; node id = r * cols + c.
inline Graph grid(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto v = static_cast<NodeId>(r * cols + c);
      if (c + 1 < cols)
        pairs.emplace_back(v, v + 1);
      if (r + 1 < rows)
        pairs.emplace_back(v, static_cast<NodeId>(v + cols));
    }
  }
  return Graph(rows * cols, pairs);
}

/// Node 0 joined to `leaves` leaf nodes. star(3) is the claw K_{1,3}.
inline Graph star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v <= leaves; ++v)
    pairs.emplace_back(0, v);
  return Graph(leaves + 1, pairs);
}

inline Graph complete(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      pairs.emplace_back(a, b);
  return Graph(n, pairs);
}

/// Random spanning tree (each node attaches to an earlier one) plus
/// `extra_edges` uniformly drawn chords. Always connected.
inline Graph random_connected(std::size_t n, std::size_t extra_edges, Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v < n; ++v)
    pairs.emplace_back(static_cast<NodeId>(rng.below(v)), v);
  if (n >= 2) {
    for (std::size_t k = 0; k < extra_edges; ++k) {
      auto a = static_cast<NodeId>(rng.below(n));
      auto b = static_cast<NodeId>(rng.below(n));
      pairs.emplace_back(a, b);
    }
  }
  return Graph(n, pairs);
}

/// Connected graph with exactly `n` nodes and `m` edges (n-1 <= m <= n(n-1)/2).
inline Graph random_connected_exact(std::size_t n, std::size_t m, Rng& rng) {
  std::set<Edge> edges;
  for (NodeId v = 1; v < n; ++v)
    edges.insert(Edge{static_cast<NodeId>(rng.below(v)), v});
  while (edges.size() < m) {
    auto a = static_cast<NodeId>(rng.below(n));
    auto b = static_cast<NodeId>(rng.below(n));
    if (a != b)
      edges.insert(a < b ? Edge{a, b} : Edge{b, a});
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : edges)
    pairs.emplace_back(e.first, e.second);
  return Graph(n, pairs);
}

} // namespace adjstress::generators
