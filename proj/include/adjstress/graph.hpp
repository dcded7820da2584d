#pragma once

#include <adjstress/common.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace adjstress {

/// Unordered node pair stored with first < second.
struct Edge {
  NodeId first;
  NodeId second;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with dense node ids 0..n-1.
///
/// Construction drops self-loops and duplicate edges. Connectivity is not
/// checked here; use largest_component() or parse_matrix_market() to obtain
/// a connected graph.
class Graph {
public:
  Graph() = default;

  Graph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) : adjacency_(n) {
    edges_.reserve(pairs.size());
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n)
        throw Error("edge endpoint out of range");
      if (a == b)
        continue;
      edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const Edge& e : edges_) {
      adjacency_[e.first].push_back(e.second);
      adjacency_[e.second].push_back(e.first);
    }
    for (auto& nbrs : adjacency_)
      std::sort(nbrs.begin(), nbrs.end());
  }

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_edge(NodeId a, NodeId b) const {
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
  }

private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// Dense symmetric matrix of ideal distances, row-major.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), d_(n * n, fill) {
    for (std::size_t i = 0; i < n; ++i)
      d_[i * n + i] = 0.0;
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }

  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  const std::vector<double>& data() const { return d_; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

/// Hop distances from one source; unreachable nodes get kUnreached.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  std::vector<std::uint32_t> dist(g.size(), kUnreached);
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

/// All-pairs hop distances, one BFS per source. The graph must be connected.
inline DistanceMatrix bfs_all_pairs(const Graph& g) {
  const std::size_t n = g.size();
  DistanceMatrix d(n);
  for (NodeId s = 0; s < n; ++s) {
    auto row = bfs_distances(g, s);
    for (std::size_t t = 0; t < n; ++t) {
      if (row[t] == kUnreached)
        throw Error("graph is not connected");
      d(s, t) = static_cast<double>(row[t]);
    }
  }
  return d;
}

/// Connected component labels; components are numbered in order of their
/// smallest node id.
inline std::vector<std::uint32_t> component_labels(const Graph& g) {
  std::vector<std::uint32_t> label(g.size(), kUnreached);
  std::uint32_t next = 0;
  for (NodeId s = 0; s < g.size(); ++s) {
    if (label[s] != kUnreached)
      continue;
    std::queue<NodeId> frontier;
    label[s] = next;
    frontier.push(s);
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop();
      for (NodeId w : g.neighbors(v)) {
        if (label[w] == kUnreached) {
          label[w] = next;
          frontier.push(w);
        }
      }
    }
    ++next;
  }
  return label;
}

inline bool is_connected(const Graph& g) {
  if (g.size() == 0)
    return false;
  auto labels = component_labels(g);
  return std::all_of(labels.begin(), labels.end(), [](auto l) { return l == 0; });
}

/// Result of normalizing raw input into a connected graph.
struct NormalizedGraph {
  Graph graph;
  std::size_t dropped_nodes = 0;
  /// original_ids[v] is the input node id of node v in `graph`.
  std::vector<NodeId> original_ids;
};

/// Largest connected component, re-indexed densely in original order.
/// Ties between equally large components go to the one with the smallest id.
inline NormalizedGraph largest_component(const Graph& g) {
  if (g.size() == 0)
    throw Error("empty graph");
  auto labels = component_labels(g);
  std::vector<std::size_t> sizes(*std::max_element(labels.begin(), labels.end()) + 1, 0);
  for (auto l : labels)
    ++sizes[l];
  const auto keep = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  NormalizedGraph out;
  std::vector<NodeId> remap(g.size(), kUnreached);
  for (NodeId v = 0; v < g.size(); ++v) {
    if (labels[v] == keep) {
      remap[v] = static_cast<NodeId>(out.original_ids.size());
      out.original_ids.push_back(v);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : g.edges())
    if (labels[e.first] == keep)
      pairs.emplace_back(remap[e.first], remap[e.second]);
  out.graph = Graph(out.original_ids.size(), pairs);
  out.dropped_nodes = g.size() - out.original_ids.size();
  return out;
}

namespace detail {

inline std::string lowercase(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // namespace detail

/// Reads a Matrix Market coordinate file as an unweighted undirected graph.
///
/// Entry values are ignored. The pattern is symmetrized, self-loops and
/// duplicates are dropped, and only the largest connected component is kept.
inline NormalizedGraph parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty Matrix Market stream");

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket")
    throw ParseError("missing %%MatrixMarket banner");
  object = detail::lowercase(object);
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (object != "matrix")
    throw ParseError("unsupported Matrix Market object '" + object + "'");
  if (format != "coordinate")
    throw ParseError("only coordinate format is supported, got '" + format + "'");
  if (field != "pattern" && field != "integer" && field != "real" && field != "complex")
    throw ParseError("unsupported Matrix Market field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
      symmetry != "hermitian")
    throw ParseError("unsupported Matrix Market symmetry '" + symmetry + "'");

  // skip comments and blank lines up to the size line
  do {
    if (!std::getline(in, line))
      throw ParseError("missing size line");
  } while (line.empty() || line[0] == '%' ||
           line.find_first_not_of(" \t\r") == std::string::npos);

  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
      throw ParseError("malformed size line: '" + line + "'");
  }
  if (rows != cols)
    throw ParseError("adjacency matrix must be square");

  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(static_cast<std::size_t>(nnz));
  long long seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    if (line.empty() || line[0] == '%' || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream entry(line);
    long long r = 0, c = 0;
    if (!(entry >> r >> c))
      throw ParseError("malformed entry line: '" + line + "'");
    if (r < 1 || c < 1 || r > rows || c > cols)
      throw ParseError("entry index out of range: '" + line + "'");
    pairs.emplace_back(static_cast<NodeId>(r - 1), static_cast<NodeId>(c - 1));
    ++seen;
  }
  if (seen < nnz)
    throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                     std::to_string(seen));

  Graph raw(static_cast<std::size_t>(rows), pairs);
  if (raw.edge_count() == 0)
    throw ParseError("graph has no edges after removing self-loops");
  auto out = largest_component(raw);
  if (out.dropped_nodes > 0)
    warn("kept largest component of " + std::to_string(out.graph.size()) + " nodes, dropped " +
         std::to_string(out.dropped_nodes));
  return out;
}

inline NormalizedGraph parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

} // namespace adjstress
