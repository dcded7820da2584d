#pragma once

#include <adjstress/graph.hpp>
#include <adjstress/layout.hpp>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <set>

namespace adjstress {

/// The nine drawing-quality measures of one layout. Larger is better for
/// aspect_ratio and neighborhood_preservation, smaller for the rest.
struct QualityReport {
  double stress = 0.0;
  double ideal_edge_lengths = 0.0;
  double neighborhood_preservation = 0.0;
  double crossing_number = 0.0;
  double crossing_angle = 0.0;
  double aspect_ratio = 0.0;
  double angular_resolution = 0.0;
  double node_resolution = 0.0;
  double gabriel_property = 0.0;
};

/// Stable serialization order and short field names.
inline constexpr std::array<const char*, 9> kMetricNames = {"stress", "il", "np", "cn", "ca",
                                                            "ar",     "anr", "nr", "gb"};

inline std::array<double, 9> metric_values(const QualityReport& r) {
  return {r.stress,         r.ideal_edge_lengths, r.neighborhood_preservation,
          r.crossing_number, r.crossing_angle,     r.aspect_ratio,
          r.angular_resolution, r.node_resolution, r.gabriel_property};
}

inline QualityReport report_from_values(const std::array<double, 9>& v) {
  return QualityReport{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

/// True for metrics where a larger value is the better drawing.
inline bool higher_is_better(std::size_t metric_index) {
  return metric_index == 2 || metric_index == 5;
}

/// Stress against D with w = d^-2, summed over i < j.
inline double stress(const Layout& x, const DistanceMatrix& d) {
  if (x.size() != d.size())
    throw Error("layout and distance matrix sizes differ");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dij = d(i, j);
      const double diff = x.distance(i, j) - dij;
      total += diff * diff / (dij * dij);
    }
  }
  return total;
}

/// Sum over edges of the squared relative edge-length error.
inline double ideal_edge_lengths(const Layout& x, const Graph& g, const DistanceMatrix& d) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double dij = d(e.first, e.second);
    const double rel = (x.distance(e.first, e.second) - dij) / dij;
    total += rel * rel;
  }
  return total;
}

/// Jaccard similarity of E and the degree-k nearest-neighbour shape graph
/// (kNN pairs taken as unordered; distance ties go to the lower node id).
inline double neighborhood_preservation(const Layout& x, const Graph& g) {
  const std::size_t n = x.size();
  std::set<Edge> shape;
  std::vector<std::pair<double, NodeId>> candidates;
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t k = std::min(g.degree(i), n - 1);
    if (k == 0)
      continue;
    candidates.clear();
    for (NodeId j = 0; j < n; ++j) {
      if (j == i)
        continue;
      double sq = 0.0;
      for (std::size_t c = 0; c < x.dimension(); ++c) {
        const double delta = x(i, c) - x(j, c);
        sq += delta * delta;
      }
      candidates.emplace_back(sq, j);
    }
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     candidates.end());
    const auto kth = candidates[k - 1];
    for (const auto& c : candidates) {
      if (c <= kth) {
        const NodeId j = c.second;
        shape.insert(i < j ? Edge{i, j} : Edge{j, i});
      }
    }
  }
  std::size_t common = 0;
  for (const Edge& e : g.edges())
    common += shape.count(e);
  const std::size_t unite = g.edge_count() + shape.size() - common;
  return unite == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(unite);
}

namespace geometry {

struct Point {
  double x;
  double y;
};

inline Point planar(const Layout& layout, std::size_t i) {
  return Point{layout(i, 0), layout.dimension() > 1 ? layout(i, 1) : 0.0};
}

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise,
/// 0 collinear. A floating-point filter decides most cases; near-degenerate
/// ones are re-evaluated exactly in rational arithmetic.
inline int orientation(Point a, Point b, Point c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  constexpr double kEps = 0x1.0p-53;
  constexpr double kBound = (3.0 + 16.0 * kEps) * kEps;
  const double err = kBound * (std::abs(left) + std::abs(right));
  if (det > err)
    return 1;
  if (-det > err)
    return -1;

  using boost::multiprecision::cpp_rational;
  const cpp_rational exact = (cpp_rational(a.x) - cpp_rational(c.x)) *
                                 (cpp_rational(b.y) - cpp_rational(c.y)) -
                             (cpp_rational(a.y) - cpp_rational(c.y)) *
                                 (cpp_rational(b.x) - cpp_rational(c.x));
  return exact.sign();
}

/// c known collinear with a-b: is it inside their bounding box?
inline bool within_box(Point a, Point b, Point c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test; touching and collinear overlap count.
inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  if (std::max(p1.x, p2.x) < std::min(q1.x, q2.x) || std::max(q1.x, q2.x) < std::min(p1.x, p2.x) ||
      std::max(p1.y, p2.y) < std::min(q1.y, q2.y) || std::max(q1.y, q2.y) < std::min(p1.y, p2.y))
    return false;
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0)
    return true;
  return (o1 == 0 && within_box(p1, p2, q1)) || (o2 == 0 && within_box(p1, p2, q2)) ||
         (o3 == 0 && within_box(q1, q2, p1)) || (o4 == 0 && within_box(q1, q2, p2));
}

} // namespace geometry

struct CrossingSummary {
  std::size_t count = 0;
  /// Sum of squared cosines between the crossing edges' directions.
  double cos2_sum = 0.0;
};

/// All crossings between edge pairs that share no endpoint (O(|E|^2)).
inline CrossingSummary edge_crossings(const Layout& x, const Graph& g) {
  using geometry::Point;
  const auto& edges = g.edges();
  std::vector<std::array<Point, 2>> seg(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    seg[e] = {geometry::planar(x, edges[e].first), geometry::planar(x, edges[e].second)};

  CrossingSummary out;
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const Edge& ea = edges[a];
      const Edge& eb = edges[b];
      if (ea.first == eb.first || ea.first == eb.second || ea.second == eb.first ||
          ea.second == eb.second)
        continue;
      if (!geometry::segments_intersect(seg[a][0], seg[a][1], seg[b][0], seg[b][1]))
        continue;
      ++out.count;
      const double ax = seg[a][0].x - seg[a][1].x, ay = seg[a][0].y - seg[a][1].y;
      const double bx = seg[b][0].x - seg[b][1].x, by = seg[b][0].y - seg[b][1].y;
      const double norms = std::hypot(ax, ay) * std::hypot(bx, by);
      // a zero-length edge has no direction and contributes no angle penalty
      if (norms > 0.0) {
        const double c = (ax * bx + ay * by) / norms;
        out.cos2_sum += c * c;
      }
    }
  }
  return out;
}

inline std::size_t crossing_number(const Layout& x, const Graph& g) {
  return edge_crossings(x, g).count;
}

inline double crossing_angle(const Layout& x, const Graph& g) {
  return edge_crossings(x, g).cos2_sum;
}

/// sigma_2 / sigma_1 of the centred coordinate matrix.
inline double aspect_ratio(const Layout& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto m = static_cast<Eigen::Index>(x.dimension());
  if (n == 0 || m < 2)
    return 0.0;
  Eigen::MatrixXd c(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k)
      c(i, k) = x(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
  c.rowwise() -= c.colwise().mean();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c.transpose() * c, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues(); // ascending
  const double s1 = std::sqrt(std::max(0.0, ev(m - 1)));
  const double s2 = std::sqrt(std::max(0.0, ev(m - 2)));
  if (!(s1 > 0.0)) {
    warn("aspect ratio of a layout with all points coincident; reporting 0");
    return 0.0;
  }
  return s2 / s1;
}

/// Sum of exp(-angle) over all unordered pairs of edges sharing a node.
inline double angular_resolution(const Layout& x, const Graph& g) {
  double total = 0.0;
  const std::size_t dim = x.dimension();
  std::vector<double> va(dim), vb(dim);
  for (NodeId j = 0; j < g.size(); ++j) {
    const auto& nbrs = g.neighbors(j);
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          va[k] = x(nbrs[a], k) - x(j, k);
          vb[k] = x(nbrs[b], k) - x(j, k);
          dot += va[k] * vb[k];
          na += va[k] * va[k];
          nb += vb[k] * vb[k];
        }
        // a zero-length edge makes the angle 0 (worst case)
        double angle = 0.0;
        if (na > 0.0 && nb > 0.0)
          angle = std::acos(std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0));
        total += std::exp(-angle);
      }
    }
  }
  return total;
}

/// Sum over i < j of (1 - |X_i - X_j| / (r d_max))^2 with r = 1/sqrt(n).
inline double node_resolution(const Layout& x) {
  const std::size_t n = x.size();
  if (n < 2)
    return 0.0;
  double d_max = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d_max = std::max(d_max, x.distance(i, j));
  const double scale = d_max / std::sqrt(static_cast<double>(n));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ratio = scale > 0.0 ? x.distance(i, j) / scale : 0.0;
      total += (1.0 - ratio) * (1.0 - ratio);
    }
  }
  return total;
}

/// Penalty for nodes strictly inside the circle whose diameter is an edge.
inline double gabriel_property(const Layout& x, const Graph& g) {
  const std::size_t dim = x.dimension();
  std::vector<double> centre(dim);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    for (std::size_t k = 0; k < dim; ++k)
      centre[k] = 0.5 * (x(e.first, k) + x(e.second, k));
    const double radius = 0.5 * x.distance(e.first, e.second);
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (v == e.first || v == e.second)
        continue;
      double sq = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double delta = x(v, k) - centre[k];
        sq += delta * delta;
      }
      const double gap = radius - std::sqrt(sq);
      if (gap > 0.0)
        total += gap * gap;
    }
  }
  return total;
}

/// All nine metrics; stress and ideal edge lengths use `original`, the
/// unadjusted graph-theoretic distances.
inline QualityReport full_report(const Layout& x, const Graph& g, const DistanceMatrix& original) {
  if (x.size() != g.size())
    throw Error("layout does not match the graph");
  QualityReport r;
  r.stress = stress(x, original);
  r.ideal_edge_lengths = ideal_edge_lengths(x, g, original);
  r.neighborhood_preservation = neighborhood_preservation(x, g);
  const CrossingSummary crossings = edge_crossings(x, g);
  r.crossing_number = static_cast<double>(crossings.count);
  r.crossing_angle = crossings.cos2_sum;
  r.aspect_ratio = aspect_ratio(x);
  r.angular_resolution = angular_resolution(x, g);
  r.node_resolution = node_resolution(x);
  r.gabriel_property = gabriel_property(x, g);
  return r;
}

} // namespace adjstress
