#pragma once

#include <adjstress/graph.hpp>
#include <adjstress/layout.hpp>
#include <adjstress/pivots.hpp>
#include <adjstress/spectral.hpp>

namespace adjstress {

/// No-op instrumentation hooks for the SGD drivers. Derive and hide the
/// members you need; the drivers call them through the concrete type.
struct NoObserver {
  /// One placement-phase pair update.
  void placement_step(std::size_t /*i*/, std::size_t /*j*/) {}
  /// One adjustment-phase result for pair (i, j).
  void adjusted(std::size_t /*i*/, std::size_t /*j*/, double /*original*/, double /*adjusted*/) {}
  /// Called after both phases of iteration t.
  void iteration_done(std::size_t /*t*/, const Layout& /*x*/) {}
};

/// FullSGD over all node pairs with the optional distance-adjustment phase.
///
/// RNG consumption (stream RngStream::layout of params.seed): initial
/// placement draws n * dimension uniforms, then each iteration shuffles the
/// pair list once. Coincident-point nudges draw extra normals when they
/// occur. With alpha = 0 the adjustment phase is skipped entirely.
template <class Observer = NoObserver>
Layout full_sgd(const Graph& g, const DistanceMatrix& d, const AdjustParams& adjust,
                const SgdParams& params, Observer&& observer = Observer{}) {
  params.validate();
  adjust.validate();
  const std::size_t n = d.size();
  if (n != g.size())
    throw Error("distance matrix does not match the graph");

  Rng rng = make_rng(params.seed, RngStream::layout);
  Layout x = initial_placement(n, params.dimension, rng);
  if (n < 2)
    return x;

  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  double w_min = std::numeric_limits<double>::infinity();
  double w_max = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double dij = d(i, j);
      if (!(dij > 0.0) || !std::isfinite(dij))
        throw Error("ideal distances must be positive and finite");
      const double w = 1.0 / (dij * dij);
      w_min = std::min(w_min, w);
      w_max = std::max(w_max, w);
      pairs.emplace_back(i, j);
    }
  }
  const AnnealingSchedule schedule = make_schedule(w_min, w_max, params.eps, params.iterations);

  DistanceMatrix adjusted;
  if (adjust.enabled())
    adjusted = d;
  const DistanceMatrix& target = adjust.enabled() ? adjusted : d;

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    rng.shuffle(std::span(pairs));
    const double eta = schedule[t];
    for (auto [i, j] : pairs) {
      const double dij = d(i, j);
      const double w = 1.0 / (dij * dij);
      pair_step(x, i, j, target(i, j), w, w, eta, rng);
      observer.placement_step(i, j);
    }
    if (adjust.enabled()) {
      for (auto [i, j] : pairs) {
        const double dij = d(i, j);
        const double updated =
            adjust_distance(dij, 1.0 / (dij * dij), x.distance(i, j), adjust.alpha, params.d_min);
        adjusted.set(i, j, updated);
        observer.adjusted(i, j, dij, updated);
      }
    }
    observer.iteration_done(t, x);
  }
  return x;
}

/// SparseSGD over E union (V x P) with per-endpoint step caps from the
/// directed weights, plus the optional distance-adjustment phase on the
/// sparse pairs (which uses the plain weight d^-2).
///
/// RNG consumption matches full_sgd: placement, then one shuffle per
/// iteration, all from stream RngStream::layout of params.seed.
template <class Observer = NoObserver>
Layout sparse_sgd(const Graph& g, const SparseDistanceSet& sparse, const AdjustParams& adjust,
                  const SgdParams& params, Observer&& observer = Observer{}) {
  params.validate();
  adjust.validate();
  const std::size_t n = g.size();
  if (sparse.node_count != n)
    throw Error("sparse distance set does not match the graph");

  Rng rng = make_rng(params.seed, RngStream::layout);
  Layout x = initial_placement(n, params.dimension, rng);
  if (sparse.pairs.empty())
    return x;

  struct Term {
    NodeId i, j;
    double dist, target, w_ij, w_ji;
  };
  std::vector<Term> terms;
  terms.reserve(sparse.pairs.size());
  double w_min = std::numeric_limits<double>::infinity();
  double w_max = 0.0;
  for (const SparsePair& p : sparse.pairs) {
    if (!(p.dist > 0.0))
      throw Error("sparse distances must be positive");
    terms.push_back(Term{p.i, p.j, p.dist, p.dist, p.weight_ij, p.weight_ji});
    for (double w : {p.weight_ij, p.weight_ji}) {
      if (w > 0.0)
        w_min = std::min(w_min, w);
      w_max = std::max(w_max, w);
    }
  }
  if (!(w_max > 0.0))
    throw Error("sparse distance set has no positive weights");
  const AnnealingSchedule schedule = make_schedule(w_min, w_max, params.eps, params.iterations);

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    rng.shuffle(std::span(terms));
    const double eta = schedule[t];
    for (const Term& term : terms) {
      pair_step(x, term.i, term.j, term.target, term.w_ij, term.w_ji, eta, rng);
      observer.placement_step(term.i, term.j);
    }
    if (adjust.enabled()) {
      for (Term& term : terms) {
        term.target = adjust_distance(term.dist, 1.0 / (term.dist * term.dist),
                                      x.distance(term.i, term.j), adjust.alpha, params.d_min);
        observer.adjusted(term.i, term.j, term.dist, term.target);
      }
    }
    observer.iteration_done(t, x);
  }
  return x;
}

/// LR-SGD: FullSGD (no adjustment phase) on the low-rank adjusted distance
/// matrix, with weights taken from the adjusted distances.
template <class Observer = NoObserver>
Layout lr_sgd(const Graph& g, double percentile, const SgdParams& params,
              ReconstructionMode mode = ReconstructionMode::signed_eigenvalues,
              Observer&& observer = Observer{}) {
  params.validate();
  const DistanceMatrix adjusted = lr_adjusted_matrix(bfs_all_pairs(g), percentile, params.d_min, mode);
  return full_sgd(g, adjusted, AdjustParams{}, params, std::forward<Observer>(observer));
}

} // namespace adjstress
