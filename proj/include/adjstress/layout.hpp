#pragma once

#include <adjstress/common.hpp>
#include <adjstress/rng.hpp>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace adjstress {

/// Node coordinates, n rows of `dimension` values (row-major).
class Layout {
public:
  Layout() = default;
  Layout(std::size_t n, std::size_t dimension) : n_(n), dim_(dimension), coords_(n * dimension, 0.0) {}

  std::size_t size() const { return n_; }
  std::size_t dimension() const { return dim_; }

  std::span<double> row(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double& operator()(std::size_t i, std::size_t k) { return coords_[i * dim_ + k]; }
  double operator()(std::size_t i, std::size_t k) const { return coords_[i * dim_ + k]; }

  double distance(std::size_t i, std::size_t j) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double delta = coords_[i * dim_ + k] - coords_[j * dim_ + k];
      sum += delta * delta;
    }
    return std::sqrt(sum);
  }

  bool all_finite() const {
    return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
  }

  const std::vector<double>& data() const { return coords_; }

  friend bool operator==(const Layout&, const Layout&) = default;

private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

struct SgdParams {
  std::size_t iterations = 15;
  double eps = 0.1;
  double d_min = 0.1;
  std::uint64_t seed = 0;
  std::size_t dimension = 2;

  void validate() const {
    if (iterations < 1)
      throw Error("SGD needs at least one iteration");
    if (!(eps > 0.0))
      throw Error("eps must be positive");
    if (!(d_min > 0.0))
      throw Error("d_min must be positive");
    if (dimension < 1 || dimension > 3)
      throw Error("embedding dimension must be 1, 2 or 3");
  }
};

/// Weight of the stress term in the distance-adjusted objective.
/// alpha = 0 is the conventional stress model.
struct AdjustParams {
  double alpha = 0.0;

  /// alpha = 1 - 0.5^k.
  static AdjustParams from_k(int k) {
    if (k < 0)
      throw Error("adjustment exponent k must be nonnegative");
    return AdjustParams{1.0 - std::pow(0.5, k)};
  }

  bool enabled() const { return alpha > 0.0; }

  void validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw Error("alpha must lie in [0, 1)");
  }
};

/// Per-iteration step sizes eta(0..T-1).
struct AnnealingSchedule {
  std::vector<double> eta;

  std::size_t size() const { return eta.size(); }
  double operator[](std::size_t t) const { return eta[t]; }
};

/// Exponential decay from 1/w_min down to eps/w_max over T iterations.
inline AnnealingSchedule make_schedule(double w_min, double w_max, double eps, std::size_t iterations) {
  if (!(w_min > 0.0 && w_min <= w_max))
    throw Error("schedule needs 0 < w_min <= w_max");
  if (iterations < 1)
    throw Error("schedule needs at least one iteration");
  const double eta_max = 1.0 / w_min;
  const double eta_final = eps / w_max;
  AnnealingSchedule s;
  s.eta.reserve(iterations);
  if (iterations == 1) {
    s.eta.push_back(eta_max);
    return s;
  }
  const double decay = std::log(eta_max / eta_final) / static_cast<double>(iterations - 1);
  for (std::size_t t = 0; t < iterations; ++t)
    s.eta.push_back(eta_max * std::exp(-decay * static_cast<double>(t)));
  return s;
}

/// Coordinates drawn i.i.d. uniform in [0, sqrt(n)].
inline Layout initial_placement(std::size_t n, std::size_t dimension, Rng& rng) {
  if (n < 1)
    throw Error("initial placement needs at least one node");
  Layout x(n, dimension);
  const double side = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dimension; ++k)
      x(i, k) = side * rng.uniform();
  return x;
}

inline constexpr double kCoincidentTolerance = 1e-12;
inline constexpr double kCoincidentNudge = 1e-6;

/// Moves X_i and X_j along their connecting line toward separation
/// d_target. The step for each endpoint is capped at min(1, w * eta); a
/// zero weight leaves that endpoint in place. Coincident endpoints are first
/// pulled apart by kCoincidentNudge along a random direction.
inline void pair_step(Layout& x, std::size_t i, std::size_t j, double d_target, double w_i,
                      double w_j, double eta, Rng& rng) {
  const std::size_t dim = x.dimension();
  double dist = x.distance(i, j);
  if (dist < kCoincidentTolerance) {
    double dir[3] = {0.0, 0.0, 0.0};
    double norm = 0.0;
    while (norm < 1e-12) {
      norm = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        dir[k] = rng.normal();
        norm += dir[k] * dir[k];
      }
      norm = std::sqrt(norm);
    }
    for (std::size_t k = 0; k < dim; ++k) {
      x(i, k) -= 0.5 * kCoincidentNudge * dir[k] / norm;
      x(j, k) += 0.5 * kCoincidentNudge * dir[k] / norm;
    }
    dist = x.distance(i, j);
  }

  const double mu_i = std::min(1.0, w_i * eta);
  const double mu_j = std::min(1.0, w_j * eta);
  const double scale = (dist - d_target) / (2.0 * dist);
  for (std::size_t k = 0; k < dim; ++k) {
    const double r = scale * (x(i, k) - x(j, k));
    x(i, k) -= mu_i * r;
    x(j, k) += mu_j * r;
  }
}

/// Minimiser over d' of alpha w (current - d')^2 + 2 (1 - alpha)(d - d')^2.
inline double adjust_distance_unclamped(double d, double w, double current, double alpha) {
  return (alpha * w * current + 2.0 * (1.0 - alpha) * d) / (alpha * w + 2.0 * (1.0 - alpha));
}

/// Optimal adjusted distance clamped to [d_min, d]: the adjusted distance
/// never exceeds the original one.
inline double adjust_distance(double d, double w, double current, double alpha, double d_min) {
  return std::clamp(adjust_distance_unclamped(d, w, current, alpha), d_min, d);
}

/// Writes "id x y" (or "id x y z") per node, shortest round-trip digits.
inline void write_layout(std::ostream& out, const Layout& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << i;
    for (std::size_t k = 0; k < x.dimension(); ++k)
      out << ' ' << format_double_exact(x(i, k));
    out << '\n';
  }
}

inline Layout read_layout(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream fields(line);
    std::string token;
    std::vector<std::string> tokens;
    while (fields >> token)
      tokens.push_back(token);
    if (tokens.size() < 2)
      throw ParseError("layout line needs an id and coordinates: '" + line + "'");
    const auto id = static_cast<std::size_t>(parse_double(tokens[0]));
    if (id != rows.size())
      throw ParseError("layout ids must be 0..n-1 in order");
    if (dim == 0)
      dim = tokens.size() - 1;
    else if (dim != tokens.size() - 1)
      throw ParseError("inconsistent layout dimension");
    std::vector<double> row;
    for (std::size_t k = 1; k < tokens.size(); ++k)
      row.push_back(parse_double(tokens[k]));
    rows.push_back(std::move(row));
  }
  Layout x(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k)
      x(i, k) = rows[i][k];
  return x;
}

} // namespace adjstress
