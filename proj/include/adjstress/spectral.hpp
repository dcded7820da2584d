#pragma once

#include <adjstress/graph.hpp>

#include <Eigen/Dense>

#include <ostream>

namespace adjstress {

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
/// Column k of `vectors` belongs to values[k].
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// Which eigenvalues survive truncation, and the threshold that chose them.
struct TruncationMask {
  double percentile = 0.0;
  double threshold = 0.0;
  std::vector<bool> keep;

  std::size_t kept() const { return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true)); }
};

/// How a kept eigenpair contributes to the reconstructed Gram matrix.
enum class ReconstructionMode {
  /// lambda_k u_k u_k^T. Full reconstruction returns the input distances.
  signed_eigenvalues,
  /// |lambda_k| u_k u_k^T, i.e. the conjugate product of imaginary
  /// coordinates. Squared distances can never go negative.
  hermitian,
};

inline constexpr double kDefaultMinDistance = 0.1;

/// Gram matrix K = -1/2 H (D o D) H with H = I - J/n.
inline Eigen::MatrixXd double_center(const DistanceMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd sq(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = d(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      sq(i, j) = v * v;
    }
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double grand_mean = sq.mean();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      k(i, j) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + grand_mean);
  return k;
}

/// Dense symmetric eigendecomposition (Householder tridiagonalisation +
/// implicit QR). Each eigenvector is oriented so that its first component
/// with magnitude above 1e-10 is positive.
inline Spectrum eigendecompose(const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols())
    throw Error("eigendecompose: matrix is not square");
  const double asym = k.size() == 0 ? 0.0 : (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9)
    throw Error("eigendecompose: matrix is not symmetric (max asymmetry " +
                format_double(asym, 3) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecompose: solver did not converge for n = " +
                         std::to_string(k.rows()));

  const Eigen::Index n = k.rows();
  Spectrum out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = n - 1 - c;
    out.values(c) = solver.eigenvalues()(src);
    Eigen::VectorXd u = solver.eigenvectors().col(src);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(u(r)) > 1e-10) {
        if (u(r) < 0)
          u = -u;
        break;
      }
    }
    out.vectors.col(c) = u;
  }
  return out;
}

/// Nearest-rank percentile mask: the threshold is the ceil(p/100 * n)-th
/// smallest |lambda| (the smallest when that rank is 0), and an eigenvalue is
/// kept when |lambda| >= threshold.
inline TruncationMask percentile_mask(const Eigen::VectorXd& eigenvalues, double p) {
  if (!(p >= 0.0 && p < 100.0))
    throw Error("percentile must lie in [0, 100), got " + format_double(p, 6));
  const auto n = static_cast<std::size_t>(eigenvalues.size());
  TruncationMask mask;
  mask.percentile = p;
  mask.keep.assign(n, true);
  if (n == 0)
    return mask;

  std::vector<double> magnitudes(n);
  for (std::size_t k = 0; k < n; ++k)
    magnitudes[k] = std::abs(eigenvalues(static_cast<Eigen::Index>(k)));
  std::vector<double> sorted = magnitudes;
  std::sort(sorted.begin(), sorted.end());

  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, n);
  mask.threshold = sorted[rank - 1];
  for (std::size_t k = 0; k < n; ++k)
    mask.keep[k] = magnitudes[k] >= mask.threshold;
  return mask;
}

/// K' = sum over kept k of c_k u_k u_k^T.
inline Eigen::MatrixXd reconstruct_gram(const Spectrum& spectrum, const TruncationMask& mask,
                                        ReconstructionMode mode) {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  if (mask.keep.size() != spectrum.size())
    throw Error("truncation mask does not match the spectrum");
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < n; ++k)
    if (mask.keep[static_cast<std::size_t>(k)])
      kept.push_back(k);

  const auto r = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd basis(n, r);
  Eigen::VectorXd scale(r);
  for (Eigen::Index c = 0; c < r; ++c) {
    basis.col(c) = spectrum.vectors.col(kept[static_cast<std::size_t>(c)]);
    const double lambda = spectrum.values(kept[static_cast<std::size_t>(c)]);
    scale(c) = mode == ReconstructionMode::hermitian ? std::abs(lambda) : lambda;
  }
  return basis * scale.asDiagonal() * basis.transpose();
}

/// D'_ij = sqrt(max(0, K'_ii - 2 K'_ij + K'_jj)), off-diagonal entries
/// raised to at least d_min.
inline DistanceMatrix distances_from_gram(const Eigen::MatrixXd& gram, double d_min) {
  if (!(d_min > 0.0))
    throw Error("d_min must be positive");
  const auto n = static_cast<std::size_t>(gram.rows());
  DistanceMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double sq = gram(ii, ii) - 2.0 * gram(ii, jj) + gram(jj, jj);
      out.set(i, j, std::max(d_min, std::sqrt(std::max(0.0, sq))));
    }
  }
  return out;
}

inline DistanceMatrix reconstruct_distance_matrix(const Spectrum& spectrum,
                                                  const TruncationMask& mask, double d_min,
                                                  ReconstructionMode mode =
                                                      ReconstructionMode::signed_eigenvalues) {
  return distances_from_gram(reconstruct_gram(spectrum, mask, mode), d_min);
}

/// Low-rank adjusted distance matrix: double centering, eigendecomposition,
/// percentile truncation, reconstruction.
inline DistanceMatrix lr_adjusted_matrix(const DistanceMatrix& d, double p,
                                         double d_min = kDefaultMinDistance,
                                         ReconstructionMode mode =
                                             ReconstructionMode::signed_eigenvalues) {
  const Spectrum spectrum = eigendecompose(double_center(d));
  return reconstruct_distance_matrix(spectrum, percentile_mask(spectrum.values, p), d_min, mode);
}

/// Diagnostic dump: "index,value,kept" per eigenvalue.
inline void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum,
                               const TruncationMask& mask) {
  out << "index,value,kept\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    out << k << ',' << format_double(spectrum.values(static_cast<Eigen::Index>(k)), 17) << ','
        << (mask.keep[k] ? 1 : 0) << '\n';
}

} // namespace adjstress
