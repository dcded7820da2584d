#include "oracles.hpp"

#include <adjstress/generators.hpp>
#include <adjstress/spectral.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace adjstress;

namespace {

std::vector<std::vector<double>> to_nested(const DistanceMatrix& d) {
  std::vector<std::vector<double>> out(d.size(), std::vector<double>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      out[i][j] = d(i, j);
  return out;
}

std::vector<std::vector<double>> to_nested(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[i][j] = m(i, j);
  return out;
}

Eigen::VectorXd values_of(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v)
    out(k++) = x;
  return out;
}

double max_abs_diff(const DistanceMatrix& a, const DistanceMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

} // namespace

TEST(DoubleCenter, PathP2ByHand) {
  const auto k = double_center(bfs_all_pairs(generators::path(2)));
  EXPECT_NEAR(k(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(k(0, 1), -0.25, 1e-15);
  EXPECT_NEAR(k(1, 0), -0.25, 1e-15);
  EXPECT_NEAR(k(1, 1), 0.25, 1e-15);
  // d^2 = K_ii - 2 K_ij + K_jj
  EXPECT_NEAR(k(0, 0) - 2 * k(0, 1) + k(1, 1), 1.0, 1e-15);
}

TEST(DoubleCenter, MatchesNaiveProductAndRowSumsVanish) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(25);
    const auto d = bfs_all_pairs(generators::random_connected(n, rng.below(n), rng));
    const auto k = double_center(d);
    const auto naive = oracle::double_center_naive(to_nested(d));
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_NEAR(k(i, j), naive[i][j], 1e-10);
        row += k(i, j);
        // a double-centred matrix recovers squared distances
        ASSERT_NEAR(k(i, i) - 2 * k(i, j) + k(j, j), d(i, j) * d(i, j), 1e-9);
      }
      ASSERT_NEAR(row, 0.0, 1e-9);
    }
  }
}

TEST(DoubleCenter, CompleteK4IsHalfCentering) {
  const auto k = double_center(bfs_all_pairs(generators::complete(4)));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(k(i, j), 0.5 * ((i == j ? 1.0 : 0.0) - 0.25), 1e-15);
}

TEST(Eigendecompose, CompleteK4) {
  const auto k = double_center(bfs_all_pairs(generators::complete(4)));
  const auto s = eigendecompose(k);
  const auto jac = oracle::jacobi_eigenvalues(to_nested(k));
  const double expected[4] = {0.5, 0.5, 0.5, 0.0};
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(s.values(c), expected[c], 1e-9);
    EXPECT_NEAR(s.values(c), jac[c], 1e-9);
  }
}

TEST(Eigendecompose, ZeroMatrix) {
  const auto s = eigendecompose(Eigen::MatrixXd::Zero(5, 5));
  for (int c = 0; c < 5; ++c)
    EXPECT_EQ(s.values(c), 0.0);
}

TEST(Eigendecompose, PathP3) {
  const auto s = eigendecompose(double_center(bfs_all_pairs(generators::path(3))));
  EXPECT_NEAR(s.values(0), 2.0, 1e-12);
  EXPECT_NEAR(s.values(1), 0.0, 1e-12);
  EXPECT_NEAR(s.values(2), 0.0, 1e-12);
  // leading eigenvector lies along the line, first entry made positive
  EXPECT_NEAR(s.vectors(0, 0), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(s.vectors(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(s.vectors(2, 0), -std::sqrt(0.5), 1e-12);
}

TEST(Eigendecompose, ClawHasOneNegativeEigenvalue) {
  const auto k = double_center(bfs_all_pairs(generators::star(3)));
  const auto s = eigendecompose(k);
  const auto jac = oracle::jacobi_eigenvalues(to_nested(k));
  int negative = 0;
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(s.values(c), jac[c], 1e-9);
    negative += s.values(c) < -1e-9;
  }
  EXPECT_EQ(negative, 1);
  EXPECT_NEAR(s.values(3), -0.25, 1e-12);
}

TEST(Eigendecompose, PropertiesOnRandomGraphs) {
  Rng rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const auto k = double_center(bfs_all_pairs(generators::random_connected(n, rng.below(n), rng)));
    const auto s = eigendecompose(k);
    const auto jac = oracle::jacobi_eigenvalues(to_nested(k));
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    for (std::size_t c = 0; c < n; ++c) {
      ASSERT_NEAR(s.values(c), jac[c], 1e-8 * scale);
      if (c > 0) {
        ASSERT_GE(s.values(c - 1), s.values(c));
      }
    }
    const Eigen::MatrixXd gram = s.vectors.transpose() * s.vectors;
    ASSERT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::MatrixXd back = s.vectors * s.values.asDiagonal() * s.vectors.transpose();
    ASSERT_LT((back - k).cwiseAbs().maxCoeff(), 1e-9 * scale);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < n; ++r) {
        if (std::abs(s.vectors(r, c)) > 1e-10) {
          ASSERT_GT(s.vectors(r, c), 0.0);
          break;
        }
      }
    }
  }
}

TEST(Eigendecompose, RejectsAsymmetricInput) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(eigendecompose(m), Error);
}

TEST(PercentileMask, ZeroKeepsEverything) {
  const auto m = percentile_mask(values_of({3, -1, 0.2, 0}), 0.0);
  EXPECT_EQ(m.kept(), 4u);
  EXPECT_EQ(m.threshold, 0.0);
}

TEST(PercentileMask, NearestRankOnK4Spectrum) {
  const auto m = percentile_mask(values_of({0.5, 0.5, 0.5, 0.0}), 30.0);
  EXPECT_EQ(m.threshold, 0.5);
  EXPECT_EQ(m.keep, (std::vector<bool>{true, true, true, false}));
}

TEST(PercentileMask, TiesSaturate) {
  for (double p : {0.0, 10.0, 50.0, 99.9})
    EXPECT_EQ(percentile_mask(values_of({-2, 2, 2, -2, 2}), p).kept(), 5u);
}

TEST(PercentileMask, NinetyOnTenDistinctMagnitudes) {
  // rank ceil(0.9 * 10) = 9: the two largest magnitudes reach the threshold
  const auto m = percentile_mask(values_of({10, -9, 8, 7, -6, 5, 4, 3, 2, 1}), 90.0);
  EXPECT_EQ(m.threshold, 9.0);
  EXPECT_EQ(m.kept(), 2u);
  EXPECT_TRUE(m.keep[0]);
  EXPECT_TRUE(m.keep[1]);
}

TEST(PercentileMask, KeptCountIsMonotoneInP) {
  Rng rng(4);
  Eigen::VectorXd v(37);
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v(k) = rng.normal();
  std::size_t prev = v.size();
  for (double p = 0; p < 100; p += 2.5) {
    const auto m = percentile_mask(v, p);
    EXPECT_LE(m.kept(), prev);
    EXPECT_GE(m.kept(), 1u);
    prev = m.kept();
  }
}

TEST(PercentileMask, RejectsOutOfRange) {
  EXPECT_THROW(percentile_mask(values_of({1, 2}), -1.0), Error);
  EXPECT_THROW(percentile_mask(values_of({1, 2}), 100.0), Error);
  EXPECT_THROW(percentile_mask(values_of({1, 2}), std::nan("")), Error);
}

TEST(Reconstruct, SignedFullRankRoundTrip) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const auto d = bfs_all_pairs(generators::random_connected(n, rng.below(2 * n), rng));
    EXPECT_LT(max_abs_diff(lr_adjusted_matrix(d, 0.0), d), 1e-8);
  }
}

TEST(Reconstruct, K4DroppingZeroEigenvalue) {
  const auto d = bfs_all_pairs(generators::complete(4));
  const auto s = eigendecompose(double_center(d));
  const auto m = percentile_mask(s.values, 30.0);
  ASSERT_EQ(m.kept(), 3u);
  EXPECT_LT(max_abs_diff(reconstruct_distance_matrix(s, m, 0.1), d), 1e-12);
}

TEST(Reconstruct, P2KeepsUnitDistance) {
  const auto d = bfs_all_pairs(generators::path(2));
  const auto s = eigendecompose(double_center(d));
  EXPECT_NEAR(s.values(0), 0.5, 1e-15);
  EXPECT_NEAR(s.values(1), 0.0, 1e-15);
  const auto out = reconstruct_distance_matrix(s, percentile_mask(s.values, 0.0), 0.1);
  EXPECT_NEAR(out(0, 1), 1.0, 1e-12);
}

TEST(Reconstruct, ClawWithoutNegativeEigenvalue) {
  const auto d = bfs_all_pairs(generators::star(3));
  const auto out = lr_adjusted_matrix(d, 60.0);
  // centre to leaf sqrt(4/3), leaves stay 2 apart
  for (int leaf = 1; leaf <= 3; ++leaf)
    EXPECT_NEAR(out(0, leaf), std::sqrt(4.0 / 3.0), 1e-9);
  EXPECT_NEAR(out(1, 2), 2.0, 1e-9);
  const auto recentred = eigendecompose(double_center(out));
  EXPECT_GE(recentred.values.minCoeff(), -1e-8);
}

TEST(Reconstruct, FloorAndSymmetry) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    const auto d = bfs_all_pairs(generators::random_connected(n, rng.below(n), rng));
    for (double p : {50.0, 80.0, 95.0}) {
      for (auto mode : {ReconstructionMode::signed_eigenvalues, ReconstructionMode::hermitian}) {
        const auto out = lr_adjusted_matrix(d, p, 0.3, mode);
        for (std::size_t i = 0; i < n; ++i) {
          ASSERT_EQ(out(i, i), 0.0);
          for (std::size_t j = 0; j < n; ++j) {
            ASSERT_EQ(out(i, j), out(j, i));
            if (i != j) {
              ASSERT_GE(out(i, j), 0.3);
            }
          }
        }
      }
    }
  }
}

TEST(Reconstruct, HermitianGramIsPositiveSemidefinite) {
  const auto d = bfs_all_pairs(generators::star(5));
  const auto s = eigendecompose(double_center(d));
  const auto gram = reconstruct_gram(s, percentile_mask(s.values, 0.0),
                                     ReconstructionMode::hermitian);
  const auto again = eigendecompose(gram);
  EXPECT_GE(again.values.minCoeff(), -1e-10);
}

TEST(Reconstruct, MaskSizeMismatchThrows) {
  const auto s = eigendecompose(double_center(bfs_all_pairs(generators::path(3))));
  TruncationMask m;
  m.keep = {true};
  EXPECT_THROW(reconstruct_gram(s, m, ReconstructionMode::signed_eigenvalues), Error);
  EXPECT_THROW(distances_from_gram(Eigen::MatrixXd::Zero(2, 2), 0.0), Error);
}

TEST(SpectrumCsv, ListsEveryEigenvalue) {
  const auto s = eigendecompose(double_center(bfs_all_pairs(generators::complete(4))));
  std::ostringstream out;
  write_spectrum_csv(out, s, percentile_mask(s.values, 30.0));
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line))
    lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "index,value,kept");
  EXPECT_EQ(lines[1].substr(0, 2), "0,");
  EXPECT_EQ(lines[4].back(), '0');
  EXPECT_EQ(lines[1].back(), '1');
}
