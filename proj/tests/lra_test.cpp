#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "urbanlra/lra.hpp"

using namespace urbanlra;

namespace {

// Singular values from the Gram matrix via Eigen's symmetric solver.
std::vector<double> gram_singular_values(const Matrix& m) {
  const bool tall = m.rows() >= m.cols();
  const std::size_t p = std::min(m.rows(), m.cols());
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  const Eigen::MatrixXd g = tall ? Eigen::MatrixXd(a.transpose() * a) : Eigen::MatrixXd(a * a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  std::vector<double> s;
  for (Eigen::Index i = static_cast<Eigen::Index>(p); i-- > 0;)
    s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  return s;
}

double orthogonality_defect(const Matrix& q) {
  const Matrix g = q.transposed() * q;
  return frobenius_norm(g - Matrix::identity(g.rows()));
}

}  // namespace

TEST(Svd, MatchesGramEigenvaluesOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{30, 12}, {12, 30}, {50, 50}, {144, 20}}) {
    const Matrix a = testutil::random_matrix(m, n, rng);
    const auto f = svd(a);
    const auto ref = gram_singular_values(a);
    ASSERT_EQ(f.S.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(f.S[i], ref[i], 1e-9 * ref[0]) << m << "x" << n;
    EXPECT_LT(orthogonality_defect(f.U), 1e-10);
    EXPECT_LT(orthogonality_defect(f.V), 1e-10);
  }
}

TEST(Svd, ReconstructsInput) {
  std::mt19937_64 rng(3);
  const Matrix a = testutil::random_matrix(40, 17, rng);
  const auto f = svd(a);
  const Matrix back = reconstruct(truncate(f, f.S.size()));
  EXPECT_LT(frobenius_norm(back - a), 1e-12 * frobenius_norm(a));
}

TEST(Svd, SingularValuesSortedAndSignConvention) {
  std::mt19937_64 rng(5);
  const auto f = svd(testutil::random_matrix(25, 10, rng));
  EXPECT_TRUE(std::is_sorted(f.S.rbegin(), f.S.rend()));
  for (std::size_t c = 0; c < f.U.cols(); ++c) {
    const auto col = f.U.column(c);
    const auto it = std::max_element(col.begin(), col.end(),
                                     [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    EXPECT_GE(*it, 0.0);
  }
}

TEST(Svd, HandMatrixDiagonal) {
  Matrix a(3, 2);
  a(0, 0) = 3.0;
  a(1, 1) = -4.0;
  const auto f = svd(a);
  EXPECT_NEAR(f.S[0], 4.0, 1e-14);
  EXPECT_NEAR(f.S[1], 3.0, 1e-14);
  // Largest |U| entry nonnegative, so the sign lands on V.
  EXPECT_NEAR(f.U(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(f.V(1, 0), -1.0, 1e-14);
}

TEST(Svd, RankDeficientGetsCompleteOrthonormalBasis) {
  std::mt19937_64 rng(9);
  const Matrix a = testutil::low_rank_counts(30, 20, 3, rng);
  const auto f = svd(a);
  for (std::size_t i = 3; i < f.S.size(); ++i) EXPECT_LT(f.S[i], 1e-10 * f.S[0]);
  EXPECT_LT(orthogonality_defect(f.U), 1e-10);
  EXPECT_LT(orthogonality_defect(f.V), 1e-10);
  EXPECT_NEAR(energy_ratio(f.S, 3), 1.0, 1e-12);
}

TEST(Svd, ZeroMatrixHasZeroSpectrumAndOrthonormalFactors) {
  const auto f = svd(Matrix(4, 3));
  for (double s : f.S) EXPECT_EQ(s, 0.0);
  EXPECT_LT(orthogonality_defect(f.U), 1e-12);
  EXPECT_LT(orthogonality_defect(f.V), 1e-12);
}

TEST(Svd, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(svd(Matrix()), InvalidArgument);
  Matrix a(2, 2, 1.0);
  a(1, 0) = std::nan("");
  EXPECT_THROW(svd(a), InvalidArgument);
}

TEST(Svd, Deterministic) {
  std::mt19937_64 rng(21);
  const Matrix a = testutil::random_matrix(60, 30, rng);
  const auto f1 = svd(a);
  const auto f2 = svd(a);
  EXPECT_EQ(f1.U, f2.U);
  EXPECT_EQ(f1.V, f2.V);
  EXPECT_EQ(f1.S, f2.S);
}

TEST(Lra, ErrorAndEnergyIdentity) {
  std::mt19937_64 rng(4);
  const Matrix a = testutil::random_matrix(20, 15, rng);
  const auto f = svd(a);
  for (std::size_t r = 1; r <= f.S.size(); ++r) {
    const double e = reconstruction_error(a, f, r);
    EXPECT_NEAR(e * e + energy_ratio(f.S, r), 1.0, 1e-12) << r;
  }
}

TEST(Lra, HandEnergyRatio) {
  const std::vector<double> s{3.0, 2.0, 1.0};
  EXPECT_DOUBLE_EQ(energy_ratio(s, 1), 9.0 / 14.0);
  EXPECT_DOUBLE_EQ(energy_ratio(s, 2), 13.0 / 14.0);
  EXPECT_DOUBLE_EQ(energy_ratio(s, 3), 1.0);
}

TEST(Lra, RankOneMatrixHasZeroErrorAtRankOne) {
  Matrix a(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = static_cast<double>((i + 1) * (j + 2));
  EXPECT_LT(reconstruction_error(a, 1), 1e-14);
}

TEST(Lra, ReconstructionErrorPreconditions) {
  EXPECT_THROW(reconstruction_error(Matrix(3, 3), 1), InvalidArgument);
  Matrix a(3, 3, 1.0);
  EXPECT_THROW(reconstruction_error(a, 0), InvalidArgument);
  EXPECT_THROW(reconstruction_error(a, 4), InvalidArgument);
}

TEST(RankScan, ErrorNonincreasingEnergyNondecreasing) {
  std::mt19937_64 rng(8);
  const Matrix a = testutil::random_matrix(60, 144, rng);
  const auto scan = rank_scan(a, 40, true);
  ASSERT_EQ(scan.rows.size(), 40u);
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    EXPECT_LE(scan.rows[i].error, scan.rows[i - 1].error);
    EXPECT_GE(scan.rows[i].energy, scan.rows[i - 1].energy);
    EXPECT_TRUE(scan.rows[i].profile_residual.has_value());
  }
}

TEST(RankScan, TailErrorMatchesExplicitReconstruction) {
  std::mt19937_64 rng(12);
  const Matrix a = testutil::random_matrix(30, 20, rng);
  const auto f = svd(a);
  const auto scan = rank_scan(a, f, 20);
  for (const auto& row : scan.rows)
    EXPECT_NEAR(row.error, reconstruction_error(a, f, row.r), 1e-10) << row.r;
}

TEST(RankScan, ProfileResidualAgainstDirectColumnSums) {
  std::mt19937_64 rng(2);
  const Matrix a = testutil::low_rank_counts(15, 144, 4, rng);
  const auto f = svd(a);
  const auto scan = rank_scan(a, f, 6, true);
  for (const auto& row : scan.rows) {
    const Matrix approx = reconstruct(truncate(f, row.r));
    std::vector<double> diff(144, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < 144; ++j) diff[j] += a(i, j) - approx(i, j);
    EXPECT_NEAR(*row.profile_residual, norm2(diff), 1e-8 * frobenius_norm(a)) << row.r;
  }
  EXPECT_LT(*scan.rows[3].profile_residual, 1e-8 * frobenius_norm(a));
}

TEST(RankScan, RejectsProfilesOnWrongWidth) {
  Matrix a(4, 5, 1.0);
  EXPECT_THROW(rank_scan(a, 2, true), InvalidArgument);
}

TEST(SuggestRank, SmallestRankMeetingBoth) {
  RankScanReport rep;
  rep.rows = {{1, 0.5, 0.75, {}}, {2, 0.2, 0.96, {}}, {3, 0.04, 0.998, {}}, {4, 0.01, 0.9999, {}}};
  EXPECT_EQ(suggest_rank(rep), 3u);
  EXPECT_EQ(suggest_rank(rep, 0.9, 0.3), 2u);
  EXPECT_EQ(suggest_rank(rep, 0.5, 1.0), 1u);
}

TEST(SuggestRank, ReportsBindingThreshold) {
  RankScanReport rep;
  rep.rows = {{1, 0.5, 0.75, {}}, {2, 0.2, 0.96, {}}};
  try {
    suggest_rank(rep);
    FAIL() << "expected RankSelectionError";
  } catch (const RankSelectionError& e) {
    EXPECT_EQ(e.binding(), "error");
  }
  try {
    suggest_rank(rep, 0.99, 0.6);
    FAIL() << "expected RankSelectionError";
  } catch (const RankSelectionError& e) {
    EXPECT_EQ(e.binding(), "energy");
  }
  try {
    suggest_rank(rep, 0.99, 0.01);
    FAIL() << "expected RankSelectionError";
  } catch (const RankSelectionError& e) {
    EXPECT_EQ(e.binding(), "both");
  }
  EXPECT_THROW(suggest_rank(rep, 0.0, 0.05), InvalidArgument);
  EXPECT_THROW(suggest_rank(rep, 0.9, 1.5), InvalidArgument);
}
