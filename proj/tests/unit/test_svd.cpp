#include <rigidplan/svd.hpp>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace rigidplan;

namespace {

Eigen::MatrixXd random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return n(rng); });
}

Eigen::VectorXd oracle(const Eigen::MatrixXd& m) { return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues(); }

double spectral_norm(const Eigen::MatrixXd& m) { return oracle(m)(0); }

}  // namespace

TEST(FullSvd, DiagonalMatrix) {
  const Eigen::MatrixXd d = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const SvdResult r = full_svd(d, 3);
  ASSERT_EQ(r.k(), 3);
  EXPECT_NEAR(r.S(0), 3.0, 1e-14);
  EXPECT_NEAR(r.S(1), 2.0, 1e-14);
  EXPECT_NEAR(r.S(2), 1.0, 1e-14);
}

TEST(FullSvd, ZeroMatrix) {
  const SvdResult r = full_svd(Eigen::MatrixXd::Zero(4, 3), 3);
  EXPECT_EQ(r.S, Eigen::VectorXd::Zero(3));
}

TEST(FullSvd, SingleRow) {
  Eigen::MatrixXd row(1, 4);
  row << -3, -4, 3, 4;
  EXPECT_NEAR(full_svd(row, 1).S(0), std::sqrt(50.0), 1e-14);
}

TEST(FullSvd, ResidualBoundAndOrthonormality) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd R = random_matrix(20, 12, rng);
  const Eigen::VectorXd exact = oracle(R);
  for (Index k : {1, 5, 12}) {
    const SvdResult r = full_svd(R, k);
    const Eigen::MatrixXd approx = r.U * r.S.asDiagonal() * r.V.transpose();
    const double tail = k < exact.size() ? exact(k) : 0.0;
    EXPECT_LE(spectral_norm(R - approx), tail + 1e-9 * exact(0)) << "k=" << k;
    EXPECT_LE((r.U.transpose() * r.U - Eigen::MatrixXd::Identity(k, k)).norm(), 1e-8);
    EXPECT_LE((r.V.transpose() * r.V - Eigen::MatrixXd::Identity(k, k)).norm(), 1e-8);
  }
}

TEST(FullSvd, RejectsBadInput) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(full_svd(m, 4), Error);
  EXPECT_THROW(full_svd(m, -1), Error);
  m(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(full_svd(m, 2), Error);
  m(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(full_svd(m, 2), Error);
}

TEST(RandomizedSvd, ExactLowRankMatrix) {
  std::mt19937_64 rng(11);
  for (Index k : {1, 3, 6}) {
    const Eigen::MatrixXd R = random_matrix(30, k, rng) * random_matrix(16, k, rng).transpose();
    const SvdResult approx = randomized_svd(R, k, 99);
    const Eigen::VectorXd exact = oracle(R);
    for (Index i = 0; i < k; ++i) EXPECT_NEAR(approx.S(i), exact(i), 1e-8 * exact(i)) << "k=" << k;
  }
}

TEST(RandomizedSvd, DiagonalWithZero) {
  const Eigen::MatrixXd d = Eigen::Vector4d(3, 2, 1, 0).asDiagonal();
  const SvdResult r = randomized_svd(d, 2, 5);
  ASSERT_EQ(r.k(), 2);
  EXPECT_NEAR(r.S(0), 3.0, 1e-8);
  EXPECT_NEAR(r.S(1), 2.0, 1e-8);
}

TEST(RandomizedSvd, DeterministicForSeed) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd R = random_matrix(25, 10, rng);
  const SvdResult a = randomized_svd(R, 4, 1234);
  const SvdResult b = randomized_svd(R, 4, 1234);
  EXPECT_EQ(a.S, b.S);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(RandomizedSvd, RejectsBadRank) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 5);
  EXPECT_THROW(randomized_svd(m, 0, 1), Error);
  EXPECT_THROW(randomized_svd(m, 4, 1), Error);
}

TEST(RandomizedSvd, DeficientSketchIsPaddedAndFlagged) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd rank_one = random_matrix(12, 1, rng) * random_matrix(8, 1, rng).transpose();
  const SvdResult r = randomized_svd(rank_one, 3, 1);
  ASSERT_EQ(r.k(), 3);
  EXPECT_TRUE(r.deficient);
  EXPECT_NEAR(r.S(0), oracle(rank_one)(0), 1e-10 * r.S(0));
  EXPECT_EQ(r.S(1), 0.0);
  EXPECT_EQ(r.S(2), 0.0);
  EXPECT_EQ(r.U.cols(), 3);
  EXPECT_EQ(r.V.cols(), 3);
}

TEST(SmoothSv, AlignedDiagonalPerturbationIsExact) {
  Eigen::MatrixXd R0 = Eigen::Vector2d(2, 1).asDiagonal();
  const SvdResult anchor = full_svd(R0, 2);
  for (double eps : {1e-6, 1e-3, 0.25}) {
    Eigen::MatrixXd R1 = R0;
    R1(0, 0) += eps;
    const SmoothEstimate e = smooth_sv(anchor, R0, R1, 1);
    EXPECT_FALSE(e.unreliable);
    EXPECT_NEAR(e.value, 2.0 + eps, 1e-15);
  }
}

TEST(SmoothSv, ZeroPerturbationReturnsAnchor) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd R0 = random_matrix(6, 8, rng);
  const SvdResult anchor = full_svd(R0, 4);
  for (Index j = 1; j <= 4; ++j) EXPECT_EQ(smooth_sv(anchor, R0, R0, j).value, anchor.S(j - 1));
}

TEST(SmoothSv, SecondOrderRemainder) {
  std::mt19937_64 rng(21);
  const Eigen::MatrixXd R0 = random_matrix(6, 8, rng);
  Eigen::MatrixXd E = random_matrix(6, 8, rng);
  E /= E.norm();
  const SvdResult anchor = full_svd(R0, 6);
  auto error = [&](double d) {
    const Eigen::MatrixXd R1 = R0 + d * E;
    return std::abs(smooth_sv(anchor, R0, R1, 3).value - oracle(R1)(2));
  };
  EXPECT_LE(error(1e-3), 10.0 * 1e-6);
  const double ratio = error(1e-3) / error(0.5e-3);
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(SmoothSv, FlagsDegenerateGapAndBadIndex) {
  const Eigen::MatrixXd R0 = Eigen::Vector3d(2, 1, 1).asDiagonal();
  const SvdResult anchor = full_svd(R0, 3);
  EXPECT_FALSE(smooth_sv(anchor, R0, R0, 1).unreliable);
  EXPECT_TRUE(smooth_sv(anchor, R0, R0, 2).unreliable);
  EXPECT_TRUE(smooth_sv(anchor, R0, R0, 3).unreliable);
  EXPECT_THROW(smooth_sv(anchor, R0, R0, 4), Error);
  EXPECT_THROW(smooth_sv(anchor, R0, Eigen::MatrixXd::Zero(2, 3), 1), Error);
}

TEST(SingularValueAt, BackendsAgree) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd R = random_matrix(15, 9, rng);
  const SvdResult anchor = full_svd(R, 9);
  const double exact = oracle(R)(4);
  EXPECT_NEAR(singular_value_at(R, 5, backend::Full{}).value, exact, 1e-12 * exact);
  EXPECT_NEAR(singular_value_at(R, 5, backend::Randomized{3}).value, exact, 1e-10 * exact);
  EXPECT_NEAR(singular_value_at(R, 5, backend::Smooth{&anchor, &R}).value, anchor.S(4), 0.0);
}

TEST(SvdProperty, SingularValuesNonincreasingAndNonnegative) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Index> dim(1, 14);
  for (int t = 0; t < 100; ++t) {
    const Index m = dim(rng), n = dim(rng);
    const Eigen::MatrixXd R = random_matrix(m, n, rng);
    const Index k = std::min(m, n);
    for (const SvdResult& r : {full_svd(R, k), randomized_svd(R, k, rng())}) {
      for (Index i = 0; i < r.k(); ++i) {
        EXPECT_GE(r.S(i), 0.0);
        if (i > 0) EXPECT_LE(r.S(i), r.S(i - 1));
      }
    }
  }
}
