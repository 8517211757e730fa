#include <rigidplan/svd.hpp>

#include <algorithm>
#include <limits>
#include <random>
#include <string>

namespace rigidplan {

namespace {

// Columns of the sketch whose pivoted residual norm falls below this
// fraction of ‖Y‖_F are treated as numerically dependent and dropped.
constexpr double kSketchDropTolerance = 1e-12;

void require_rank_request(const Eigen::MatrixXd& R, Index k, Index min_k, const char* who) {
  const Index limit = std::min(R.rows(), R.cols());
  if (k < min_k || k > limit) {
    throw Error(std::string(who) + ": requested rank " + std::to_string(k) + " outside [" +
                std::to_string(min_k) + ", " + std::to_string(limit) + "]");
  }
  if (!R.allFinite()) {
    throw Error(std::string(who) + ": matrix has non-finite entries");
  }
}

}  // namespace

SvdResult full_svd(const Eigen::MatrixXd& R, Index k) {
  require_rank_request(R, k, 0, "full_svd");
  SvdResult out;
  if (k == 0) {
    out.U.resize(R.rows(), 0);
    out.S.resize(0);
    out.V.resize(R.cols(), 0);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.U = svd.matrixU().leftCols(k);
  out.S = svd.singularValues().head(k);
  out.V = svd.matrixV().leftCols(k);
  return out;
}

SvdResult randomized_svd(const Eigen::MatrixXd& R, Index k, std::uint64_t seed) {
  require_rank_request(R, k, 1, "randomized_svd");
  const Index m = R.rows();
  const Index n = R.cols();
  const Index p = std::min<Index>(2 * k, n);

  // Filled in storage order so the draw sequence depends only on (seed, n, p).
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd omega(n, p);
  for (Index i = 0; i < omega.size(); ++i) omega.data()[i] = normal(gen);

  const Eigen::MatrixXd Y = R * omega;
  const double y_norm = Y.norm();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Y);
  const Eigen::MatrixXd& packed = qr.matrixQR();
  Index rank = 0;
  if (y_norm > 0.0) {
    const Index diag = std::min(m, p);
    while (rank < diag && std::abs(packed(rank, rank)) > kSketchDropTolerance * y_norm) ++rank;
  }

  SvdResult out;
  out.U = Eigen::MatrixXd::Zero(m, k);
  out.S = Eigen::VectorXd::Zero(k);
  out.V = Eigen::MatrixXd::Zero(n, k);
  out.deficient = rank < k;
  if (rank == 0) return out;

  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, rank);
  const Eigen::MatrixXd B = Q.transpose() * R;
  Eigen::BDCSVD<Eigen::MatrixXd> small(B, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const Index kept = std::min(rank, k);
  out.U.leftCols(kept).noalias() = Q * small.matrixU().leftCols(kept);
  out.S.head(kept) = small.singularValues().head(kept);
  out.V.leftCols(kept) = small.matrixV().leftCols(kept);
  return out;
}

SmoothEstimate smooth_sv(const SvdResult& anchor, const Eigen::MatrixXd& R0, const Eigen::MatrixXd& R1,
                         Index j, double gap_tol_rel) {
  if (j < 1 || j > anchor.k()) {
    throw Error("smooth_sv: index " + std::to_string(j) + " outside anchor rank " + std::to_string(anchor.k()));
  }
  if (R0.rows() != R1.rows() || R0.cols() != R1.cols()) {
    throw Error("smooth_sv: perturbed matrix changes shape");
  }
  if (anchor.U.rows() != R0.rows() || anchor.V.rows() != R0.cols()) {
    throw Error("smooth_sv: anchor does not match matrix dimensions");
  }

  const Index col = j - 1;
  const auto u = anchor.U.col(col);
  const auto v = anchor.V.col(col);
  const Eigen::VectorXd delta_v = R1 * v - R0 * v;

  SmoothEstimate est;
  est.value = anchor.S(col) + u.dot(delta_v);

  const double tol = gap_tol_rel * anchor.S(0);
  double gap = std::numeric_limits<double>::infinity();
  if (j > 1) gap = std::min(gap, anchor.S(col - 1) - anchor.S(col));
  if (j < anchor.k()) gap = std::min(gap, anchor.S(col) - anchor.S(col + 1));
  est.unreliable = anchor.deficient || gap < tol || gap == 0.0;
  return est;
}

SmoothEstimate singular_value_at(const Eigen::MatrixXd& R, Index j, const SvdBackend& backend) {
  struct Visitor {
    const Eigen::MatrixXd& R;
    Index j;

    SmoothEstimate operator()(const backend::Full&) const { return {full_svd(R, j).S(j - 1), false}; }
    SmoothEstimate operator()(const backend::Randomized& b) const {
      return {randomized_svd(R, j, b.seed).S(j - 1), false};
    }
    SmoothEstimate operator()(const backend::Smooth& b) const {
      if (b.anchor == nullptr || b.anchor_matrix == nullptr) throw Error("smooth backend without an anchor");
      return smooth_sv(*b.anchor, *b.anchor_matrix, R, j);
    }
  };
  if (j < 1) throw Error("singular value index is 1-based");
  return std::visit(Visitor{R, j}, backend);
}

}  // namespace rigidplan
