#pragma once

#include <rigidplan/types.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <variant>

namespace rigidplan {

/// Truncated singular triplets R ≈ U·diag(S)·Vᵀ with S sorted descending.
struct SvdResult {
  Eigen::MatrixXd U;  // m×k
  Eigen::VectorXd S;  // k
  Eigen::MatrixXd V;  // n×k
  // Set by randomized_svd when the sketch captured fewer than k directions;
  // the missing tail is padded with zero singular values and zero vectors.
  bool deficient = false;

  Index k() const { return S.size(); }
};

/// Exact top-k singular triplets of a dense matrix.
SvdResult full_svd(const Eigen::MatrixXd& R, Index k);

/// Single-pass randomized SVD: Gaussian sketch of width p = min(2k, n),
/// rank-revealing orthonormalization, exact SVD of the projected matrix.
/// Deterministic for a fixed seed.
SvdResult randomized_svd(const Eigen::MatrixXd& R, Index k, std::uint64_t seed);

struct SmoothEstimate {
  double value = 0.0;
  // The anchor's singular values around j are too close for the
  // first-order formula; callers should recompute instead.
  bool unreliable = false;
};

/// First-order estimate of σ_j(R1) from an SVD of R0:
///   σ_j(R0) + u_jᵀ (R1 − R0) v_j
/// `j` is 1-based. `gap_tol_rel` scales σ₁ to form the absolute gap threshold.
SmoothEstimate smooth_sv(const SvdResult& anchor, const Eigen::MatrixXd& R0, const Eigen::MatrixXd& R1,
                         Index j, double gap_tol_rel = 1e-8);

namespace backend {

struct Full {};

struct Randomized {
  std::uint64_t seed = 0;
};

/// Non-owning view of an anchor decomposition; both referents must outlive the call.
struct Smooth {
  const SvdResult* anchor = nullptr;
  const Eigen::MatrixXd* anchor_matrix = nullptr;
};

}  // namespace backend

using SvdBackend = std::variant<backend::Full, backend::Randomized, backend::Smooth>;

/// σ_j (1-based) of R through the chosen backend. For the smooth backend the
/// `unreliable` flag mirrors smooth_sv; the other backends never set it.
SmoothEstimate singular_value_at(const Eigen::MatrixXd& R, Index j, const SvdBackend& backend);

}  // namespace rigidplan
