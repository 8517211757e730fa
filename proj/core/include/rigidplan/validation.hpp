#pragma once

#include <rigidplan/types.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rigidplan {

struct RankLawStats {
  int frameworks = 0;
  int rank_mismatches = 0;           // numerical rank != objective index
  double min_index_ratio = 0.0;      // min σ_idx / σ₁ over generic frameworks
  double max_tail_ratio = 0.0;       // max σ_{idx+1} / σ₁
  double max_collinear_ratio = 0.0;  // max σ_idx / σ₁ over collinear frameworks
};

/// Random generic frameworks with 3..30 vertices plus as many collinear ones.
/// `index_offset` shifts the objective index and exists to prove the check
/// can fail.
RankLawStats rank_law_study(int frameworks, std::uint64_t seed, int index_offset = 0);

struct FidelityStats {
  int matrices = 0;
  double max_relative_error = 0.0;  // randomized vs Jacobi SVD at the rigidity index
};

FidelityStats randomized_fidelity_study(int matrices, std::uint64_t seed);

struct TaylorStats {
  int pairs = 0;
  double mean_ratio = 0.0;          // error(δ) / error(δ/2), δ = 1e-2·‖R0‖
  double max_diagonal_error = 0.0;  // aligned perturbations of diagonal matrices
};

TaylorStats smooth_taylor_study(int pairs, std::uint64_t seed);

struct EstimatorStats {
  int scenes = 0;
  double max_error_m = 0.0;  // noiseless RSS, non-collinear positions
};

EstimatorStats noiseless_estimator_study(int scenes, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;
  std::uint64_t seed = 2024;
  int index_offset = 0;  // test hook, see rank_law_study
};

std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace rigidplan
