#pragma once

#include <rigidplan/types.hpp>

#include <cstdint>
#include <random>
#include <span>

namespace rigidplan {

/// Log-distance path loss with log-normal shadowing.
struct RssModel {
  double p0_dbm = 3.0;              // RSS at the reference distance
  double ref_distance_m = 1.0;
  double path_loss_exponent = 2.0;  // β
  double shadowing_sigma_db = 5.0;

  void validate() const;
};

struct RssMeasurement {
  int uav_id = 0;
  Vec2 position = Vec2::Zero();
  double epoch = 0.0;
  double rss_dbm = 0.0;
};

/// Deterministic random stream. Streams for different (seed, run, purpose)
/// triples are decorrelated with a splitmix64 finalizer.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : engine_(seed) {}
  SeedStream(std::uint64_t base_seed, std::uint64_t run_index, std::uint64_t purpose);

  double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Noise-free received power P0 − 10β·log10(s / s0); throws "singular range" at s = 0.
double rss_mean(const RssModel& model, const Vec2& uav_pos, const Vec2& target);

/// One noisy sample. With σ_dB = 0 no random draw is consumed.
RssMeasurement sample_rss(const RssModel& model, const Vec2& uav_pos, const Vec2& target, SeedStream& rng,
                          int uav_id = 0, double epoch = 0.0);

struct EstimatorOptions {
  double grid_margin_m = 300.0;
  double grid_cell_m = 5.0;
  double step_tolerance_m = 1e-4;
  int max_iterations = 50;
  int refine_starts = 4;  // grid-local minima refined by Gauss–Newton
  double min_range_m = 0.1;  // model distances are clamped here
};

struct TargetEstimate {
  Vec2 position = Vec2::Zero();
  bool converged = false;
};

/// Sum of squared dB residuals at a hypothesized target position
/// (negative log-likelihood up to scale and offset).
double rss_cost(std::span<const RssMeasurement> measurements, const RssModel& model, const Vec2& target,
                double min_range_m = 0.1);

/// Maximum-likelihood target position: coarse grid search over the inflated
/// UAV bounding box, then Gauss–Newton with step halving from the lowest grid-local minima.
TargetEstimate estimate_target(std::span<const RssMeasurement> measurements, const RssModel& model,
                               const EstimatorOptions& options = {});

}  // namespace rigidplan
