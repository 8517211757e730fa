#pragma once

#include <rigidplan/measurement.hpp>
#include <rigidplan/planner.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace rigidplan {

struct ScenarioConfig {
  Vec2 target_true = Vec2::Zero();
  std::vector<Vec2> uav_starts{Vec2(-125.0, -125.0), Vec2(-125.0, -122.5)};
  RssModel model;
  PlannerConfig planner;
  int horizon = 120;
  int runs = 250;
  double success_radius_m = 50.0;
  std::uint64_t base_seed = 1;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  std::vector<Vec2> uav_positions;  // where this epoch's measurements were taken
  Vec2 estimate = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
  double error_m = std::numeric_limits<double>::quiet_NaN();  // NaN before the first estimate
  double objective = std::numeric_limits<double>::quiet_NaN();
  double planning_time_s = 0.0;
  std::size_t measurement_count = 0;  // accumulated, including pruned ones
  std::size_t retained_count = 0;     // vertices the planner saw
  std::size_t pruned_count = 0;       // evictions so far
  bool flagged = false;               // some UAV had no valid candidate
};

struct EpisodeTrace {
  int run_index = 0;
  PlannerMode mode = PlannerMode::FullSvd;
  std::vector<EpochRecord> epochs;
};

/// Planner inputs right before an epoch's planning step.
struct EpochSnapshot {
  int epoch = 0;
  std::span<const UavVertex> all_vertices;
  std::span<const UavVertex> retained_vertices;  // equals all_vertices without pruning
  std::span<const UavState> uavs;
  Vec2 target_estimate = Vec2::Zero();
};

using SnapshotHook = std::function<void(const EpochSnapshot&)>;

/// One simulated mission. The RSS noise stream depends only on
/// (base_seed, run_index), so every planner mode sees identical noise.
EpisodeTrace run_episode(const ScenarioConfig& cfg, int run_index, const SnapshotHook& on_snapshot = {});

struct EpochMetrics {
  int epoch = 0;
  double success_rate = 0.0;
  double rmse_m = std::numeric_limits<double>::quiet_NaN();
  double mean_planning_time_s = 0.0;
};

struct MetricsReport {
  PlannerMode mode = PlannerMode::FullSvd;
  int runs = 0;
  std::vector<EpochMetrics> epochs;
};

/// Per-epoch aggregation. Runs without an estimate count as failures and
/// are left out of the RMSE.
MetricsReport aggregate(std::span<const EpisodeTrace> traces, const ScenarioConfig& cfg);

struct MonteCarloOptions {
  int workers = 0;  // 0: RIGID_PLANNER_THREADS, else hardware concurrency
  // Invoked once per run, in run order, after all runs finished.
  std::function<void(const EpisodeTrace&)> on_trace;
};

/// Runs episodes 1..cfg.runs and aggregates them.
MetricsReport run_monte_carlo(const ScenarioConfig& cfg, const MonteCarloOptions& options = {});

/// Number of workers for `requested` (0 = auto, capped by RIGID_PLANNER_THREADS).
int resolve_worker_count(int requested);

struct TimingRow {
  PlannerMode mode = PlannerMode::FullSvd;
  std::size_t measurement_count = 0;
  double mean_planning_time_s = 0.0;
  int samples = 0;
};

struct TimingOptions {
  bool single_worker = true;  // avoid contention in wall-clock numbers
};

/// Mean planning time per mode at each accumulated measurement count.
/// Episodes follow the trajectory planned by cfg.planner.mode; at the first
/// epoch whose accumulated count reaches c, every mode plans once from that
/// same state (pruning modes from their retained set) and is timed.
/// Episodes stop once the largest requested count is reached.
std::vector<TimingRow> timing_profile(const ScenarioConfig& cfg, std::span<const PlannerMode> modes,
                                      std::span<const std::size_t> measurement_counts,
                                      const TimingOptions& options = {});

}  // namespace rigidplan
