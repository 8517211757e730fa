#include <rigidplan/pruning.hpp>
#include <rigidplan/simulation.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace rigidplan {

namespace {

constexpr std::uint64_t kNoiseStream = 0x4e4f495345ULL;  // "NOISE"

Vec2 placeholder_target(std::span<const UavVertex> vertices) {
  Vec2 centroid = Vec2::Zero();
  for (const auto& v : vertices) centroid += v.position;
  centroid /= static_cast<double>(vertices.size());
  return centroid + Vec2(1.0, 0.0);
}

template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void ScenarioConfig::validate() const {
  model.validate();
  planner.validate();
  if (uav_starts.empty()) throw Error("at least one UAV start is required");
  for (const auto& s : uav_starts) {
    if (!is_finite(s)) throw Error("UAV start is not finite");
  }
  if (!is_finite(target_true)) throw Error("target position is not finite");
  if (horizon < 1) throw Error("horizon must be at least 1");
  if (runs < 1) throw Error("runs must be at least 1");
  if (!(success_radius_m > 0.0)) throw Error("success radius must be positive");
}

namespace {

EpisodeTrace run_episode_impl(const ScenarioConfig& cfg, int run_index, const SnapshotHook& on_snapshot,
                              bool track_pruning) {
  cfg.validate();
  const PlannerConfig& planner = cfg.planner;
  track_pruning = track_pruning || planner.uses_pruning();

  EpisodeTrace trace;
  trace.run_index = run_index;
  trace.mode = planner.mode;
  trace.epochs.reserve(static_cast<std::size_t>(cfg.horizon));

  SeedStream noise(cfg.base_seed, static_cast<std::uint64_t>(run_index), kNoiseStream);
  std::vector<UavState> uavs;
  for (std::size_t i = 0; i < cfg.uav_starts.size(); ++i) uavs.push_back({static_cast<int>(i), cfg.uav_starts[i], {}});

  std::vector<RssMeasurement> measurements;
  std::vector<UavVertex> all_vertices;
  PrunedHistory pruned(static_cast<std::size_t>(planner.prune_capacity));
  std::optional<Vec2> estimate;
  std::vector<UavVertex> pruned_view;

  for (int epoch = 1; epoch <= cfg.horizon; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    const auto t = static_cast<double>(epoch);

    for (const auto& uav : uavs) {
      const RssMeasurement m = sample_rss(cfg.model, uav.position, cfg.target_true, noise, uav.uav_id, t);
      measurements.push_back(m);
      all_vertices.push_back({m.position, m.epoch, m.uav_id});
      rec.uav_positions.push_back(uav.position);
      if (track_pruning) {
        const Vec2 anchor_target = estimate.value_or(placeholder_target(all_vertices));
        pruned = prune(std::move(pruned), m, {anchor_target, planner.seed});
      }
    }

    if (measurements.size() >= 3) {
      estimate = estimate_target(measurements, cfg.model).position;
      rec.estimate = *estimate;
      rec.error_m = (*estimate - cfg.target_true).norm();
    }

    PlanningState state;
    state.history = planner.uses_pruning() ? pruned.vertices() : all_vertices;
    state.uavs = uavs;
    state.target_estimate = estimate.value_or(placeholder_target(state.history));
    state.epoch = t;

    if (on_snapshot) {
      const std::span<const UavVertex> retained =
          track_pruning ? std::span<const UavVertex>(pruned_view = pruned.vertices()) : all_vertices;
      on_snapshot({epoch, all_vertices, retained, uavs, state.target_estimate});
    }

    const auto start = std::chrono::steady_clock::now();
    const std::vector<Waypoint> waypoints = select_waypoints(state, planner);
    const auto stop = std::chrono::steady_clock::now();
    rec.planning_time_s = std::chrono::duration<double>(stop - start).count();

    for (const auto& wp : waypoints) {
      for (auto& uav : uavs) {
        if (uav.uav_id != wp.uav_id) continue;
        uav.position = wp.next_position;
        uav.heading_deg = wp.heading_deg;
      }
      rec.flagged = rec.flagged || wp.flagged;
    }
    if (!waypoints.empty()) rec.objective = waypoints.back().objective;
    rec.measurement_count = measurements.size();
    rec.retained_count = state.history.size();
    rec.pruned_count = planner.uses_pruning() ? pruned.evicted_count() : 0;
    trace.epochs.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace

EpisodeTrace run_episode(const ScenarioConfig& cfg, int run_index, const SnapshotHook& on_snapshot) {
  return run_episode_impl(cfg, run_index, on_snapshot, false);
}

MetricsReport aggregate(std::span<const EpisodeTrace> traces, const ScenarioConfig& cfg) {
  MetricsReport report;
  report.mode = cfg.planner.mode;
  report.runs = static_cast<int>(traces.size());
  for (int e = 0; e < cfg.horizon; ++e) {
    EpochMetrics em;
    em.epoch = e + 1;
    int successes = 0;
    int estimated = 0;
    double sq_sum = 0.0;
    double time_sum = 0.0;
    for (const auto& tr : traces) {
      const EpochRecord& rec = tr.epochs.at(static_cast<std::size_t>(e));
      time_sum += rec.planning_time_s;
      if (std::isnan(rec.error_m)) continue;
      ++estimated;
      sq_sum += rec.error_m * rec.error_m;
      if (rec.error_m <= cfg.success_radius_m) ++successes;
    }
    const auto n = static_cast<double>(traces.size());
    em.success_rate = n > 0 ? successes / n : 0.0;
    if (estimated > 0) em.rmse_m = std::sqrt(sq_sum / estimated);
    em.mean_planning_time_s = n > 0 ? time_sum / n : 0.0;
    report.epochs.push_back(em);
  }
  return report;
}

int resolve_worker_count(int requested) {
  int workers = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RIGID_PLANNER_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) workers = std::min(workers, cap);
    } catch (const std::exception&) {
      throw Error(std::string("RIGID_PLANNER_THREADS is not an integer: ") + env);
    }
  }
  return std::max(1, workers);
}

MetricsReport run_monte_carlo(const ScenarioConfig& cfg, const MonteCarloOptions& options) {
  cfg.validate();
  std::vector<EpisodeTrace> traces(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, resolve_worker_count(options.workers),
               [&](int i) { traces[static_cast<std::size_t>(i)] = run_episode(cfg, i + 1); });
  if (options.on_trace) {
    for (const auto& tr : traces) options.on_trace(tr);
  }
  return aggregate(traces, cfg);
}

std::vector<TimingRow> timing_profile(const ScenarioConfig& cfg, std::span<const PlannerMode> modes,
                                      std::span<const std::size_t> measurement_counts, const TimingOptions& options) {
  cfg.validate();
  if (!std::is_sorted(measurement_counts.begin(), measurement_counts.end())) {
    throw Error("measurement counts must be ascending");
  }
  std::vector<TimingRow> rows;
  if (measurement_counts.empty() || modes.empty()) return rows;

  const auto per_epoch = cfg.uav_starts.size();
  auto epoch_reaching = [&](std::size_t count) {
    return static_cast<int>((std::max<std::size_t>(count, 1) + per_epoch - 1) / per_epoch);
  };
  ScenarioConfig driver = cfg;
  driver.horizon = std::min(cfg.horizon, epoch_reaching(measurement_counts.back()));
  const bool any_pruning =
      std::any_of(modes.begin(), modes.end(), [](PlannerMode m) { return m == PlannerMode::RandomizedSmoothPruned; });

  // sums[mode][count]
  std::vector<std::vector<double>> sums(modes.size(), std::vector<double>(measurement_counts.size(), 0.0));
  std::vector<int> samples(measurement_counts.size(), 0);
  std::mutex sums_mutex;

  auto time_snapshot = [&](const EpochSnapshot& snap) {
    for (std::size_t c = 0; c < measurement_counts.size(); ++c) {
      if (epoch_reaching(measurement_counts[c]) != snap.epoch) continue;
      std::vector<double> elapsed(modes.size());
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        PlannerConfig pc = cfg.planner;
        pc.mode = modes[mi];
        PlanningState state;
        const auto history = pc.uses_pruning() ? snap.retained_vertices : snap.all_vertices;
        state.history.assign(history.begin(), history.end());
        state.uavs.assign(snap.uavs.begin(), snap.uavs.end());
        state.target_estimate = snap.target_estimate;
        state.epoch = snap.epoch;
        const auto start = std::chrono::steady_clock::now();
        const auto waypoints = select_waypoints(state, pc);
        const auto stop = std::chrono::steady_clock::now();
        elapsed[mi] = std::chrono::duration<double>(stop - start).count();
      }
      std::lock_guard lock(sums_mutex);
      for (std::size_t mi = 0; mi < modes.size(); ++mi) sums[mi][c] += elapsed[mi];
      ++samples[c];
    }
  };

  parallel_for(cfg.runs, options.single_worker ? 1 : resolve_worker_count(0),
               [&](int i) { run_episode_impl(driver, i + 1, time_snapshot, any_pruning); });

  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    for (std::size_t c = 0; c < measurement_counts.size(); ++c) {
      if (samples[c] == 0) continue;
      TimingRow row;
      row.mode = modes[mi];
      row.measurement_count = measurement_counts[c];
      row.samples = samples[c];
      row.mean_planning_time_s = sums[mi][c] / samples[c];
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace rigidplan
