#pragma once

#include <rigidplan/rigidity.hpp>
#include <rigidplan/svd.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rigidplan {

/// SVD strategy for the objective: full SVD, randomized (R), randomized with
/// smooth updates (R+S), and the latter with vertex pruning (R+S+V).
enum class PlannerMode { FullSvd, Randomized, RandomizedSmooth, RandomizedSmoothPruned };

std::string_view mode_name(PlannerMode mode);
std::optional<PlannerMode> parse_mode(std::string_view name);

struct PlannerConfig {
  PlannerMode mode = PlannerMode::RandomizedSmoothPruned;
  double speed_mps = 5.0;
  double epoch_dt_s = 1.0;
  double max_turn_deg = 20.0;
  double angle_step_deg = 1.0;
  int prune_capacity = 40;
  std::uint64_t seed = 1;

  void validate() const;
  bool uses_smooth() const {
    return mode == PlannerMode::RandomizedSmooth || mode == PlannerMode::RandomizedSmoothPruned;
  }
  bool uses_pruning() const { return mode == PlannerMode::RandomizedSmoothPruned; }
  double step_length() const { return speed_mps * epoch_dt_s; }
};

/// Headings (degrees, in [0, 360)) reachable from `prev_heading_deg`:
/// prev ± max_turn at angle_step spacing, or a full circle when there is no
/// previous heading.
std::vector<double> candidate_headings(std::optional<double> prev_heading_deg, const PlannerConfig& config);

struct UavState {
  int uav_id = 0;
  Vec2 position = Vec2::Zero();
  std::optional<double> heading_deg;
};

/// Decomposition of the framework with the moving UAV at its previous
/// heading, shared by every candidate of one sweep.
struct SmoothAnchor {
  SvdResult svd;
  Eigen::MatrixXd matrix;
};

/// Evaluates headings for one moving UAV against a fixed set of measurement
/// points. The framework (and its rigidity matrix) is built once; each
/// candidate only rewrites the rows incident to the hypothetical vertex.
class HeadingSweep {
 public:
  HeadingSweep(std::span<const UavVertex> base_vertices, const UavState& moving, const Vec2& target_estimate,
               const PlannerConfig& config, double epoch);

  bool solvable() const { return solvable_; }
  Vec2 hypothetical_position(double heading_deg) const;

  /// Builds the anchor at `heading_deg` (randomized SVD).
  SmoothAnchor make_anchor(double heading_deg);

  /// Objective for one heading; −∞ when the framework is underdetermined.
  /// With an anchor the smooth estimate is used, falling back to randomized
  /// SVD when it is flagged unreliable.
  double evaluate(double heading_deg, const SmoothAnchor* anchor = nullptr);

  int smooth_fallbacks() const { return smooth_fallbacks_; }

 private:
  void place(double heading_deg);

  PlannerConfig config_;
  UavState moving_;
  Framework framework_;
  RigidityMatrix matrix_;
  Index moving_vertex_ = 0;
  Index index_ = 0;
  bool solvable_ = false;
  int smooth_fallbacks_ = 0;
};

/// Objective of moving `uav_states[moving_uav]` along `heading_deg`, given the
/// retained measurement points. In the smooth modes an anchor is built at
/// the UAV's previous heading unless one is supplied.
double evaluate_candidate(std::span<const UavVertex> history, std::span<const UavState> uav_states,
                          std::size_t moving_uav, double heading_deg, const Vec2& target_estimate,
                          const PlannerConfig& config, const SmoothAnchor* anchor = nullptr, double epoch = 0.0);

struct PlanningState {
  std::vector<UavVertex> history;  // retained measurement points
  std::vector<UavState> uavs;
  Vec2 target_estimate = Vec2::Zero();
  double epoch = 0.0;
};

struct Waypoint {
  int uav_id = 0;
  Vec2 next_position = Vec2::Zero();
  double heading_deg = 0.0;
  double objective = 0.0;
  bool flagged = false;  // no valid candidate; flew straight
  int smooth_fallbacks = 0;
};

/// Chooses every UAV's next waypoint in uav_id order; later UAVs see the
/// hypothetical positions already committed by earlier ones.
std::vector<Waypoint> select_waypoints(const PlanningState& state, const PlannerConfig& config);

}  // namespace rigidplan
