#include <rigidplan/planner.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace rigidplan {

namespace {

constexpr std::array<std::pair<PlannerMode, std::string_view>, 4> kModeNames{{
    {PlannerMode::FullSvd, "full"},
    {PlannerMode::Randomized, "r"},
    {PlannerMode::RandomizedSmooth, "rs"},
    {PlannerMode::RandomizedSmoothPruned, "rsv"},
}};

double normalize_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h + 0.0;  // folds -0.0
}

double angular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

constexpr double kInvalid = -std::numeric_limits<double>::infinity();

}  // namespace

std::string_view mode_name(PlannerMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

std::optional<PlannerMode> parse_mode(std::string_view name) {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

void PlannerConfig::validate() const {
  if (!(speed_mps > 0.0)) throw Error("speed must be positive");
  if (!(epoch_dt_s > 0.0)) throw Error("epoch duration must be positive");
  if (!(angle_step_deg > 0.0)) throw Error("angle step must be positive");
  if (!(max_turn_deg >= 0.0) || max_turn_deg > 180.0) throw Error("max turn must lie in [0, 180] degrees");
  if (max_turn_deg > 0.0 && angle_step_deg > max_turn_deg) throw Error("angle step exceeds max turn");
  if (prune_capacity < 3) throw Error("pruning capacity must be at least 3");
}

std::vector<double> candidate_headings(std::optional<double> prev_heading_deg, const PlannerConfig& config) {
  config.validate();
  std::vector<double> out;
  if (!prev_heading_deg) {
    const auto count = static_cast<long>(std::ceil(360.0 / config.angle_step_deg - 1e-9));
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(static_cast<double>(i) * config.angle_step_deg);
    return out;
  }
  const auto side = static_cast<long>(std::floor(config.max_turn_deg / config.angle_step_deg + 1e-9));
  out.reserve(static_cast<std::size_t>(2 * side + 1));
  for (long i = -side; i <= side; ++i) {
    out.push_back(normalize_heading(*prev_heading_deg + static_cast<double>(i) * config.angle_step_deg));
  }
  return out;
}

HeadingSweep::HeadingSweep(std::span<const UavVertex> base_vertices, const UavState& moving,
                           const Vec2& target_estimate, const PlannerConfig& config, double epoch)
    : config_(config), moving_(moving) {
  if (base_vertices.empty()) {
    framework_.target = target_estimate;
  } else {
    framework_ = build_framework(base_vertices, target_estimate);
  }
  append_uav_vertex(framework_, {moving.position, epoch + config.epoch_dt_s, moving.uav_id});
  moving_vertex_ = framework_.target_index() - 1;
  matrix_ = build_rigidity_matrix(framework_);
  index_ = rigidity_index(framework_);
  solvable_ = is_solvable(framework_);
}

Vec2 HeadingSweep::hypothetical_position(double heading_deg) const {
  const double h = deg_to_rad(heading_deg);
  return moving_.position + config_.step_length() * Vec2(std::cos(h), std::sin(h));
}

void HeadingSweep::place(double heading_deg) {
  framework_.uav_vertices[static_cast<std::size_t>(moving_vertex_)].position = hypothetical_position(heading_deg);
  refresh_vertex_rows(matrix_, framework_, moving_vertex_);
}

SmoothAnchor HeadingSweep::make_anchor(double heading_deg) {
  if (!solvable_) throw Error("underdetermined framework");
  place(heading_deg);
  return {randomized_svd(matrix_.entries, index_, config_.seed), matrix_.entries};
}

double HeadingSweep::evaluate(double heading_deg, const SmoothAnchor* anchor) {
  if (!solvable_) return kInvalid;
  place(heading_deg);
  switch (config_.mode) {
    case PlannerMode::FullSvd:
      return rigidity_value(matrix_, index_, backend::Full{}).value;
    case PlannerMode::Randomized:
      return rigidity_value(matrix_, index_, backend::Randomized{config_.seed}).value;
    case PlannerMode::RandomizedSmooth:
    case PlannerMode::RandomizedSmoothPruned:
      break;
  }
  if (anchor != nullptr) {
    const SmoothEstimate est = rigidity_value(matrix_, index_, backend::Smooth{&anchor->svd, &anchor->matrix});
    if (!est.unreliable) return est.value;
    ++smooth_fallbacks_;
  }
  return rigidity_value(matrix_, index_, backend::Randomized{config_.seed}).value;
}

double evaluate_candidate(std::span<const UavVertex> history, std::span<const UavState> uav_states,
                          std::size_t moving_uav, double heading_deg, const Vec2& target_estimate,
                          const PlannerConfig& config, const SmoothAnchor* anchor, double epoch) {
  if (moving_uav >= uav_states.size()) throw Error("moving UAV index out of range");
  const UavState& moving = uav_states[moving_uav];
  HeadingSweep sweep(history, moving, target_estimate, config, epoch);
  if (!config.uses_smooth() || anchor != nullptr || !moving.heading_deg || !sweep.solvable()) {
    return sweep.evaluate(heading_deg, anchor);
  }
  const SmoothAnchor own = sweep.make_anchor(*moving.heading_deg);
  return sweep.evaluate(heading_deg, &own);
}

std::vector<Waypoint> select_waypoints(const PlanningState& state, const PlannerConfig& config) {
  config.validate();
  std::vector<std::size_t> order(state.uavs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return state.uavs[a].uav_id < state.uavs[b].uav_id; });

  std::vector<UavVertex> base = state.history;
  std::vector<Waypoint> out;
  out.reserve(order.size());
  for (const std::size_t i : order) {
    const UavState& uav = state.uavs[i];
    HeadingSweep sweep(base, uav, state.target_estimate, config, state.epoch);

    std::optional<SmoothAnchor> anchor;
    if (config.uses_smooth() && uav.heading_deg && sweep.solvable()) anchor = sweep.make_anchor(*uav.heading_deg);

    const double reference = uav.heading_deg.value_or(0.0);
    double best_heading = reference;
    double best_value = kInvalid;
    for (const double h : candidate_headings(uav.heading_deg, config)) {
      const double v = sweep.evaluate(h, anchor ? &*anchor : nullptr);
      if (v == kInvalid) continue;
      bool better = v > best_value;
      if (!better && v == best_value) {
        const double dh = angular_distance(h, reference);
        const double db = angular_distance(best_heading, reference);
        better = dh < db || (dh == db && h < best_heading);
      }
      if (better) {
        best_value = v;
        best_heading = h;
      }
    }

    Waypoint wp;
    wp.uav_id = uav.uav_id;
    wp.flagged = best_value == kInvalid;
    wp.heading_deg = wp.flagged ? reference : best_heading;
    wp.objective = best_value;
    wp.smooth_fallbacks = sweep.smooth_fallbacks();
    wp.next_position = sweep.hypothetical_position(wp.heading_deg);
    base.push_back({wp.next_position, state.epoch + config.epoch_dt_s, uav.uav_id});
    out.push_back(wp);
  }
  return out;
}

}  // namespace rigidplan
