#include <rigidplan/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace rigidplan {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct LineContext {
  const std::string& source;
  int line;
  const std::string& key;

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(source, line, key, message); }

  double number(std::string_view text) const {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      fail("expected a finite number, got '" + std::string(text) + "'");
    }
    return value;
  }

  template <typename Int>
  Int integer(std::string_view text) const {
    text = trim(text);
    Int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail("expected an integer, got '" + std::string(text) + "'");
    }
    return value;
  }

  Vec2 point(std::string_view text) const {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) fail("expected 'x,y'");
    return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
  }
};

std::string format_point(const Vec2& p) { return format_number(p.x()) + "," + format_number(p.y()); }

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
            (field.empty() ? std::string() : ": " + field) + ": " + message),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  ScenarioConfig cfg;
  bool starts_replaced = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string key(trim(line.substr(0, eq == std::string_view::npos ? line.size() : eq)));
    const LineContext ctx{source, line_no, key};
    if (eq == std::string_view::npos) ctx.fail("expected 'key = value'");
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) ctx.fail("missing value");

    if (key == "target") {
      cfg.target_true = ctx.point(value);
    } else if (key == "uav_start") {
      if (!starts_replaced) cfg.uav_starts.clear();
      starts_replaced = true;
      cfg.uav_starts.push_back(ctx.point(value));
    } else if (key == "p0_dbm") {
      cfg.model.p0_dbm = ctx.number(value);
    } else if (key == "ref_distance_m") {
      cfg.model.ref_distance_m = ctx.number(value);
    } else if (key == "path_loss_exponent") {
      cfg.model.path_loss_exponent = ctx.number(value);
    } else if (key == "shadowing_sigma_db") {
      cfg.model.shadowing_sigma_db = ctx.number(value);
    } else if (key == "speed_mps") {
      cfg.planner.speed_mps = ctx.number(value);
    } else if (key == "epoch_dt_s") {
      cfg.planner.epoch_dt_s = ctx.number(value);
    } else if (key == "max_turn_deg") {
      cfg.planner.max_turn_deg = ctx.number(value);
    } else if (key == "angle_step_deg") {
      cfg.planner.angle_step_deg = ctx.number(value);
    } else if (key == "prune_capacity") {
      cfg.planner.prune_capacity = ctx.integer<int>(value);
    } else if (key == "planner_seed") {
      cfg.planner.seed = ctx.integer<std::uint64_t>(value);
    } else if (key == "mode") {
      const auto mode = parse_mode(value);
      if (!mode) ctx.fail("unknown mode '" + std::string(value) + "' (expected full, r, rs or rsv)");
      cfg.planner.mode = *mode;
    } else if (key == "horizon") {
      cfg.horizon = ctx.integer<int>(value);
    } else if (key == "runs") {
      cfg.runs = ctx.integer<int>(value);
    } else if (key == "success_radius_m") {
      cfg.success_radius_m = ctx.number(value);
    } else if (key == "seed") {
      cfg.base_seed = ctx.integer<std::uint64_t>(value);
    } else {
      ctx.fail("unknown key");
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(source, 0, "", e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open config file");
  return parse_config(in, path.string());
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "# rigidplan scenario\n";
  out << "target = " << format_point(cfg.target_true) << '\n';
  for (const auto& s : cfg.uav_starts) out << "uav_start = " << format_point(s) << '\n';
  out << "p0_dbm = " << format_number(cfg.model.p0_dbm) << '\n';
  out << "ref_distance_m = " << format_number(cfg.model.ref_distance_m) << '\n';
  out << "path_loss_exponent = " << format_number(cfg.model.path_loss_exponent) << '\n';
  out << "shadowing_sigma_db = " << format_number(cfg.model.shadowing_sigma_db) << '\n';
  out << "mode = " << mode_name(cfg.planner.mode) << '\n';
  out << "speed_mps = " << format_number(cfg.planner.speed_mps) << '\n';
  out << "epoch_dt_s = " << format_number(cfg.planner.epoch_dt_s) << '\n';
  out << "max_turn_deg = " << format_number(cfg.planner.max_turn_deg) << '\n';
  out << "angle_step_deg = " << format_number(cfg.planner.angle_step_deg) << '\n';
  out << "prune_capacity = " << cfg.planner.prune_capacity << '\n';
  out << "planner_seed = " << cfg.planner.seed << '\n';
  out << "horizon = " << cfg.horizon << '\n';
  out << "runs = " << cfg.runs << '\n';
  out << "success_radius_m = " << format_number(cfg.success_radius_m) << '\n';
  out << "seed = " << cfg.base_seed << '\n';
  return out.str();
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  out << "epoch,success_rate,rmse_m,mean_planning_time_s\n";
  for (const auto& e : report.epochs) {
    out << e.epoch << ',' << format_number(e.success_rate) << ',' << format_number(e.rmse_m) << ','
        << format_number(e.mean_planning_time_s) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace) {
  const std::size_t uavs = trace.epochs.empty() ? 0 : trace.epochs.front().uav_positions.size();
  out << "epoch,measurement_count,retained_count,pruned_count";
  for (std::size_t i = 0; i < uavs; ++i) out << ",uav" << i << "_x,uav" << i << "_y";
  out << ",estimate_x,estimate_y,error_m,objective,flagged,planning_time_s\n";
  for (const auto& r : trace.epochs) {
    out << r.epoch << ',' << r.measurement_count << ',' << r.retained_count << ',' << r.pruned_count;
    for (const auto& p : r.uav_positions) out << ',' << format_number(p.x()) << ',' << format_number(p.y());
    out << ',' << format_number(r.estimate.x()) << ',' << format_number(r.estimate.y()) << ','
        << format_number(r.error_m) << ',' << format_number(r.objective) << ',' << (r.flagged ? 1 : 0) << ','
        << format_number(r.planning_time_s) << '\n';
  }
}

void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows) {
  out << "mode,measurement_count,mean_planning_time_s\n";
  for (const auto& r : rows) {
    out << mode_name(r.mode) << ',' << r.measurement_count << ',' << format_number(r.mean_planning_time_s) << '\n';
  }
}

}  // namespace rigidplan
