#pragma once

#include <rigidplan/simulation.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rigidplan {

/// Config problem with the offending line (1-based, 0 when not tied to a
/// line) and key.
class ConfigError : public Error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

/// Flat `key = value` scenario file; `#` starts a comment. `uav_start`
/// may repeat, one `x,y` pair per UAV; the first occurrence replaces the
/// default starts. Unset keys keep their defaults.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& cfg);

/// Shortest round-trip decimal form; NaN becomes the empty string.
std::string format_number(double value);

void write_metrics_csv(std::ostream& out, const MetricsReport& report);
void write_trace_csv(std::ostream& out, const EpisodeTrace& trace);
void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows);

}  // namespace rigidplan
