#pragma once

#include <rigidplan/planner.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rigidplan::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kBadConfig = 2,
  kUnwritableOutput = 3,
};

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> modes;  // comma-separated; command-specific default
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> horizon;
  std::string output_dir = ".";
  bool traces = false;
  bool quick = false;
  int index_offset = 0;  // validate only; negative-control hook
};

/// Parses "full,rsv" style lists; throws rigidplan::Error on unknown names.
std::vector<PlannerMode> parse_mode_list(const std::string& text);

/// Measurement counts sampled by `bench`.
std::vector<std::size_t> bench_counts();

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_validate(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace rigidplan::cli
