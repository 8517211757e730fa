#include "commands.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
  using namespace rigidplan::cli;

  CLI::App app{"UAV localization planner driven by a rigidity objective"};
  app.require_subcommand(1);
  CommandOptions opts;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "Scenario file (key = value)");
    cmd->add_option("--modes", opts.modes, "Comma-separated planner modes: full, r, rs, rsv");
    cmd->add_option("--seed", opts.seed, "Base seed");
    cmd->add_option("--runs", opts.runs, "Monte Carlo runs");
    cmd->add_option("--horizon", opts.horizon, "Epochs per run");
    cmd->add_option("--output", opts.output_dir, "Output directory")->capture_default_str();
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo localization runs per mode");
  add_run_flags(simulate);
  simulate->add_flag("--traces", opts.traces, "Also write one trace CSV per run");

  CLI::App* bench = app.add_subcommand("bench", "Planning time against accumulated measurement count");
  add_run_flags(bench);

  CLI::App* validate = app.add_subcommand("validate", "Numerical property checks");
  validate->add_flag("--quick", opts.quick, "Smaller samples");
  validate->add_option("--seed", opts.seed, "Sampling seed");
  validate->add_option("--inject-index-offset", opts.index_offset)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*simulate) return cmd_simulate(opts, std::cout, std::cerr);
    if (*bench) return cmd_bench(opts, std::cout, std::cerr);
    return cmd_validate(opts, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "rigidplan: " << e.what() << '\n';
    return 1;
  }
}
