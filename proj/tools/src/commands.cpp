#include "commands.hpp"

#include <rigidplan/io.hpp>
#include <rigidplan/simulation.hpp>
#include <rigidplan/validation.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace rigidplan::cli {

namespace fs = std::filesystem;

namespace {

class OutputError : public Error {
 public:
  using Error::Error;
};

struct Setup {
  ScenarioConfig config;
  std::vector<PlannerMode> modes;
};

Setup load_setup(const CommandOptions& options, const std::string& default_modes) {
  Setup s;
  if (options.config_path) s.config = load_config(*options.config_path);
  try {
    s.modes = parse_mode_list(options.modes.value_or(
        default_modes.empty() ? std::string(mode_name(s.config.planner.mode)) : default_modes));
    if (options.seed) s.config.base_seed = *options.seed;
    if (options.runs) s.config.runs = *options.runs;
    if (options.horizon) s.config.horizon = *options.horizon;
    s.config.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("command line", 0, "", e.what());
  }
  return s;
}

// Output files are collected here and the manifest, written last, lists them.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw OutputError("cannot create output directory " + root_.string() + ": " + ec.message());
    fs::remove(root_ / "manifest.txt", ec);
    const fs::path probe = root_ / ".rigidplan_probe";
    {
      std::ofstream f(probe);
      if (!f) throw OutputError("output directory is not writable: " + root_.string());
    }
    fs::remove(probe, ec);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
    const fs::path path = root_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (f) fill(f);
    f.close();
    if (!f) throw OutputError("cannot write " + path.string());
    files_.push_back(name);
  }

  void write_manifest(const std::string& header) {
    const fs::path tmp = root_ / "manifest.txt.tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << header;
      for (const auto& name : files_) f << "file=" << name << '\n';
      f.close();
      if (!f) throw OutputError("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, root_ / "manifest.txt", ec);
    if (ec) throw OutputError("cannot finalize manifest: " + ec.message());
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

std::string manifest_header(const CommandOptions& options, const Setup& s, const std::string& command) {
  std::ostringstream h;
  h << "command=" << command << '\n';
  h << "config_path=" << options.config_path.value_or("") << '\n';
  h << "modes=";
  for (std::size_t i = 0; i < s.modes.size(); ++i) h << (i ? "," : "") << mode_name(s.modes[i]);
  h << '\n';
  h << "output_dir=" << options.output_dir << '\n';
  h << "base_seed=" << s.config.base_seed << '\n';
  h << "runs=" << s.config.runs << '\n';
  h << "horizon=" << s.config.horizon << '\n';
  return h.str();
}

// Shared error mapping for simulate and bench.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "rigidplan: config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const OutputError& e) {
    err << "rigidplan: output error: " << e.what() << '\n';
    return kUnwritableOutput;
  }
}

}  // namespace

std::vector<PlannerMode> parse_mode_list(const std::string& text) {
  std::vector<PlannerMode> modes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto mode = parse_mode(item);
    if (!mode) throw Error("unknown mode '" + item + "' (expected full, r, rs or rsv)");
    modes.push_back(*mode);
  }
  if (modes.empty()) throw Error("no modes given");
  return modes;
}

std::vector<std::size_t> bench_counts() {
  std::vector<std::size_t> counts;
  for (std::size_t c = 10; c <= 100; c += 10) counts.push_back(c);
  return counts;
}

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Setup s = load_setup(options, "");
    OutputDir dir(options.output_dir);
    for (const PlannerMode mode : s.modes) {
      ScenarioConfig cfg = s.config;
      cfg.planner.mode = mode;
      const std::string name(mode_name(mode));
      MonteCarloOptions mc;
      if (options.traces) {
        mc.on_trace = [&](const EpisodeTrace& tr) {
          dir.write("trace_" + name + "_" + std::to_string(tr.run_index) + ".csv",
                    [&](std::ostream& f) { write_trace_csv(f, tr); });
        };
      }
      const MetricsReport report = run_monte_carlo(cfg, mc);
      dir.write("metrics_" + name + ".csv", [&](std::ostream& f) { write_metrics_csv(f, report); });
      const auto& last = report.epochs.back();
      out << name << ": final success_rate " << format_number(last.success_rate) << ", rmse_m "
          << (std::isnan(last.rmse_m) ? std::string("n/a") : format_number(last.rmse_m)) << '\n';
    }
    dir.write_manifest(manifest_header(options, s, "simulate"));
    return int{kOk};
  });
}

int cmd_bench(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Setup s = load_setup(options, "full,r,rs,rsv");
    OutputDir dir(options.output_dir);
    const auto counts = bench_counts();
    const std::vector<TimingRow> rows = timing_profile(s.config, s.modes, counts);
    dir.write("timing.csv", [&](std::ostream& f) { write_timing_csv(f, rows); });
    dir.write_manifest(manifest_header(options, s, "bench"));
    out << "wrote " << rows.size() << " timing rows to " << (dir.root() / "timing.csv").string() << '\n';
    return int{kOk};
  });
}

int cmd_validate(const CommandOptions& options, std::ostream& out, std::ostream&) {
  ValidationOptions v;
  v.quick = options.quick;
  if (options.seed) v.seed = *options.seed;
  v.index_offset = options.index_offset;
  bool all = true;
  for (const CheckResult& r : run_validation(v)) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kValidationFailed;
}

}  // namespace rigidplan::cli
