#include "commands.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace rigidplan;
using namespace rigidplan::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("rigidplan_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Drops the last CSV column (wall-clock time).
  static std::string without_timing(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
    return out;
  }

  fs::path root_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, ParseModeList) {
  EXPECT_EQ(parse_mode_list("full,rsv"), (std::vector<PlannerMode>{PlannerMode::FullSvd, PlannerMode::RandomizedSmoothPruned}));
  EXPECT_THROW(parse_mode_list("full,svd"), Error);
  EXPECT_THROW(parse_mode_list(""), Error);
}

TEST_F(CliTest, MissingConfigExitsTwoAndNamesPath) {
  CommandOptions o;
  o.config_path = (root_ / "absent.cfg").string();
  o.output_dir = (root_ / "out").string();
  EXPECT_EQ(cmd_simulate(o, out_, err_), kBadConfig);
  EXPECT_NE(err_.str().find("absent.cfg"), std::string::npos);
}

TEST_F(CliTest, BadConfigLineExitsTwo) {
  CommandOptions o;
  o.config_path = write_file("bad.cfg", "runs = 2\nhorizon = soon\n").string();
  o.output_dir = (root_ / "out").string();
  EXPECT_EQ(cmd_simulate(o, out_, err_), kBadConfig);
  EXPECT_NE(err_.str().find("bad.cfg:2"), std::string::npos);
  EXPECT_NE(err_.str().find("horizon"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "out" / "manifest.txt"));
}

TEST_F(CliTest, BadFlagValuesExitTwo) {
  CommandOptions o;
  o.output_dir = (root_ / "out").string();
  o.modes = "full,nope";
  EXPECT_EQ(cmd_simulate(o, out_, err_), kBadConfig);
  o.modes = "rsv";
  o.runs = 0;
  EXPECT_EQ(cmd_bench(o, out_, err_), kBadConfig);
}

TEST_F(CliTest, UnwritableOutputExitsThree) {
  const fs::path blocker = write_file("not_a_dir", "x");
  CommandOptions o;
  o.runs = 1;
  o.horizon = 1;
  o.output_dir = (blocker / "sub").string();
  EXPECT_EQ(cmd_simulate(o, out_, err_), kUnwritableOutput);
  EXPECT_EQ(cmd_bench(o, out_, err_), kUnwritableOutput);
}

TEST_F(CliTest, SimulateWritesMetricsTracesAndManifest) {
  CommandOptions o;
  o.modes = "full,rsv";
  o.runs = 2;
  o.horizon = 4;
  o.traces = true;
  o.output_dir = (root_ / "sim").string();
  ASSERT_EQ(cmd_simulate(o, out_, err_), kOk) << err_.str();

  const std::string manifest = read(root_ / "sim" / "manifest.txt");
  std::set<std::string> listed;
  std::istringstream in(manifest);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("file=", 0) == 0) listed.insert(line.substr(5));
  }
  std::set<std::string> present;
  for (const auto& entry : fs::directory_iterator(root_ / "sim")) present.insert(entry.path().filename().string());
  present.erase("manifest.txt");
  EXPECT_EQ(listed, present);
  EXPECT_TRUE(listed.count("metrics_full.csv"));
  EXPECT_TRUE(listed.count("metrics_rsv.csv"));
  EXPECT_TRUE(listed.count("trace_rsv_2.csv"));
  EXPECT_NE(manifest.find("modes=full,rsv\n"), std::string::npos);
  EXPECT_NE(manifest.find("base_seed=1\n"), std::string::npos);

  const std::string metrics = read(root_ / "sim" / "metrics_rsv.csv");
  EXPECT_EQ(metrics.rfind("epoch,success_rate,rmse_m,mean_planning_time_s\n", 0), 0u);
  EXPECT_EQ(metrics.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 5);
  // Epoch 1 has no estimate: empty RMSE field.
  EXPECT_NE(metrics.find("\n1,0,,"), std::string::npos);
}

TEST_F(CliTest, SimulateIsDeterministicExceptTiming) {
  CommandOptions o;
  o.modes = "rsv";
  o.runs = 3;
  o.horizon = 6;
  o.seed = 99;
  o.output_dir = (root_ / "a").string();
  ASSERT_EQ(cmd_simulate(o, out_, err_), kOk);
  o.output_dir = (root_ / "b").string();
  ASSERT_EQ(cmd_simulate(o, out_, err_), kOk);
  const std::string a = read(root_ / "a" / "metrics_rsv.csv");
  const std::string b = read(root_ / "b" / "metrics_rsv.csv");
  EXPECT_EQ(without_timing(a), without_timing(b));
  o.seed = 100;
  o.output_dir = (root_ / "c").string();
  ASSERT_EQ(cmd_simulate(o, out_, err_), kOk);
  EXPECT_NE(without_timing(a), without_timing(read(root_ / "c" / "metrics_rsv.csv")));
}

TEST_F(CliTest, ConfigFileDrivesSimulation) {
  CommandOptions o;
  o.config_path = write_file("s.cfg", "mode = rs\nruns = 1\nhorizon = 3\nseed = 5\n").string();
  o.output_dir = (root_ / "cfg").string();
  ASSERT_EQ(cmd_simulate(o, out_, err_), kOk);
  EXPECT_TRUE(fs::exists(root_ / "cfg" / "metrics_rs.csv"));
  EXPECT_NE(read(root_ / "cfg" / "manifest.txt").find("base_seed=5\n"), std::string::npos);
}

TEST_F(CliTest, SmokeProfileIsFast) {
  CommandOptions o;
  o.modes = "full,rsv";
  o.runs = 4;
  o.horizon = 10;
  o.output_dir = (root_ / "smoke").string();
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(cmd_simulate(o, out_, err_), kOk);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST_F(CliTest, BenchWritesTimingRows) {
  CommandOptions o;
  o.modes = "rs,rsv";
  o.runs = 1;
  o.horizon = 20;
  o.output_dir = (root_ / "bench").string();
  ASSERT_EQ(cmd_bench(o, out_, err_), kOk) << err_.str();
  const std::string csv = read(root_ / "bench" / "timing.csv");
  EXPECT_EQ(csv.rfind("mode,measurement_count,mean_planning_time_s\n", 0), 0u);
  // counts 10..40 are reachable within 20 epochs of two UAVs
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 4);
  EXPECT_NE(csv.find("\nrs,10,"), std::string::npos);
  EXPECT_NE(csv.find("\nrsv,40,"), std::string::npos);
  EXPECT_TRUE(fs::exists(root_ / "bench" / "manifest.txt"));
}

TEST_F(CliTest, ValidateQuickPassesAndHookFails) {
  CommandOptions o;
  o.quick = true;
  EXPECT_EQ(cmd_validate(o, out_, err_), kOk) << out_.str();
  EXPECT_EQ(out_.str().find("FAIL"), std::string::npos);
  std::ostringstream second;
  o.index_offset = 1;
  EXPECT_EQ(cmd_validate(o, second, err_), kValidationFailed);
  EXPECT_NE(second.str().find("FAIL  rank law"), std::string::npos);
}
