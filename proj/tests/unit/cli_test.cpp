// Copyright 2026 The gaspipe-dse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "gaspipe/csv.hpp"

namespace gaspipe::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gaspipe_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gaspipe-dse");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, SimulateWritesGridAlignedCsvs) {
  ASSERT_EQ(cli({"simulate", "--out", path("run")}), 0) << err_.str();
  for (const char* name : {"truth.csv", "measurements.csv"}) {
    auto t = read_csv(path("run/") + name);
    EXPECT_EQ(t.rows.size(), 96u);
    EXPECT_EQ(t.header.size(), 61u);
    EXPECT_EQ(t.header[0], "t_s");
    EXPECT_EQ(t.rows.front()[0], 900.0);
    EXPECT_EQ(t.rows.back()[0], 86400.0);
  }
  EXPECT_EQ(read_csv(path("run/truth.csv")).header[1], "p_node1_true");
  EXPECT_EQ(read_csv(path("run/measurements.csv")).header[60], "m_node30_meas");
  auto echo = load_scenario(path("run/scenario_echo.scn"));
  EXPECT_EQ(echo, bundled_scenario(Condition::kNormal));
}

TEST_F(CliTest, SimulateIsByteDeterministic) {
  ASSERT_EQ(cli({"simulate", "--out", path("a"), "--seed", "7"}), 0);
  ASSERT_EQ(cli({"simulate", "--out", path("b"), "--seed", "7"}), 0);
  ASSERT_EQ(cli({"simulate", "--out", path("c"), "--seed", "8"}), 0);
  EXPECT_EQ(slurp(path("a/measurements.csv")), slurp(path("b/measurements.csv")));
  EXPECT_NE(slurp(path("a/measurements.csv")), slurp(path("c/measurements.csv")));
  EXPECT_EQ(load_scenario(path("a/scenario_echo.scn")).seed, 7u);
}

TEST_F(CliTest, HorizonOffGridIsAConfigError) {
  std::string text = serialize_scenario(bundled_scenario(Condition::kNormal));
  text.replace(text.find("900 86400"), 9, "900 86000");
  write("odd.scn", text);
  EXPECT_EQ(cli({"simulate", "--scenario", path("odd.scn"), "--out", path("run")}), 1);
  EXPECT_NE(err_.str().find("odd.scn"), std::string::npos);
}

TEST_F(CliTest, ParseErrorsNameFileAndLine) {
  write("broken.net", "[nodes]\n1 source 27.8\n2 sink\n[pipelines]\n1 2 five 0.6\n");
  EXPECT_EQ(cli({"simulate", "--network", path("broken.net"), "--out", path("run")}), 1);
  EXPECT_NE(err_.str().find("broken.net"), std::string::npos);
  EXPECT_NE(err_.str().find("line 5"), std::string::npos);
  EXPECT_EQ(cli({"simulate", "--network", path("absent.net"), "--out", path("run")}), 1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}), 1);
  EXPECT_EQ(cli({"simulate", "--variant", "ekf"}), 1);
  EXPECT_EQ(cli({"estimate", "--mw", "0"}), 1);
  EXPECT_EQ(cli({"launch"}), 1);
  EXPECT_EQ(cli({"--help"}), 0);
  EXPECT_NE(out_.str().find("simulate"), std::string::npos);
}

TEST_F(CliTest, MuFloorBelowOneIsRejected) {
  EXPECT_EQ(cli({"estimate", "--out", path("run"), "--mu-floor", "0.5"}), 1);
}

TEST_F(CliTest, NumericalFailureExitsWithTwo) {
  write("thin.net", "[nodes]\n1 source 27.8\n2 sink\n[pipelines]\n1 2 50 0.2\n");
  write("heavy.scn", "[time]\n900 86400 1\n[loads]\n2 0 200\n");
  EXPECT_EQ(cli({"simulate", "--network", path("thin.net"), "--scenario", path("heavy.scn"), "--out", path("run")}), 2);
}

TEST_F(CliTest, ClassicOnlyOmitsMuTrace) {
  ASSERT_EQ(cli({"estimate", "--out", path("run"), "--variant", "kf"}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(path("run/estimate_kf.csv")));
  EXPECT_FALSE(fs::exists(path("run/estimate_rkf.csv")));
  EXPECT_FALSE(fs::exists(path("run/mu_trace.csv")));
}

TEST_F(CliTest, MuTraceSpikesAtNode30BadData) {
  ASSERT_EQ(cli({"simulate", "--scenario", BAD_DATA_SCENARIO, "--out", path("run")}), 0) << err_.str();
  ASSERT_EQ(cli({"estimate", "--scenario", BAD_DATA_SCENARIO, "--out", path("run")}), 0) << err_.str();
  auto mu = read_csv(path("run/mu_trace.csv"));
  const auto col = mu.column("p_node30_mu");
  std::vector<double> trace;
  for (const auto& row : mu.rows) trace.push_back(row[col]);
  std::vector<double> sorted = trace;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  for (int step : {20, 21, 22, 53, 54, 55}) EXPECT_GT(trace[step - 1], 10.0 * median) << step;
}

TEST_F(CliTest, EstimateReadsEditedMeasurements) {
  ASSERT_EQ(cli({"simulate", "--out", path("run")}), 0);
  ASSERT_EQ(cli({"estimate", "--out", path("run"), "--variant", "kf"}), 0);
  const std::string before = slurp(path("run/estimate_kf.csv"));
  auto t = read_csv(path("run/measurements.csv"));
  t.rows[10][t.column("p_node30_meas")] += 1.0;
  write_csv(path("run/measurements.csv"), t);
  ASSERT_EQ(cli({"estimate", "--out", path("run"), "--variant", "kf"}), 0);
  EXPECT_NE(slurp(path("run/estimate_kf.csv")), before);
}

TEST_F(CliTest, EstimateRejectsMismatchedMeasurements) {
  ASSERT_EQ(cli({"simulate", "--out", path("run")}), 0);
  write("two.net", "[nodes]\n1 source 27.8\n2 sink\n[pipelines]\n1 2 5 0.6\n");
  write("two.scn", "[time]\n900 86400 1\n[loads]\n2 0 1\n");
  EXPECT_EQ(cli({"estimate", "--network", path("two.net"), "--scenario", path("two.scn"), "--out", path("run")}), 1);
  EXPECT_NE(err_.str().find("channels"), std::string::npos);
}

TEST_F(CliTest, EvaluateNeedsInputs) {
  EXPECT_EQ(cli({"evaluate", "--out", path("empty")}), 1);
  EXPECT_NE(err_.str().find("missing input"), std::string::npos);
}

TEST_F(CliTest, EvaluateReportAndRerun) {
  ASSERT_EQ(cli({"simulate", "--out", path("run"), "--seed", "3"}), 0);
  ASSERT_EQ(cli({"estimate", "--out", path("run"), "--seed", "3"}), 0);
  ASSERT_EQ(cli({"evaluate", "--out", path("run"), "--seed", "3"}), 0) << err_.str();
  const std::string report = slurp(path("run/report.csv"));
  const std::string summary = slurp(path("run/summary.txt"));
  ASSERT_EQ(cli({"evaluate", "--out", path("run"), "--seed", "3"}), 0);
  EXPECT_EQ(slurp(path("run/report.csv")), report);
  EXPECT_EQ(slurp(path("run/summary.txt")), summary);

  auto t = read_csv(path("run/report.csv"));
  EXPECT_EQ(t.rows.size(), 30u);
  const auto virt = t.column("m_virtual");
  for (const auto& row : t.rows) {
    for (const char* col : {"p_eps_kf", "p_eps_rkf", "m_eps_kf", "m_eps_rkf"}) {
      const double eps = row[t.column(col)];
      if (std::isnan(eps)) continue;
      if (row[virt] == 1.0 && col[0] == 'm') {
        EXPECT_GE(eps, 0.9);
        EXPECT_LE(eps, 1.0);
      } else {
        EXPECT_LT(eps, 1.0) << "node " << row[0] << " " << col;
      }
    }
  }
  EXPECT_TRUE(std::isnan(t.rows[0][t.column("p_eps_kf")]));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ::setenv("GASPIPE_DSE_OUT", path("from_env").c_str(), 1);
  const int rc = cli({"simulate"});
  ::unsetenv("GASPIPE_DSE_OUT");
  ASSERT_EQ(rc, 0) << err_.str();
  EXPECT_TRUE(fs::exists(path("from_env/truth.csv")));
}

TEST_F(CliTest, DemoWritesThreeConditions) {
  ASSERT_EQ(cli({"demo", "--out", path("demo")}), 0) << err_.str();
  for (const char* sub : {"normal", "bad_data", "bias"}) {
    for (const char* f : {"truth.csv", "measurements.csv", "estimate_kf.csv", "estimate_rkf.csv", "mu_trace.csv",
                          "report.csv", "summary.txt"}) {
      EXPECT_TRUE(fs::exists(dir_ / "demo" / sub / f)) << sub << "/" << f;
    }
  }
  const std::string summary = slurp(dir_ / "demo" / "summary.txt");
  EXPECT_NE(summary.find("[bad_data]"), std::string::npos);
  EXPECT_NE(summary.find("bad_data p_node30"), std::string::npos);
}

TEST_F(CliTest, ModelDump) {
  ASSERT_EQ(cli({"model", "--out", path("model")}), 0) << err_.str();
  const std::string f = slurp(path("model/transition.txt"));
  EXPECT_EQ(f.substr(0, f.find('\n')), "88 88");
}

}  // namespace
}  // namespace gaspipe::cli
