// Copyright 2026 The topp-ni Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("topp_ni_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const fs::path& out) const {
    fs::create_directories(out);
    const std::string cmd = std::string(TOPP_NI_CLI) + " " + args + " --out " +
                            out.string() + " > " + (out / "stdout.txt").string() +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  int run(const std::string& args) const { return run(args, dir_); }

  static std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  json report() const { return json::parse(read(dir_ / "report.json")); }

  fs::path dir_;
};

std::string config(const char* name) {
  return std::string("--config ") + TOPP_NI_CONFIGS + "/" + name;
}

TEST_F(Cli, PlanFeasibleCase) {
  ASSERT_EQ(run("plan " + config("case1.json")), 0);
  const auto r = report();
  EXPECT_EQ(r["verdict"], "feasible");
  EXPECT_GT(r["traversal_time"].get<double>(), 0.0);
  EXPECT_EQ(r["segments"].size(), 4u);
  for (const char* f : {"trajectory.csv", "profiles.csv", "switchpoints.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  EXPECT_EQ(read(dir_ / "trajectory.csv").substr(0, 22), "s,sdot,kind,profile_id");
  EXPECT_EQ(read(dir_ / "switchpoints.csv").substr(0, 30),
            "s,sdot,type,transition,status\n");
}

TEST_F(Cli, PlanNiFailure) {
  ASSERT_EQ(run("plan " + config("case2.json")), 2);
  const auto r = report();
  EXPECT_EQ(r["verdict"], "infeasible");
  EXPECT_EQ(r["cause"], "NI failure");
  EXPECT_LT(r["s_last"].get<double>(), r["s_e"].get<double>());
  EXPECT_FALSE(r["rt"]["failure_segments"].empty());
}

TEST_F(Cli, PlanNotTraversable) {
  ASSERT_EQ(run("plan " + config("hill.json")), 2);
  EXPECT_EQ(report()["cause"], "not traversable");
}

TEST_F(Cli, DetectFailure) {
  ASSERT_EQ(run("detect-failure " + config("case2.json")), 2);
  const auto r = report();
  EXPECT_EQ(r["verdict"], "infeasible");
  EXPECT_FALSE(r["rt"]["gaps"].empty());
  EXPECT_TRUE(r["property6"]["C1"].get<bool>());
  ASSERT_EQ(run("detect-failure " + config("case1.json")), 0);
}

TEST_F(Cli, MvcWritesInfinityOnStraightPath) {
  ASSERT_EQ(run("mvc " + config("line.json") + " --grid 50"), 0);
  const std::string csv = read(dir_ / "limits.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s,mvc,vlim,mvc_star,is_dagger");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",inf,"), std::string::npos) << line;
    EXPECT_EQ(line.back(), '1') << line;
  }
  EXPECT_EQ(rows, 50);
}

TEST_F(Cli, OverridesAreApplied) {
  ASSERT_EQ(run("plan " + config("line.json") + " --grid 300 --step 0.01"), 0);
  const auto n = report()["config"]["numerics"];
  EXPECT_EQ(n["grid"], 300);
  EXPECT_EQ(n["step"], 0.01);
}

TEST_F(Cli, ErrorsExitWithOne) {
  EXPECT_EQ(run(std::string("plan --config ") + TOPP_NI_TESTDATA + "/malformed.json"), 1);
  EXPECT_EQ(run(std::string("plan --config ") + TOPP_NI_TESTDATA + "/unknown_key.json"), 1);
  EXPECT_EQ(run("plan --config /nonexistent.json"), 1);
  EXPECT_EQ(run("plan"), 1);
  EXPECT_EQ(run("demo-unicycle --case 3"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
}

TEST_F(Cli, DemoCase2) {
  ASSERT_EQ(run("demo-unicycle --case 2"), 2);
  const auto p6 = json::parse(read(dir_ / "property6.json"));
  EXPECT_TRUE(p6["C1"].get<bool>());
  EXPECT_TRUE(p6["C2"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "limits.csv"));
  EXPECT_EQ(report()["cause"], "NI failure");
}

TEST_F(Cli, DemoCase1) {
  ASSERT_EQ(run("demo-unicycle --case 1"), 0);
  EXPECT_FALSE(json::parse(read(dir_ / "property6.json"))["holds"].get<bool>());
}

TEST_F(Cli, OutputsAreDeterministic) {
  ASSERT_EQ(run("demo-unicycle --case 2", dir_ / "a"), 2);
  ASSERT_EQ(run("demo-unicycle --case 2", dir_ / "b"), 2);
  for (const char* f : {"report.json", "trajectory.csv", "profiles.csv",
                        "switchpoints.csv", "limits.csv", "property6.json"}) {
    EXPECT_EQ(read(dir_ / "a" / f), read(dir_ / "b" / f)) << f;
  }
}

}  // namespace
