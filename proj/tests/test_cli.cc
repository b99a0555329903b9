// Copyright 2026 The wateralloc Authors
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

#include "support/desk.h"
#include "wateralloc/cli.h"
#include "wateralloc/mps.h"
#include "wateralloc/report.h"
#include "wateralloc/scenario_io.h"

namespace wateralloc {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wateralloc_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv(kOutDirEnv);
  }
  void TearDown() override {
    unsetenv(kOutDirEnv);
    fs::remove_all(dir_);
  }
  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"solve"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", "--builtin", "rajshahi", "--year", "monsoon"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", "--builtin", "rajshahi", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", "--builtin", "atlantis"}).code, kExitUsage);
  const CliRun m3 = run({"solve", "--builtin", "rajshahi", "--model", "3"});
  EXPECT_EQ(m3.code, kExitUsage);
  EXPECT_NE(m3.err.find("pareto"), std::string::npos);
  EXPECT_EQ(run({"pareto", "--builtin", "rajshahi", "--weights", "1"}).code, kExitUsage);
}

TEST_F(CliTest, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

TEST_F(CliTest, SolvePrintsTable) {
  const CliRun r = run({"solve", "--builtin", "rajshahi", "--year", "dry", "--model", "1"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Potato"), std::string::npos);
  EXPECT_NE(r.out.find("55271"), std::string::npos);
}

TEST_F(CliTest, JsonGoesToStdoutWithoutDirectory) {
  const CliRun r = run({"solve", "--builtin", "rajshahi", "--year", "wet", "--model",
                        "2", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], kSolveSchema);
  EXPECT_EQ(doc["model"], "model2");
}

TEST_F(CliTest, SolveWritesEveryFormatByteStable) {
  const std::vector<std::string> args = {"solve", "--builtin", "rajshahi", "--year",
                                         "wet", "--model", "2", "--out",
                                         dir_.string()};
  ASSERT_EQ(run(args).code, kExitOk);
  const std::string stem = (dir_ / "solve_model2_wet").string();
  for (const char* ext : {".json", ".csv", ".txt", "_plot.dat"}) {
    EXPECT_TRUE(fs::exists(stem + ext)) << ext;
  }
  const std::string first = slurp(stem + ".json");
  ASSERT_EQ(run(args).code, kExitOk);
  EXPECT_EQ(slurp(stem + ".json"), first);
  const nlohmann::json doc = nlohmann::json::parse(first);
  EXPECT_EQ(doc["schema"], kSolveSchema);
}

TEST_F(CliTest, OutDirFromEnvironment) {
  setenv(kOutDirEnv, dir_.c_str(), 1);
  ASSERT_EQ(run({"solve", "--builtin", "rajshahi", "--format", "csv"}).code, kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "solve_model1_dry.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "solve_model1_dry.json"));
}

TEST_F(CliTest, UnwritableOutDir) {
  std::ofstream(dir_ / "file") << "x";
  const CliRun r = run({"solve", "--builtin", "rajshahi", "--format", "json", "--out",
                     (dir_ / "file").string()});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST_F(CliTest, ValidateReportsProblems) {
  const CliRun missing = run({"validate", "--scenario", (dir_ / "nope.toml").string()});
  EXPECT_EQ(missing.code, kExitValidation);
  EXPECT_NE(missing.err.find("not found"), std::string::npos);

  std::ofstream(dir_ / "bad.toml") << "[economics]\ncw = 1\ncp = oops\n";
  const CliRun bad = run({"validate", "--scenario", (dir_ / "bad.toml").string()});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.err.find("parse error"), std::string::npos);
  EXPECT_NE(bad.err.find("3"), std::string::npos) << bad.err;

  Scenario s = testing::desk_scenario();
  s.crops[0].price = -1;
  save_scenario(s, dir_ / "invalid.toml");
  const CliRun invalid = run({"validate", "--scenario", (dir_ / "invalid.toml").string()});
  EXPECT_EQ(invalid.code, kExitValidation);
  EXPECT_NE(invalid.out.find("crops[0].price"), std::string::npos);

  EXPECT_EQ(run({"validate", "--builtin", "rajshahi"}).code, kExitOk);
  EXPECT_EQ(run({"validate", "--scenario", WATERALLOC_DATA_DIR "/rajshahi_csv"}).code,
            kExitOk);
}

TEST_F(CliTest, SolverFailureExitCode) {
  Scenario s = testing::desk_scenario();
  s.limits.t_pump = 1.0;
  save_scenario(s, dir_ / "tight.toml");
  const CliRun r = run({"solve", "--scenario", (dir_ / "tight.toml").string()});
  EXPECT_EQ(r.code, kExitSolver);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
}

TEST_F(CliTest, SmoothedSolver) {
  const CliRun r = run({"solve", "--builtin", "rajshahi", "--solver", "smoothed",
                     "--starts", "4", "--seed", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("local-only"), std::string::npos);
}

TEST_F(CliTest, MpsExport) {
  const fs::path mps = dir_ / "m.mps";
  ASSERT_EQ(run({"solve", "--builtin", "rajshahi", "--model", "2", "--mps",
                 mps.string()})
                .code,
            kExitOk);
  const LinearProgram lp = parse_mps(slurp(mps));
  EXPECT_GT(lp.num_cols(), 21);
}

TEST_F(CliTest, ParetoIsReproducible) {
  const std::vector<std::string> args = {
      "pareto", "--scenario", "", "--weights", "4", "--jitter", "--seed", "5",
      "--format", "json,csv", "--out", dir_.string()};
  save_scenario(testing::desk_scenario(), dir_ / "desk.toml");
  std::vector<std::string> a = args;
  a[2] = (dir_ / "desk.toml").string();
  ASSERT_EQ(run(a).code, kExitOk);
  const std::string first = slurp(dir_ / "front_dry.json");
  ASSERT_EQ(run(a).code, kExitOk);
  EXPECT_EQ(slurp(dir_ / "front_dry.json"), first);
  EXPECT_TRUE(fs::exists(dir_ / "front_dry.csv"));
  EXPECT_EQ(nlohmann::json::parse(first)["seed"], 5);
}

TEST_F(CliTest, SweepRowsMatchSolve) {
  const CliRun r = run({"sweep", "--builtin", "rajshahi", "--parameter", "canal_cap",
                     "--values", "6000", "--format", "csv", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(dir_ / "sweep_canal_cap_model1_dry.csv");
  ASSERT_EQ(run({"solve", "--builtin", "rajshahi", "--format", "json", "--out",
                 dir_.string()})
                .code,
            kExitOk);
  const nlohmann::json doc =
      nlohmann::json::parse(slurp(dir_ / "solve_model1_dry.json"));
  EXPECT_NE(csv.find("," + format_exact(doc["nb"].get<double>()) + ","),
            std::string::npos)
      << csv;
}

TEST_F(CliTest, SweepRejectsBadParameter) {
  EXPECT_EQ(run({"sweep", "--builtin", "rajshahi", "--parameter", "rain",
                 "--values", "1"})
                .code,
            kExitUsage);
  EXPECT_EQ(run({"sweep", "--builtin", "rajshahi", "--parameter",
                 "tef_fraction_high", "--values", "1.5"})
                .code,
            kExitValidation);
}

}  // namespace
}  // namespace wateralloc
