// Copyright 2026 The fedsdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the fedsdp binary through std::system and checks exit codes and
// outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "fedsdp/analysis.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("fedsdp_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + FEDSDP_CLI_PATH + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  // Small federation so runs finish quickly.
  std::string Small() const {
    return "--n_clients 4 --n_hbc 1 --rounds 3 --activation_rate 0.5 "
           "--samples-per-client 150 --hidden_layers 8 --output_dir \"" +
           (dir_ / "runs").string() + "\"";
  }

  fs::path dir_;
};

TEST_F(CliTest, NoSubcommandIsAUsageError) { EXPECT_EQ(Run("").code, 1); }

TEST_F(CliTest, HelpSucceeds) {
  const Result r = Run("run --help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--epsilon"), std::string::npos);
}

TEST_F(CliTest, UnknownFlagIsAConfigError) { EXPECT_EQ(Run("run --bogus 1").code, 1); }

TEST_F(CliTest, InvalidValueIsAConfigError) {
  const Result r = Run("run --epsilon -1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("epsilon"), std::string::npos);
}

TEST_F(CliTest, MissingConfigFileIsARuntimeError) {
  EXPECT_EQ(Run("run --config \"" + (dir_ / "nope.conf").string() + "\"").code, 2);
}

TEST_F(CliTest, MissingCsvIsARuntimeError) {
  const Result r = Run("run " + Small() + " --data_source csv --csv_path \"" +
                       (dir_ / "missing.csv").string() + "\"");
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST_F(CliTest, RunWritesArtifactsAndNamesTheRegime) {
  const Result r = Run("run " + Small() + " --alpha 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("standard (epsilon, delta)-DP"), std::string::npos);
  EXPECT_NE(r.out.find("round    2"), std::string::npos);
  int dirs = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "runs")) {
    ++dirs;
    EXPECT_TRUE(fs::exists(entry.path() / "rounds.csv"));
    EXPECT_TRUE(fs::exists(entry.path() / "privacy.csv"));
    EXPECT_TRUE(fs::exists(entry.path() / "summary.json"));
  }
  EXPECT_EQ(dirs, 1);
}

TEST_F(CliTest, ConfigFileAndFlagOverride) {
  std::ofstream(dir_ / "exp.conf") << "rounds = 7\nepsilon = 0.5\n";
  const Result r = Run("run -q " + Small() + " --config \"" + (dir_ / "exp.conf").string() +
                       "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& entry : fs::directory_iterator(dir_ / "runs")) {
    std::ifstream in(entry.path() / "rounds.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 1 + 3);  // flag beats file
  }
}

TEST_F(CliTest, CompareWritesATable) {
  const Result r = Run("compare " + Small() + " --policies none,fedsdp");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("fedsdp"), std::string::npos);
  EXPECT_EQ(Run("compare " + Small() + " --policies fedsdp").code, 1);
  EXPECT_EQ(Run("compare " + Small() + " --policies fedsdp,bogus").code, 1);
}

TEST_F(CliTest, BoundPrintsTheSeries) {
  const Result r = Run("bound --L 1 --rho 1 --eta 0.1 --E 2 --G_c 1 --N_c 0.1 "
                       "--phi 0.5 --K 3 --d0 2 --t_max 10");
  ASSERT_EQ(r.code, 0) << r.err;
  fedsdp::ConvergenceConstants c;
  c.noise_bound = 0.1;
  c.activation_rate = 0.5;
  c.clients_per_round = 3;
  c.initial_gap = 2.0;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,bound");
  int t = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    EXPECT_EQ(std::stoi(line.substr(0, comma)), t);
    EXPECT_DOUBLE_EQ(std::stod(line.substr(comma + 1)), fedsdp::ConvergenceBound(c, t));
    ++t;
  }
  EXPECT_EQ(t, 11);
}

TEST_F(CliTest, BoundRejectsLargeStepSize) {
  const Result r = Run("bound --eta 0.5");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("eta < 1/(4L)"), std::string::npos);
}

TEST_F(CliTest, GenDataWritesEveryClient) {
  const fs::path out = dir_ / "data";
  const Result r = Run("gen-data " + Small() + " --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  for (int i = 0; i < 4; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "client_%03d_general.csv", i);
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  EXPECT_TRUE(fs::exists(out / "test.csv"));
  EXPECT_EQ(Slurp(out / "test.csv").substr(0, 3), "x0,");
}

}  // namespace
