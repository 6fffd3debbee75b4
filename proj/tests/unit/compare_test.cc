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

#include "fedsdp/compare.h"

#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig config;
  config.n_clients = 5;
  config.n_hbc = 1;
  config.rounds = 8;
  config.activation_rate = 0.6;
  config.hidden_layers = {8};
  config.synthetic.samples_per_client = 200;
  return config;
}

TEST(CompareTest, NeedsTwoPolicies) {
  EXPECT_THROW(RunCompare(SmallConfig(), {}), ConfigError);
  EXPECT_THROW(RunCompare(SmallConfig(), {PolicyKind::kFedSdp}), ConfigError);
}

TEST(CompareTest, InvalidConfigIsRejected) {
  ExperimentConfig config = SmallConfig();
  config.epsilon = -1.0;
  EXPECT_THROW(RunCompare(config, {PolicyKind::kNone, PolicyKind::kFedSdp}), ConfigError);
}

TEST(CompareTest, NoNoiseBeatsFedSdpAndFedSdpInjectsLessThanConstant) {
  const ComparisonReport report = RunCompare(
      SmallConfig(), {PolicyKind::kNone, PolicyKind::kFedSdp, PolicyKind::kConstant});
  ASSERT_EQ(report.entries.size(), 3u);
  const RunSummary& none = report.entries[0].summary;
  const RunSummary& fedsdp = report.entries[1].summary;
  const RunSummary& constant = report.entries[2].summary;
  EXPECT_GE(none.final5_mean, fedsdp.final5_mean);
  EXPECT_EQ(none.total_noise, 0.0);
  EXPECT_GT(fedsdp.total_noise, 0.0);
  EXPECT_LT(fedsdp.total_noise, constant.total_noise);
  for (const ComparisonEntry& e : report.entries) EXPECT_TRUE(e.run_dir.empty());
}

TEST(CompareTest, DuplicatePoliciesReproduceEachOther) {
  const ComparisonReport report =
      RunCompare(SmallConfig(), {PolicyKind::kFedSdp, PolicyKind::kFedSdp});
  EXPECT_EQ(report.entries[0].logs, report.entries[1].logs);
  EXPECT_EQ(report.entries[0].ordinal, 0);
  EXPECT_EQ(report.entries[1].ordinal, 1);
}

TEST(CompareTest, EntriesMatchStandaloneRuns) {
  // Every policy sees the same federation and selection sequence.
  const ExperimentConfig config = SmallConfig();
  const ComparisonReport report =
      RunCompare(config, {PolicyKind::kTimeVarying, PolicyKind::kSensitivity});
  for (const ComparisonEntry& e : report.entries) {
    ExperimentConfig alone = config;
    alone.noise_policy = e.policy;
    const auto logs = RunSimulation(alone);
    EXPECT_EQ(e.logs, logs) << PolicyName(e.policy);
    for (std::size_t t = 0; t < logs.size(); ++t) {
      EXPECT_EQ(e.logs[t].selected_ids, report.entries[0].logs[t].selected_ids);
    }
  }
}

TEST(CompareTest, WritesOutputs) {
  ExperimentConfig config = SmallConfig();
  config.rounds = 3;
  const std::filesystem::path out =
      std::filesystem::temp_directory_path() / "fedsdp_compare_test";
  std::filesystem::remove_all(out);
  config.output_dir = out.string();
  const ComparisonReport report =
      RunCompare(config, {PolicyKind::kNone, PolicyKind::kConstant}, true);
  const std::filesystem::path root = out / ("compare-" + RunDirectoryName(config));
  EXPECT_EQ(report.entries[0].run_dir, (root / "0_none").string());
  EXPECT_EQ(report.entries[1].run_dir, (root / "1_constant").string());
  for (const ComparisonEntry& e : report.entries) {
    EXPECT_TRUE(std::filesystem::exists(e.run_dir + "/rounds.csv"));
    EXPECT_TRUE(std::filesystem::exists(e.run_dir + "/privacy.csv"));
    EXPECT_TRUE(std::filesystem::exists(e.run_dir + "/summary.json"));
  }
  std::ifstream in(root / "comparison.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 3);
  const std::string table = report.FormatTable();
  EXPECT_NE(table.find("none"), std::string::npos);
  EXPECT_NE(table.find("constant"), std::string::npos);
  std::filesystem::remove_all(out);
}

}  // namespace
}  // namespace fedsdp
