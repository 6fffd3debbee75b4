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

#ifndef FEDSDP_METRICS_H_
#define FEDSDP_METRICS_H_

#include <string>
#include <vector>

#include "fedsdp/orchestrator.h"

namespace fedsdp {

// Table-style run summary: best accuracy over all rounds, mean and
// population standard deviation over the final five rounds.
struct RunSummary {
  double best_accuracy = 0.0;
  double final5_mean = 0.0;
  double final5_std = 0.0;
  // Rounds actually averaged; less than 5 only for short runs.
  int final_k = 0;
  double total_noise = 0.0;
  std::string config_digest;

  bool degraded() const { return final_k < 5; }
};

// Throws EmptyDataError on an empty log list.
RunSummary Summarize(const std::vector<RoundLog>& logs);

// Global per-round rows:
//   round,selected_ids,dropped_ids,global_accuracy,global_loss,
//   total_sigma,cumulative_sigma
// Id lists are ';'-separated. Reals use 17 significant digits.
void WriteRoundsCsv(const std::vector<RoundLog>& logs, const std::string& path);

// One row per (round, client):
//   round,client_id,c_full,c_private,c_general,gamma_private,
//   gamma_general,ratio,tolerance,sigma
void WritePrivacyCsv(const std::vector<RoundLog>& logs, const std::string& path);

// Inverse of the two writers; round-trips every numeric field exactly.
std::vector<RoundLog> ReadRunLogs(const std::string& rounds_path,
                                  const std::string& privacy_path);

void WriteSummaryJson(const RunSummary& summary, const std::string& policy,
                      uint64_t master_seed, const std::string& path);

// "<digest>-s<seed>" under output_dir.
std::string RunDirectoryName(const ExperimentConfig& config);

// Writes rounds.csv, privacy.csv and summary.json into `dir` (created if
// needed) and returns the summary.
RunSummary WriteRunDirectory(const ExperimentConfig& config,
                             const std::vector<RoundLog>& logs,
                             const std::string& dir);

}  // namespace fedsdp

#endif  // FEDSDP_METRICS_H_
