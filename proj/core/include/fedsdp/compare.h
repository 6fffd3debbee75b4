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

#ifndef FEDSDP_COMPARE_H_
#define FEDSDP_COMPARE_H_

#include <string>
#include <vector>

#include "fedsdp/config.h"
#include "fedsdp/metrics.h"
#include "fedsdp/noise.h"
#include "fedsdp/orchestrator.h"

namespace fedsdp {

struct ComparisonEntry {
  int ordinal = 0;  // position in the requested policy list
  PolicyKind policy = PolicyKind::kNone;
  RunSummary summary;
  std::vector<RoundLog> logs;
  std::string run_dir;  // empty when outputs were not written
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;

  // Side-by-side text table: ordinal, policy, best, final-5, total noise.
  std::string FormatTable() const;
};

// Runs every policy on one shared federation and seed, so all runs see
// identical bundles and client-selection sequences. With write_outputs the
// per-policy run directories and comparison.csv go under
// output_dir/compare-<digest>-s<seed>/. Throws ConfigError for fewer than
// two policies.
ComparisonReport RunCompare(const ExperimentConfig& config,
                            const std::vector<PolicyKind>& policies,
                            bool write_outputs = false);

}  // namespace fedsdp

#endif  // FEDSDP_COMPARE_H_
