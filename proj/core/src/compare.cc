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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fedsdp/error.h"

namespace fedsdp {

std::string ComparisonReport::FormatTable() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-3s %-13s %10s %18s %14s\n", "#", "policy",
                "best_acc", "final5_acc", "total_noise");
  out += line;
  for (const ComparisonEntry& e : entries) {
    std::snprintf(line, sizeof(line), "%-3d %-13s %10.4f %10.4f +- %-5.4f %14.6g\n",
                  e.ordinal, std::string(PolicyName(e.policy)).c_str(),
                  e.summary.best_accuracy, e.summary.final5_mean, e.summary.final5_std,
                  e.summary.total_noise);
    out += line;
  }
  return out;
}

ComparisonReport RunCompare(const ExperimentConfig& config,
                            const std::vector<PolicyKind>& policies,
                            bool write_outputs) {
  if (policies.size() < 2) throw ConfigError("compare needs at least two policies");
  config.Validate();
  const Federation federation = BuildFederation(config);

  std::filesystem::path root;
  if (write_outputs) {
    root = std::filesystem::path(config.output_dir) / ("compare-" + RunDirectoryName(config));
  }

  ComparisonReport report;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    ExperimentConfig run_config = config;
    run_config.noise_policy = policies[i];
    Simulation sim(run_config, federation);

    ComparisonEntry entry;
    entry.ordinal = static_cast<int>(i);
    entry.policy = policies[i];
    entry.logs = sim.RunAll();
    if (write_outputs) {
      entry.run_dir =
          (root / (std::to_string(i) + "_" + std::string(PolicyName(policies[i])))).string();
      entry.summary = WriteRunDirectory(run_config, entry.logs, entry.run_dir);
    } else if (!entry.logs.empty()) {
      entry.summary = Summarize(entry.logs);
      entry.summary.config_digest = ConfigDigest(run_config);
    }
    report.entries.push_back(std::move(entry));
  }

  if (write_outputs) {
    const std::string path = (root / "comparison.csv").string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "ordinal,policy,best_accuracy,final5_mean,final5_std,total_noise\n";
    char buf[256];
    for (const ComparisonEntry& e : report.entries) {
      std::snprintf(buf, sizeof(buf), "%d,%s,%.17g,%.17g,%.17g,%.17g\n", e.ordinal,
                    std::string(PolicyName(e.policy)).c_str(), e.summary.best_accuracy,
                    e.summary.final5_mean, e.summary.final5_std, e.summary.total_noise);
      out << buf;
    }
    if (!out) throw IoError("write failed for '" + path + "'");
  }
  return report;
}

}  // namespace fedsdp
