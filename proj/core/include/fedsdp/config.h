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

#ifndef FEDSDP_CONFIG_H_
#define FEDSDP_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedsdp/data.h"
#include "fedsdp/model.h"
#include "fedsdp/noise.h"

namespace fedsdp {

enum class DataSource { kSynthetic, kCsv };

// Everything that defines a run. Defaults are the desk profile; see
// ApplyPaperProfile for the full-scale values.
struct ExperimentConfig {
  int n_clients = 20;
  int n_hbc = 2;
  int rounds = 100;
  double activation_rate = 0.1;
  int local_epochs = 2;
  double learning_rate = 0.1;
  int batch_size = 50;
  double clip_bound = 20.0;
  double epsilon = 0.2;
  std::optional<double> delta;  // unset: 1 / batch_size
  double alpha = 0.25;
  double beta = 0.1;
  PolicyKind noise_policy = PolicyKind::kFedSdp;
  double time_varying_decay = 0.99;
  std::vector<std::size_t> hidden_layers = {32};

  DataSource data_source = DataSource::kSynthetic;
  SyntheticSpec synthetic;  // hbc_clients is taken from n_hbc
  std::string csv_path;
  std::string csv_label_column = "y";
  std::string csv_private_column;  // empty: no private rows

  uint64_t master_seed = 1;
  std::string output_dir = "runs";
  int threads = 1;

  double EffectiveDelta() const {
    return delta ? *delta : 1.0 / static_cast<double>(batch_size);
  }
  int ClientsPerRound() const;
  TrainConfig train() const;
  DpParams dp() const;
  SyntheticSpec synthetic_spec() const;
  PolicyOptions policy_options() const { return {time_varying_decay}; }

  // Throws ConfigError listing every violated constraint by field name.
  void Validate() const;
};

// N = 100, 10 HBC clients, 400 rounds, phi = 0.1, E = 2, eta = 0.1, C = 20.
void ApplyPaperProfile(ExperimentConfig& config);

// Canonical key order used by SerializeConfig and the CLI flag table.
std::vector<std::string> ConfigKeys();

// Sets one field from its text form. Throws ConfigError naming the key when
// the key is unknown or the value does not parse.
void ApplyConfigValue(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

// Flat "key = value" lines; '#' starts a comment. Applies onto `base`
// without validating.
ExperimentConfig ParseConfigText(const std::string& text,
                                 ExperimentConfig base = {});

// Reads `path` (if non-empty), applies `overrides` in order, validates.
ExperimentConfig ParseConfig(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides = {},
    bool paper_profile = false);

// One "key = value" line per field in ConfigKeys() order.
std::string SerializeConfig(const ExperimentConfig& config);

// 16 hex digits of FNV-1a over the serialized config, excluding fields that
// do not affect results (master_seed, output_dir, threads).
std::string ConfigDigest(const ExperimentConfig& config);

}  // namespace fedsdp

#endif  // FEDSDP_CONFIG_H_
