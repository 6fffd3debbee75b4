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

#ifndef FEDSDP_ORCHESTRATOR_H_
#define FEDSDP_ORCHESTRATOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fedsdp/config.h"
#include "fedsdp/data.h"
#include "fedsdp/model.h"
#include "fedsdp/noise.h"
#include "fedsdp/privacy_estimation.h"
#include "fedsdp/rng.h"

namespace fedsdp {

// Per-client, per-round record of the estimation and noise steps.
struct PrivacyReport {
  int client_id = 0;
  double c_full = 0.0;
  double c_private = 0.0;
  double c_general = 0.0;
  double gamma_private = 0.0;
  double gamma_general = 0.0;
  double ratio = 0.0;      // unclamped; 1 when the Shapley total is zero
  double tolerance = 0.0;  // from the clamped ratio
  double sigma = 0.0;      // noise actually injected

  friend bool operator==(const PrivacyReport&, const PrivacyReport&) = default;
};

struct RoundLog {
  int round = 0;
  std::vector<int> selected_ids;
  std::vector<int> dropped_ids;  // selected but failed locally
  double global_accuracy = 0.0;
  double global_loss = 0.0;
  std::vector<PrivacyReport> per_client;  // ascending client id
  double total_sigma = 0.0;
  double cumulative_sigma = 0.0;

  friend bool operator==(const RoundLog&, const RoundLog&) = default;
};

struct ClientState {
  int id = 0;
  ClientDataBundle bundle;
  DpParams dp;
  ModelParams local_params;
  // ||w_i - w_g|| from this client's last participation. Starts at the clip
  // bound, which SensitivityDP reads as its maximal scale.
  double prev_delta_norm = 0.0;
  bool is_hbc = false;
};

struct ServerState {
  ModelParams global_params;
  int round = 0;
  double activation_rate = 1.0;
  int clients_per_round = 1;
};

// Substream tag for the upload perturbation inside a client round.
inline constexpr uint64_t kUploadNoiseStream = 4;

// Seeds of the simulation's independent random streams.
uint64_t DataSeed(uint64_t master_seed);
uint64_t InitSeed(uint64_t master_seed);
uint64_t SelectionSeed(uint64_t master_seed, int round);
uint64_t ClientRoundSeed(uint64_t master_seed, int round, int client_id);

// server.clients_per_round distinct ids drawn uniformly without
// replacement, returned in ascending order. Throws ConfigError if K > N.
std::vector<int> SelectClients(const ServerState& server, int n_clients, Rng& rng);

struct ClientRoundResult {
  ModelParams upload;
  PrivacyReport report;
};

// Estimation, noise scale and upload protection for one client. Updates
// client.local_params and client.prev_delta_norm. Throws DivergenceError
// when local training yields non-finite parameters.
ClientRoundResult ClientRound(ClientState& client, const ModelParams& global_params,
                              const NoisePolicy& policy, const TrainConfig& cfg,
                              int round, int total_rounds, const Rng& rng);

struct WeightedUpload {
  ModelParams params;
  double weight = 1.0;
};

// Weighted mean in input order. Throws ProtocolError on an empty list,
// mismatched layouts or non-positive weights.
ModelParams Aggregate(std::span<const WeightedUpload> uploads);

// Synthetic data from DataSeed(master_seed), or the CSV file shuffled,
// test-split and dealt into n_clients contiguous shards.
Federation BuildFederation(const ExperimentConfig& config);

using RoundSink = std::function<void(const RoundLog&)>;
// Called with (round, client id, starting params) when a selected client
// receives the broadcast. May run on worker threads.
using BroadcastObserver = std::function<void(int, int, const ModelParams&)>;

class Simulation {
 public:
  // Validates the config and every client bundle; throws ConfigError before
  // any round runs.
  explicit Simulation(const ExperimentConfig& config);
  Simulation(const ExperimentConfig& config, Federation federation);

  // Runs one global round: select, client rounds (up to config.threads in
  // parallel), aggregate in ascending id order, evaluate on the test pool.
  RoundLog Step();
  bool done() const { return server_.round >= config_.rounds; }
  std::vector<RoundLog> RunAll(const RoundSink& sink = {});

  const ServerState& server() const { return server_; }
  const std::vector<ClientState>& clients() const { return clients_; }
  const LabeledDataset& test_set() const { return test_; }
  const NoisePolicy& policy() const { return *policy_; }
  void set_broadcast_observer(BroadcastObserver observer) {
    observer_ = std::move(observer);
  }

 private:
  ExperimentConfig config_;
  std::unique_ptr<NoisePolicy> policy_;
  std::vector<ClientState> clients_;
  LabeledDataset test_;
  ServerState server_;
  double cumulative_sigma_ = 0.0;
  BroadcastObserver observer_;
};

std::vector<RoundLog> RunSimulation(const ExperimentConfig& config,
                                    const RoundSink& sink = {});

}  // namespace fedsdp

#endif  // FEDSDP_ORCHESTRATOR_H_
