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

#include "fedsdp/orchestrator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

constexpr uint64_t kDataTag = 0x44415441;       // "DATA"
constexpr uint64_t kInitTag = 0x494e4954;       // "INIT"
constexpr uint64_t kSelectTag = 0x53454c43;     // "SELC"
constexpr uint64_t kClientTag = 0x434c4e54;     // "CLNT"
constexpr uint64_t kCsvShuffleTag = 0x43535653; // "CSVS"

Federation FederationFromCsv(const ExperimentConfig& config) {
  CsvSchema schema;
  schema.label_column = config.csv_label_column;
  if (!config.csv_private_column.empty()) {
    schema.private_column = config.csv_private_column;
  }
  CsvData csv = LoadCsvWithMask(config.csv_path, schema);
  const LabeledDataset& all = csv.dataset;

  Rng rng(DeriveSeed(DataSeed(config.master_seed), {kCsvShuffleTag}));
  const std::size_t n_test = static_cast<std::size_t>(
      std::llround(config.synthetic.test_fraction * static_cast<double>(all.size())));
  const std::vector<std::size_t> test_rows =
      StratifiedSample(all.labels, all.num_classes, n_test, rng);
  std::vector<bool> is_test(all.size(), false);
  for (std::size_t r : test_rows) is_test[r] = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!is_test[i]) rest.push_back(i);
  }
  rng.Shuffle(rest);

  Federation fed;
  fed.test = all.Subset(test_rows);
  const std::size_t n = static_cast<std::size_t>(config.n_clients);
  if (rest.size() < n) {
    throw ConfigError("csv has " + std::to_string(rest.size()) +
                      " training rows for " + std::to_string(n) + " clients");
  }
  std::size_t start = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t len = rest.size() / n + (c < rest.size() % n ? 1 : 0);
    std::vector<std::size_t> rows(rest.begin() + static_cast<std::ptrdiff_t>(start),
                                  rest.begin() + static_cast<std::ptrdiff_t>(start + len));
    start += len;
    std::vector<bool> mask;
    for (std::size_t r : rows) {
      mask.push_back(static_cast<int>(c) >= config.n_hbc && csv.private_mask[r]);
    }
    fed.clients.push_back(
        SplitPrivate(all.Subset(rows), mask, config.synthetic.validation_fraction, rng));
  }
  return fed;
}

}  // namespace

uint64_t DataSeed(uint64_t master_seed) { return DeriveSeed(master_seed, {kDataTag}); }

uint64_t InitSeed(uint64_t master_seed) { return DeriveSeed(master_seed, {kInitTag}); }

uint64_t SelectionSeed(uint64_t master_seed, int round) {
  return DeriveSeed(master_seed, {kSelectTag, static_cast<uint64_t>(round)});
}

uint64_t ClientRoundSeed(uint64_t master_seed, int round, int client_id) {
  return DeriveSeed(master_seed, {kClientTag, static_cast<uint64_t>(round),
                                  static_cast<uint64_t>(client_id)});
}

std::vector<int> SelectClients(const ServerState& server, int n_clients, Rng& rng) {
  const int k = server.clients_per_round;
  if (k < 1 || k > n_clients) {
    throw ConfigError("clients_per_round " + std::to_string(k) +
                      " must lie in [1, " + std::to_string(n_clients) + "]");
  }
  std::vector<int> ids(static_cast<std::size_t>(n_clients));
  std::iota(ids.begin(), ids.end(), 0);
  if (k < n_clients) {
    // Partial Fisher-Yates: the first k slots become a uniform sample.
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(rng.UniformInt(static_cast<uint64_t>(n_clients - i)));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(static_cast<std::size_t>(k));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

ClientRoundResult ClientRound(ClientState& client, const ModelParams& global_params,
                              const NoisePolicy& policy, const TrainConfig& cfg,
                              int round, int total_rounds, const Rng& rng) {
  client.local_params = global_params;
  RoundEstimate estimate = EstimateRound(client.bundle, global_params, cfg, rng);
  if (!estimate.full_model.AllFinite() ||
      !std::isfinite(Loss(estimate.full_model, client.bundle.validation))) {
    throw DivergenceError("client " + std::to_string(client.id) +
                          " diverged in round " + std::to_string(round));
  }

  PrivacyReport report;
  report.client_id = client.id;
  report.c_full = estimate.contributions.c_full;
  report.c_private = estimate.contributions.c_private;
  report.c_general = estimate.contributions.c_general;
  const ShapleyPair shapley = ShapleyTwoPlayer(estimate.contributions);
  report.gamma_private = shapley.gamma_private;
  report.gamma_general = shapley.gamma_general;
  try {
    report.ratio = ContributionRatio(shapley);
  } catch (const DegenerateContributionError&) {
    report.ratio = 1.0;
  }
  report.tolerance = PrivacyTolerance(report.ratio, client.dp);

  RoundContext ctx;
  ctx.round = round;
  ctx.total_rounds = total_rounds;
  ctx.ratio = report.ratio;
  ctx.dp = client.dp;
  ctx.dataset_size = client.bundle.train_size();
  ctx.prev_delta_norm = client.prev_delta_norm;
  report.sigma = PolicySigma(policy, ctx);

  client.prev_delta_norm = L2Distance(estimate.full_model, global_params);
  client.local_params = estimate.full_model;

  ClientRoundResult result;
  if (policy.protects()) {
    Rng noise_rng = rng.Substream(kUploadNoiseStream);
    result.upload = ProtectUpload(estimate.full_model, report.sigma,
                                  client.dp.clip_bound, noise_rng);
  } else {
    result.upload = std::move(estimate.full_model);
  }
  result.report = report;
  return result;
}

ModelParams Aggregate(std::span<const WeightedUpload> uploads) {
  if (uploads.empty()) throw ProtocolError("aggregate: no uploads");
  const ModelParams& first = uploads.front().params;
  std::vector<double> sum(first.size(), 0.0);
  double total_weight = 0.0;
  for (const WeightedUpload& u : uploads) {
    if (!u.params.SameLayout(first)) {
      throw ProtocolError("aggregate: upload layout does not match");
    }
    if (!(u.weight > 0.0)) throw ProtocolError("aggregate: weights must be > 0");
    const auto v = u.params.values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += u.weight * v[i];
    total_weight += u.weight;
  }
  for (double& s : sum) s /= total_weight;
  return ModelParams(first.layout(), std::move(sum));
}

Federation BuildFederation(const ExperimentConfig& config) {
  if (config.data_source == DataSource::kCsv) return FederationFromCsv(config);
  return GenerateFederation(config.n_clients, config.synthetic_spec(),
                            Rng(DataSeed(config.master_seed)));
}

Simulation::Simulation(const ExperimentConfig& config)
    : Simulation(config, (config.Validate(), BuildFederation(config))) {}

Simulation::Simulation(const ExperimentConfig& config, Federation federation)
    : config_(config) {
  config_.Validate();
  if (federation.clients.size() != static_cast<std::size_t>(config_.n_clients)) {
    throw ConfigError("federation has " + std::to_string(federation.clients.size()) +
                      " clients, config expects " + std::to_string(config_.n_clients));
  }
  if (federation.test.empty()) throw ConfigError("global test set is empty");
  policy_ = MakePolicy(config_.noise_policy, config_.policy_options());

  const DpParams dp = config_.dp();
  const std::size_t dim = federation.test.dim();
  const auto layout = MlpLayout(dim, config_.hidden_layers,
                                static_cast<std::size_t>(federation.test.num_classes));
  Rng init_rng(InitSeed(config_.master_seed));
  server_.global_params = InitializeUniform(layout, init_rng);
  server_.activation_rate = config_.activation_rate;
  server_.clients_per_round = config_.ClientsPerRound();

  for (std::size_t i = 0; i < federation.clients.size(); ++i) {
    ClientDataBundle& bundle = federation.clients[i];
    const std::string who = "client " + std::to_string(i);
    if (bundle.general_train.empty()) throw ConfigError(who + " has no general training data");
    if (bundle.validation.empty()) throw ConfigError(who + " has no validation data");
    if (bundle.general_train.dim() != dim) throw ConfigError(who + " has mismatched feature dimension");
    ClientState client;
    client.id = static_cast<int>(i);
    client.is_hbc = client.id < config_.n_hbc;
    if (client.is_hbc && bundle.has_private) {
      throw ConfigError(who + " is HBC but holds private data");
    }
    client.bundle = std::move(bundle);
    client.dp = dp;
    client.local_params = server_.global_params;
    client.prev_delta_norm = dp.clip_bound;
    clients_.push_back(std::move(client));
  }
  test_ = std::move(federation.test);
}

RoundLog Simulation::Step() {
  const int t = server_.round;
  RoundLog log;
  log.round = t;
  Rng select_rng(SelectionSeed(config_.master_seed, t));
  log.selected_ids = SelectClients(server_, config_.n_clients, select_rng);

  const TrainConfig cfg = config_.train();
  const ModelParams& global = server_.global_params;
  const std::size_t n_tasks = log.selected_ids.size();
  std::vector<std::optional<ClientRoundResult>> results(n_tasks);

  auto run_task = [&](std::size_t i) {
    const int id = log.selected_ids[i];
    ClientState& client = clients_[static_cast<std::size_t>(id)];
    if (observer_) observer_(t, id, global);
    try {
      results[i] = ClientRound(client, global, *policy_, cfg, t, config_.rounds,
                               Rng(ClientRoundSeed(config_.master_seed, t, id)));
    } catch (const DivergenceError&) {
      results[i].reset();
    } catch (const EmptyDataError&) {
      results[i].reset();
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(config_.threads), n_tasks);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < n_threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n_tasks; i = next++) run_task(i);
      });
    }
    for (std::thread& w : workers) w.join();
  }

  std::vector<WeightedUpload> uploads;
  for (std::size_t i = 0; i < n_tasks; ++i) {
    const int id = log.selected_ids[i];
    if (!results[i]) {
      log.dropped_ids.push_back(id);
      continue;
    }
    log.per_client.push_back(results[i]->report);
    log.total_sigma += results[i]->report.sigma;
    uploads.push_back({std::move(results[i]->upload),
                       static_cast<double>(clients_[static_cast<std::size_t>(id)]
                                               .bundle.train_size())});
  }
  if (!uploads.empty()) server_.global_params = Aggregate(uploads);

  cumulative_sigma_ += log.total_sigma;
  log.cumulative_sigma = cumulative_sigma_;
  log.global_accuracy = Evaluate(server_.global_params, test_);
  log.global_loss = Loss(server_.global_params, test_);
  ++server_.round;
  return log;
}

std::vector<RoundLog> Simulation::RunAll(const RoundSink& sink) {
  std::vector<RoundLog> logs;
  while (!done()) {
    logs.push_back(Step());
    if (sink) sink(logs.back());
  }
  return logs;
}

std::vector<RoundLog> RunSimulation(const ExperimentConfig& config,
                                    const RoundSink& sink) {
  Simulation sim(config);
  return sim.RunAll(sink);
}

}  // namespace fedsdp
