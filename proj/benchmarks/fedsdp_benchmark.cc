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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "fedsdp/config.h"
#include "fedsdp/model.h"
#include "fedsdp/noise.h"
#include "fedsdp/orchestrator.h"

namespace fedsdp {
namespace {

struct Fixture {
  ExperimentConfig config;
  Federation fed;
  ModelParams global;

  Fixture() {
    config.n_clients = 4;
    fed = BuildFederation(config);
    Rng rng(InitSeed(1));
    global = InitializeUniform(MlpLayout(fed.test.dim(), config.hidden_layers,
                                         static_cast<std::size_t>(fed.test.num_classes)),
                               rng);
  }
};

const Fixture& Shared() {
  static const Fixture f;
  return f;
}

void BM_SgdEpoch(benchmark::State& state) {
  const Fixture& f = Shared();
  const LabeledDataset data = f.fed.clients[1].FullTrain();
  TrainConfig cfg = f.config.train();
  cfg.batch_size = static_cast<int>(state.range(0));
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(SgdEpoch(f.global, data, cfg, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.size()));
}
BENCHMARK(BM_SgdEpoch)->Arg(10)->Arg(50)->Arg(200);

void BM_PolicySigma(benchmark::State& state) {
  const auto policy = MakePolicy(static_cast<PolicyKind>(state.range(0)), {});
  RoundContext ctx;
  ctx.round = 10;
  ctx.total_rounds = 100;
  ctx.ratio = 0.4;
  ctx.dataset_size = 700;
  ctx.prev_delta_norm = 3.0;
  ctx.dp = DpParams{};
  for (auto _ : state) benchmark::DoNotOptimize(policy->Sigma(ctx));
  state.SetLabel(std::string(policy->name()));
}
BENCHMARK(BM_PolicySigma)->DenseRange(0, 4);

void BM_ClientRound(benchmark::State& state) {
  const Fixture& f = Shared();
  ClientState client;
  client.id = 1;
  client.bundle = f.fed.clients[1];
  client.dp = f.config.dp();
  client.prev_delta_norm = f.config.clip_bound;
  const FedSdpPolicy policy;
  const TrainConfig cfg = f.config.train();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ClientRound(client, f.global, policy, cfg, 0, 100, Rng(7)));
  }
}
BENCHMARK(BM_ClientRound)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const Fixture& f = Shared();
  Rng rng(9);
  std::vector<WeightedUpload> uploads;
  for (int64_t i = 0; i < state.range(0); ++i) {
    uploads.push_back({InitializeUniform(f.global.layout(), rng), 100.0 + static_cast<double>(i)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(Aggregate(uploads));
}
BENCHMARK(BM_Aggregate)->Arg(2)->Arg(10)->Arg(100);

}  // namespace
}  // namespace fedsdp

BENCHMARK_MAIN();
