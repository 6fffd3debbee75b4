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

// fedsdp: federated-learning simulator with Shapley-driven DP noise.
//
//   fedsdp run      [--config FILE] [--paper-profile] [--<key> VALUE ...]
//   fedsdp compare  --policies fedsdp,constant,... [config flags]
//   fedsdp bound    --L 1 --rho 1 --eta 0.1 ... [--t_max 100]
//   fedsdp gen-data --out DIR [config flags]
//
// Exit status: 0 on success, 1 on configuration errors, 2 on runtime errors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fedsdp/analysis.h"
#include "fedsdp/compare.h"
#include "fedsdp/config.h"
#include "fedsdp/data.h"
#include "fedsdp/error.h"
#include "fedsdp/metrics.h"
#include "fedsdp/orchestrator.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Config file, profile switch and one flag per ExperimentConfig key.
struct ConfigFlags {
  std::string config_path;
  bool paper_profile = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "key = value config file");
    app->add_flag("--paper-profile", paper_profile,
                  "Full-scale defaults: N=100, 10 HBC, T=400, phi=0.1, E=2, eta=0.1, C=20");
    for (const std::string& key : fedsdp::ConfigKeys()) {
      std::string names = "--" + key;
      std::string dashed = key;
      for (char& c : dashed) {
        if (c == '_') c = '-';
      }
      if (dashed != key) names += ",--" + dashed;
      options[key] = app->add_option(names, values[key], "config key '" + key + "'");
    }
  }

  fedsdp::ExperimentConfig Parse() const {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const std::string& key : fedsdp::ConfigKeys()) {
      if (options.at(key)->count() > 0) overrides.emplace_back(key, values.at(key));
    }
    return fedsdp::ParseConfig(config_path, overrides, paper_profile);
  }
};

void PrintConfigBanner(const fedsdp::ExperimentConfig& config) {
  std::cout << "config digest: " << fedsdp::ConfigDigest(config)
            << "  seed: " << config.master_seed << '\n'
            << "noise policy: " << fedsdp::PolicyName(config.noise_policy) << '\n'
            << "privacy: " << fedsdp::DescribePrivacyRegime(config.dp()) << '\n';
}

int RunCommand(const fedsdp::ExperimentConfig& config, bool quiet) {
  PrintConfigBanner(config);
  const std::string dir =
      (std::filesystem::path(config.output_dir) / fedsdp::RunDirectoryName(config)).string();
  fedsdp::Simulation sim(config);
  const auto logs = sim.RunAll([quiet](const fedsdp::RoundLog& log) {
    if (quiet) return;
    std::printf("round %4d  acc %.4f  loss %.4f  sigma %.6g\n", log.round,
                log.global_accuracy, log.global_loss, log.total_sigma);
  });
  const fedsdp::RunSummary summary = fedsdp::WriteRunDirectory(config, logs, dir);
  if (!logs.empty()) {
    std::printf("best %.4f  final-%d %.4f +- %.4f  total noise %.6g\n",
                summary.best_accuracy, summary.final_k, summary.final5_mean,
                summary.final5_std, summary.total_noise);
  }
  std::cout << "wrote " << dir << '\n';
  return 0;
}

int CompareCommand(const fedsdp::ExperimentConfig& config, const std::string& policy_list) {
  std::vector<fedsdp::PolicyKind> policies;
  std::istringstream in(policy_list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (!name.empty()) policies.push_back(fedsdp::ParsePolicyKind(name));
  }
  PrintConfigBanner(config);
  const fedsdp::ComparisonReport report = fedsdp::RunCompare(config, policies, true);
  std::cout << report.FormatTable();
  std::cout << "wrote "
            << std::filesystem::path(report.entries.front().run_dir).parent_path().string()
            << '\n';
  return 0;
}

int GenDataCommand(const fedsdp::ExperimentConfig& config, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw fedsdp::IoError("cannot create '" + out_dir + "': " + ec.message());
  const fedsdp::Federation fed = fedsdp::BuildFederation(config);
  const std::filesystem::path base(out_dir);
  char name[64];
  for (std::size_t i = 0; i < fed.clients.size(); ++i) {
    const fedsdp::ClientDataBundle& b = fed.clients[i];
    std::snprintf(name, sizeof(name), "client_%03zu_private.csv", i);
    fedsdp::WriteCsv(b.private_train, (base / name).string());
    std::snprintf(name, sizeof(name), "client_%03zu_general.csv", i);
    fedsdp::WriteCsv(b.general_train, (base / name).string());
    std::snprintf(name, sizeof(name), "client_%03zu_validation.csv", i);
    fedsdp::WriteCsv(b.validation, (base / name).string());
  }
  fedsdp::WriteCsv(fed.test, (base / "test.csv").string());
  std::cout << "wrote " << fed.clients.size() << " clients to " << out_dir << '\n';
  return 0;
}

int BoundCommand(const fedsdp::ConvergenceConstants& c, int t_max) {
  const std::vector<double> series = fedsdp::BoundSeries(c, t_max);
  std::printf("t,bound\n");
  for (std::size_t t = 0; t < series.size(); ++t) {
    std::printf("%zu,%.17g\n", t, series[t]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated-learning simulator with Shapley-value driven DP noise"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run one simulation and write its metrics");
  ConfigFlags run_flags;
  run_flags.Register(run);
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "Do not print per-round progress");

  CLI::App* compare =
      app.add_subcommand("compare", "Run several noise policies on identical data");
  ConfigFlags compare_flags;
  compare_flags.Register(compare);
  std::string policies = "none,fedsdp,constant,time_varying,sensitivity";
  compare->add_option("--policies", policies, "Comma-separated policy list")
      ->capture_default_str();

  CLI::App* gen = app.add_subcommand("gen-data", "Write the synthetic federation as CSV files");
  ConfigFlags gen_flags;
  gen_flags.Register(gen);
  std::string gen_out = "data";
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  CLI::App* bound =
      app.add_subcommand("bound", "Print the convergence upper bound series as CSV");
  fedsdp::ConvergenceConstants constants;
  int t_max = 100;
  bound->add_option("--L", constants.smoothness, "Smoothness constant")->capture_default_str();
  bound->add_option("--rho", constants.weak_convexity, "Weak-convexity constant")
      ->capture_default_str();
  bound->add_option("--eta", constants.learning_rate, "Learning rate")->capture_default_str();
  bound->add_option("--E", constants.local_epochs, "Local epochs")->capture_default_str();
  bound->add_option("--G_c,--G-c", constants.gradient_bound, "Gradient-norm bound")
      ->capture_default_str();
  bound->add_option("--N_c,--N-c", constants.noise_bound, "Noise-norm bound")
      ->capture_default_str();
  bound->add_option("--phi", constants.activation_rate, "Activation rate")
      ->capture_default_str();
  bound->add_option("--K", constants.clients_per_round, "Clients per round")
      ->capture_default_str();
  bound->add_option("--d0", constants.initial_gap, "Initial squared distance to the optimum")
      ->capture_default_str();
  bound->add_option("--t_max,--t-max", t_max, "Last round of the series")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return RunCommand(run_flags.Parse(), quiet);
    if (*compare) return CompareCommand(compare_flags.Parse(), policies);
    if (*gen) return GenDataCommand(gen_flags.Parse(), gen_out);
    if (*bound) return BoundCommand(constants, t_max);
  } catch (const fedsdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
