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

#include "fedsdp/noise.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

template <typename T>
const T& Require(const std::optional<T>& field, const char* name,
                 std::string_view policy) {
  if (!field) {
    throw ConfigError(std::string(policy) + " policy requires '" + name +
                      "' in the round context");
  }
  return *field;
}

std::string Format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

}  // namespace

void DpParams::Validate() const {
  if (!(epsilon > 0.0)) throw ConfigError(Format("epsilon must be > 0, got %g", epsilon));
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError(Format("delta must lie in (0, 1), got %g", delta));
  }
  if (!(alpha > 0.0)) throw ConfigError(Format("alpha must be > 0, got %g", alpha));
  if (!(beta > 0.0)) throw ConfigError(Format("beta must be > 0, got %g", beta));
  if (!(clip_bound > 0.0)) {
    throw ConfigError(Format("clip_bound must be > 0, got %g", clip_bound));
  }
}

double ClampRatio(double ratio) {
  if (std::isnan(ratio)) return 1.0;
  return std::clamp(ratio, 0.0, 1.0);
}

double Sensitivity(double clip_bound, std::size_t dataset_size) {
  if (dataset_size == 0) throw ParameterError("dataset size must be >= 1");
  return 2.0 * clip_bound / static_cast<double>(dataset_size);
}

double PrivacyTolerance(double ratio, const DpParams& dp) {
  return ClampRatio(ratio) - dp.alpha * std::log(dp.delta);
}

double FedSdpSigma(double tolerance, const DpParams& dp,
                   std::size_t dataset_size) {
  return Sensitivity(dp.clip_bound, dataset_size) *
         std::sqrt(std::max(tolerance, dp.beta)) / dp.epsilon;
}

double ConstantSigma(const DpParams& dp, std::size_t dataset_size) {
  return FedSdpSigma(PrivacyTolerance(1.0, dp), dp, dataset_size);
}

double TimeVaryingScale(double decay, int total_rounds) {
  if (!(decay > 0.0 && decay < 1.0)) {
    throw ConfigError(Format("time_varying_decay must lie in (0, 1), got %g", decay));
  }
  if (total_rounds < 1) throw ConfigError("time-varying schedule needs >= 1 round");
  const double t = static_cast<double>(total_rounds);
  const double r2 = decay * decay;
  return std::sqrt(t * (1.0 - r2) / (1.0 - std::pow(r2, t)));
}

std::string_view PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kNone: return "none";
    case PolicyKind::kFedSdp: return "fedsdp";
    case PolicyKind::kConstant: return "constant";
    case PolicyKind::kTimeVarying: return "time_varying";
    case PolicyKind::kSensitivity: return "sensitivity";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(std::string_view name) {
  for (PolicyKind k : {PolicyKind::kNone, PolicyKind::kFedSdp, PolicyKind::kConstant,
                       PolicyKind::kTimeVarying, PolicyKind::kSensitivity}) {
    if (PolicyName(k) == name) return k;
  }
  throw ConfigError("unknown noise_policy '" + std::string(name) +
                    "' (expected none, fedsdp, constant, time_varying, sensitivity)");
}

double FedSdpPolicy::Sigma(const RoundContext& ctx) const {
  const DpParams& dp = Require(ctx.dp, "dp", name());
  const double ratio = Require(ctx.ratio, "ratio", name());
  return FedSdpSigma(PrivacyTolerance(ratio, dp), dp,
                     Require(ctx.dataset_size, "dataset_size", name()));
}

double ConstantDpPolicy::Sigma(const RoundContext& ctx) const {
  return ConstantSigma(Require(ctx.dp, "dp", name()),
                       Require(ctx.dataset_size, "dataset_size", name()));
}

TimeVaryingDpPolicy::TimeVaryingDpPolicy(double decay) : decay_(decay) {
  TimeVaryingScale(decay_, 1);  // validates decay
}

double TimeVaryingDpPolicy::Sigma(const RoundContext& ctx) const {
  const double base = ConstantSigma(Require(ctx.dp, "dp", name()),
                                    Require(ctx.dataset_size, "dataset_size", name()));
  const int round = Require(ctx.round, "round", name());
  const int total = Require(ctx.total_rounds, "total_rounds", name());
  return base * TimeVaryingScale(decay_, total) *
         std::pow(decay_, static_cast<double>(round));
}

double SensitivityDpPolicy::Sigma(const RoundContext& ctx) const {
  const DpParams& dp = Require(ctx.dp, "dp", name());
  const double delta_norm = Require(ctx.prev_delta_norm, "prev_delta_norm", name());
  const double scale = std::clamp(delta_norm / dp.clip_bound, kSensitivityMinScale,
                                  kSensitivityMaxScale);
  return ConstantSigma(dp, Require(ctx.dataset_size, "dataset_size", name())) * scale;
}

std::unique_ptr<NoisePolicy> MakePolicy(PolicyKind kind,
                                        const PolicyOptions& options) {
  switch (kind) {
    case PolicyKind::kNone: return std::make_unique<NoNoisePolicy>();
    case PolicyKind::kFedSdp: return std::make_unique<FedSdpPolicy>();
    case PolicyKind::kConstant: return std::make_unique<ConstantDpPolicy>();
    case PolicyKind::kTimeVarying:
      return std::make_unique<TimeVaryingDpPolicy>(options.time_varying_decay);
    case PolicyKind::kSensitivity: return std::make_unique<SensitivityDpPolicy>();
  }
  throw ConfigError("unknown policy kind");
}

ModelParams ProtectUpload(const ModelParams& params, double sigma,
                          double clip_bound, Rng& rng) {
  return AddGaussianNoise(Clip(params, clip_bound), sigma, rng);
}

std::string DescribePrivacyRegime(const DpParams& dp) {
  if (dp.alpha == 2.0) {
    return Format("alpha = 2: standard (epsilon, delta)-DP guarantee regime "
                  "(epsilon = %g, delta = %g)",
                  dp.epsilon, dp.delta);
  }
  if (dp.alpha > 2.0 / dp.delta) {
    return Format("alpha > 2/delta: (epsilon, e^beta * delta)-DP basic protection "
                  "regime (epsilon = %g, e^beta * delta = %g)",
                  dp.epsilon, std::exp(dp.beta) * dp.delta);
  }
  return Format("(epsilon, delta * alpha / 2)-DP regime (epsilon = %g, "
                "delta * alpha / 2 = %g)",
                dp.epsilon, dp.delta * dp.alpha / 2.0);
}

}  // namespace fedsdp
