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

#ifndef FEDSDP_NOISE_H_
#define FEDSDP_NOISE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fedsdp/model.h"
#include "fedsdp/rng.h"

namespace fedsdp {

struct DpParams {
  double epsilon = 0.2;
  double delta = 0.02;
  double alpha = 0.25;  // tolerance weight
  double beta = 0.1;    // tolerance floor
  double clip_bound = 20.0;

  // Throws ConfigError naming the violated bound.
  void Validate() const;
};

// Clamps a contribution ratio to [0, 1]; NaN maps to 1.
double ClampRatio(double ratio);

// Sensitivity of the clipped weight release, 2C / |D|.
double Sensitivity(double clip_bound, std::size_t dataset_size);

// T = clamp(R) - alpha * ln(delta).
double PrivacyTolerance(double ratio, const DpParams& dp);

// sigma = 2C * sqrt(max(T, beta)) / (epsilon * |D|).
double FedSdpSigma(double tolerance, const DpParams& dp, std::size_t dataset_size);

// The FedSDP noise scale with R pinned to 1, the largest it can get.
double ConstantSigma(const DpParams& dp, std::size_t dataset_size);

// Initial-scale factor s such that sum_{t<T} (s * decay^t)^2 == T, i.e. the
// geometric schedule carries the same squared noise mass as a constant one.
double TimeVaryingScale(double decay, int total_rounds);

// Clamp range of SensitivityDP's normalized delta.
inline constexpr double kSensitivityMinScale = 0.25;
inline constexpr double kSensitivityMaxScale = 1.0;

enum class PolicyKind { kNone, kFedSdp, kConstant, kTimeVarying, kSensitivity };

std::string_view PolicyName(PolicyKind kind);
// Accepts none, fedsdp, constant, time_varying, sensitivity.
PolicyKind ParsePolicyKind(std::string_view name);

// Everything a policy may read. Each policy requires a subset and throws
// ConfigError when a required field is missing.
struct RoundContext {
  std::optional<int> round;
  std::optional<int> total_rounds;
  std::optional<double> ratio;
  std::optional<DpParams> dp;
  std::optional<std::size_t> dataset_size;
  std::optional<double> prev_delta_norm;
};

class NoisePolicy {
 public:
  virtual ~NoisePolicy() = default;
  virtual PolicyKind kind() const = 0;
  // Per-coordinate noise standard deviation for one client upload; >= 0.
  virtual double Sigma(const RoundContext& ctx) const = 0;

  std::string_view name() const { return PolicyName(kind()); }
  // False only for the unprotected FedAvg baseline, which neither clips nor
  // perturbs uploads.
  bool protects() const { return kind() != PolicyKind::kNone; }
};

class NoNoisePolicy final : public NoisePolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kNone; }
  double Sigma(const RoundContext&) const override { return 0.0; }
};

// Shapley-ratio driven: PrivacyTolerance then FedSdpSigma.
class FedSdpPolicy final : public NoisePolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kFedSdp; }
  double Sigma(const RoundContext& ctx) const override;
};

// Worst-case constant noise (R = 1 every round).
class ConstantDpPolicy final : public NoisePolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kConstant; }
  double Sigma(const RoundContext& ctx) const override;
};

// Geometric decay sigma_0 * decay^t with sigma_0 chosen so the schedule has
// the constant policy's squared noise mass over total_rounds.
class TimeVaryingDpPolicy final : public NoisePolicy {
 public:
  // decay must lie in (0, 1).
  explicit TimeVaryingDpPolicy(double decay);
  PolicyKind kind() const override { return PolicyKind::kTimeVarying; }
  double Sigma(const RoundContext& ctx) const override;
  double decay() const { return decay_; }

 private:
  double decay_;
};

// Constant sigma scaled by prev_delta_norm / clip_bound, clamped to
// [0.25, 1].
class SensitivityDpPolicy final : public NoisePolicy {
 public:
  PolicyKind kind() const override { return PolicyKind::kSensitivity; }
  double Sigma(const RoundContext& ctx) const override;
};

struct PolicyOptions {
  double time_varying_decay = 0.99;
};

std::unique_ptr<NoisePolicy> MakePolicy(PolicyKind kind,
                                        const PolicyOptions& options = {});

inline double PolicySigma(const NoisePolicy& policy, const RoundContext& ctx) {
  return policy.Sigma(ctx);
}

// Clip to the C-ball, then add N(0, sigma^2) per coordinate.
ModelParams ProtectUpload(const ModelParams& params, double sigma,
                          double clip_bound, Rng& rng);

// One-line description of the (epsilon, delta) guarantee the tolerance
// weight alpha places the client in.
std::string DescribePrivacyRegime(const DpParams& dp);

}  // namespace fedsdp

#endif  // FEDSDP_NOISE_H_
