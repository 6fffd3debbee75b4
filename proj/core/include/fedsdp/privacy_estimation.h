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

#ifndef FEDSDP_PRIVACY_ESTIMATION_H_
#define FEDSDP_PRIVACY_ESTIMATION_H_

#include <cstdint>

#include "fedsdp/dataset.h"
#include "fedsdp/model.h"
#include "fedsdp/rng.h"

namespace fedsdp {

// Validation accuracies of the three per-round models: trained on the full
// local set, on the private subset only, and on the general subset only.
struct ContributionTriple {
  double c_full = 0.0;
  double c_private = 0.0;
  double c_general = 0.0;

  friend bool operator==(const ContributionTriple&, const ContributionTriple&) = default;
};

// Shapley values of the private and general attributes in the two-player
// game v({}) = 0, v({p}) = c_private, v({u}) = c_general,
// v({p, u}) = c_full. gamma_private + gamma_general == c_full.
struct ShapleyPair {
  double gamma_private = 0.0;
  double gamma_general = 0.0;
};

// Closed form of the two-player Shapley value:
//   gamma_private = (c_full - c_general + c_private) / 2
//   gamma_general = (c_full - c_private + c_general) / 2
ShapleyPair ShapleyTwoPlayer(const ContributionTriple& c);

// gamma_private / (gamma_private + gamma_general). Throws
// DegenerateContributionError when the denominator is zero.
double ContributionRatio(const ShapleyPair& s);

// Substream tags for the three contribution models. The full-data model is
// the one uploaded, so FedAvg reference loops replay kFullModelStream.
inline constexpr uint64_t kFullModelStream = 1;
inline constexpr uint64_t kPrivateModelStream = 2;
inline constexpr uint64_t kGeneralModelStream = 3;

struct RoundEstimate {
  ModelParams full_model;
  ContributionTriple contributions;
};

// Trains three models from `global_params` for cfg.local_epochs epochs (on
// private U general, private, general) and scores each on the bundle's
// validation split. An empty private split scores c_private = 0 without
// training. Throws EmptyDataError when general_train or validation is empty.
RoundEstimate EstimateRound(const ClientDataBundle& bundle,
                            const ModelParams& global_params,
                            const TrainConfig& cfg, const Rng& rng);

}  // namespace fedsdp

#endif  // FEDSDP_PRIVACY_ESTIMATION_H_
