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

#include "fedsdp/privacy_estimation.h"

#include "fedsdp/error.h"

namespace fedsdp {

ShapleyPair ShapleyTwoPlayer(const ContributionTriple& c) {
  return {0.5 * (c.c_full - c.c_general + c.c_private),
          0.5 * (c.c_full - c.c_private + c.c_general)};
}

double ContributionRatio(const ShapleyPair& s) {
  const double total = s.gamma_private + s.gamma_general;
  if (total == 0.0) {
    throw DegenerateContributionError(
        "gamma_private + gamma_general == 0; contribution ratio undefined");
  }
  return s.gamma_private / total;
}

RoundEstimate EstimateRound(const ClientDataBundle& bundle,
                            const ModelParams& global_params,
                            const TrainConfig& cfg, const Rng& rng) {
  if (bundle.general_train.empty()) {
    throw EmptyDataError("client has no general training data");
  }
  if (bundle.validation.empty()) {
    throw EmptyDataError("client has no validation data");
  }
  RoundEstimate out;
  Rng full_rng = rng.Substream(kFullModelStream);
  out.full_model = TrainLocal(global_params, bundle.FullTrain(), cfg, full_rng);
  out.contributions.c_full = Evaluate(out.full_model, bundle.validation);

  if (!bundle.private_train.empty()) {
    Rng private_rng = rng.Substream(kPrivateModelStream);
    const ModelParams private_model =
        TrainLocal(global_params, bundle.private_train, cfg, private_rng);
    out.contributions.c_private = Evaluate(private_model, bundle.validation);
  }

  Rng general_rng = rng.Substream(kGeneralModelStream);
  const ModelParams general_model =
      TrainLocal(global_params, bundle.general_train, cfg, general_rng);
  out.contributions.c_general = Evaluate(general_model, bundle.validation);
  return out;
}

}  // namespace fedsdp
