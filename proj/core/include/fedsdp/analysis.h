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

#ifndef FEDSDP_ANALYSIS_H_
#define FEDSDP_ANALYSIS_H_

#include <vector>

namespace fedsdp {

// Constants of the noised-FedAvg convergence bound. Symbols follow the
// usual smooth, weakly convex setup.
struct ConvergenceConstants {
  double smoothness = 1.0;       // L
  double weak_convexity = 1.0;   // rho
  double learning_rate = 0.1;    // eta
  int local_epochs = 2;          // E
  double gradient_bound = 1.0;   // G_c
  double noise_bound = 0.0;      // N_c
  double activation_rate = 1.0;  // phi
  int clients_per_round = 1;     // K
  double initial_gap = 0.0;      // ||w_g^0 - w*||^2

  // Throws ConstraintError naming the violated inequality, e.g.
  // "eta < 1/(4L)".
  void Validate() const;
};

// U = 1 - eta * rho, the per-round contraction factor.
double ContractionFactor(const ConvergenceConstants& c);
// V = 2 L eta^2 E^2 G_c^2, the partial-participation drift.
double ParticipationDrift(const ConvergenceConstants& c);
// W = 6 L G_c^2 + 8 (E - 1)^2 G_c^2, the local-drift term.
double LocalDrift(const ConvergenceConstants& c);
// sum_{l=1}^{K} l L N_c^2 = L N_c^2 K (K + 1) / 2.
double NoiseTerm(const ConvergenceConstants& c);

// (L U^t / 2) d0 + (1 - phi) V + (1/rho^2)(1 - U) W + NoiseTerm.
double ConvergenceBound(const ConvergenceConstants& c, int round);

// ConvergenceBound at rounds 0..t_max inclusive.
std::vector<double> BoundSeries(const ConvergenceConstants& c, int t_max);

}  // namespace fedsdp

#endif  // FEDSDP_ANALYSIS_H_
