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

#include "fedsdp/analysis.h"

#include <cmath>
#include <string>

#include "fedsdp/error.h"

namespace fedsdp {

void ConvergenceConstants::Validate() const {
  auto fail = [](const std::string& what) {
    throw ConstraintError("convergence bound precondition violated: " + what);
  };
  if (!(smoothness > 0.0)) fail("L > 0");
  if (!(weak_convexity > 0.0)) fail("rho > 0");
  if (!(learning_rate > 0.0)) fail("eta > 0");
  if (!(learning_rate < 1.0 / (4.0 * smoothness))) fail("eta < 1/(4L)");
  const double u = 1.0 - learning_rate * weak_convexity;
  if (!(u > 0.0 && u < 1.0)) fail("0 < 1 - eta*rho < 1");
  if (local_epochs < 1) fail("E >= 1");
  if (!(gradient_bound > 0.0)) fail("G_c > 0");
  if (!(noise_bound >= 0.0)) fail("N_c >= 0");
  if (!(activation_rate > 0.0 && activation_rate <= 1.0)) fail("0 < phi <= 1");
  if (clients_per_round < 1) fail("K >= 1");
  if (!(initial_gap >= 0.0)) fail("d0 >= 0");
}

double ContractionFactor(const ConvergenceConstants& c) {
  return 1.0 - c.learning_rate * c.weak_convexity;
}

double ParticipationDrift(const ConvergenceConstants& c) {
  const double e = c.local_epochs;
  return 2.0 * c.smoothness * c.learning_rate * c.learning_rate * e * e *
         c.gradient_bound * c.gradient_bound;
}

double LocalDrift(const ConvergenceConstants& c) {
  const double g2 = c.gradient_bound * c.gradient_bound;
  const double em1 = c.local_epochs - 1.0;
  return 6.0 * c.smoothness * g2 + 8.0 * em1 * em1 * g2;
}

double NoiseTerm(const ConvergenceConstants& c) {
  const double k = c.clients_per_round;
  return c.smoothness * c.noise_bound * c.noise_bound * k * (k + 1.0) / 2.0;
}

double ConvergenceBound(const ConvergenceConstants& c, int round) {
  c.Validate();
  if (round < 0) throw ConstraintError("round index must be >= 0");
  const double u = ContractionFactor(c);
  const double rho2 = c.weak_convexity * c.weak_convexity;
  return c.smoothness * std::pow(u, round) / 2.0 * c.initial_gap +
         (1.0 - c.activation_rate) * ParticipationDrift(c) +
         (1.0 - u) * LocalDrift(c) / rho2 + NoiseTerm(c);
}

std::vector<double> BoundSeries(const ConvergenceConstants& c, int t_max) {
  c.Validate();
  if (t_max < 0) throw ConstraintError("t_max must be >= 0");
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(t_max) + 1);
  for (int t = 0; t <= t_max; ++t) series.push_back(ConvergenceBound(c, t));
  return series;
}

}  // namespace fedsdp
