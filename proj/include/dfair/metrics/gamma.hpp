//
// Copyright 2026 The dfair Authors
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
//

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/prob_table.hpp"

namespace dfair {

struct GammaResult {
  double gamma = 0.0;
  std::size_t worst = 0;           // index of the binding indicator
  std::vector<double> per_group;   // parallel to the collection
  std::vector<double> group_mass;  // P(g)
  std::vector<double> group_rate;  // P(y = pos | g), NaN when P(g) = 0
  std::vector<bool> zero_mass;
  double population_rate = 0.0;    // P(y = pos)
};

// Statistical parity subgroup fairness:
// gamma_g = |P(pos) - P(pos|g)| * P(g), gamma = max_g gamma_g.
inline GammaResult GammaSf(const ProbTable& probs, const SubgroupCollection& groups,
                           std::size_t positive) {
  if (!probs.has_weights()) throw InvalidArgument("gamma needs group weights P(s)");
  if (positive >= probs.n_outcomes) throw InvalidArgument("positive outcome out of range");
  GammaResult out;
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (probs.support[s]) {
      out.population_rate += probs.probs(s, positive) * probs.group_weights[s];
    }
  }
  const std::size_t G = groups.size();
  out.per_group.assign(G, 0.0);
  out.group_mass.assign(G, 0.0);
  out.group_rate.assign(G, NAN);
  out.zero_mass.assign(G, false);
  for (std::size_t g = 0; g < G; ++g) {
    const GroupIndicator& ind = groups.indicators[g];
    double mass = 0.0, pos = 0.0;
    for (std::size_t s = 0; s < probs.num_cells(); ++s) {
      if (!probs.support[s] || !ind.Contains(probs.space, s)) continue;
      mass += probs.group_weights[s];
      pos += probs.group_weights[s] * probs.probs(s, positive);
    }
    out.group_mass[g] = mass;
    if (!(mass > 0.0)) {
      out.zero_mass[g] = true;
      continue;
    }
    out.group_rate[g] = pos / mass;
    out.per_group[g] = std::abs(out.population_rate - pos / mass) * mass;
    if (out.per_group[g] > out.per_group[out.worst]) out.worst = g;
  }
  if (G > 0) out.gamma = out.per_group[out.worst];
  return out;
}

}  // namespace dfair
