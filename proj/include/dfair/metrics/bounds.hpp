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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/prob_table.hpp"

namespace dfair {

// -log 0.8: an epsilon restricted to the favorable outcome at or below this
// value is exactly the 80% rule.
inline const double kEightyPercentEpsilon = -std::log(0.8);

struct EightyPercentResult {
  bool pass = false;
  double worst_ratio = 0.0;  // min over supported pairs of P(pos|s_i)/P(pos|s_j)
};

// The boundary is inclusive. Ratios are compared with a relative slack of
// 1e-12 so that e.g. 0.64 / 0.8, which rounds below 0.8, still passes.
inline EightyPercentResult EightyPercentRule(const ProbTable& probs, std::size_t positive) {
  if (probs.num_supported() < 2) throw DomainError("80% rule needs >= 2 supported cells");
  if (positive >= probs.n_outcomes) throw InvalidArgument("positive outcome out of range");
  double hi = -1.0, lo = 2.0;
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (!probs.support[s]) continue;
    hi = std::max(hi, probs.probs(s, positive));
    lo = std::min(lo, probs.probs(s, positive));
  }
  EightyPercentResult out;
  out.worst_ratio = lo > 0.0 ? lo / hi : 0.0;
  out.pass = out.worst_ratio >= 0.8 * (1.0 - 1e-12);
  return out;
}

// Epsilon restricted to one outcome: log max_s P(y|s) - log min_s P(y|s).
inline double EpsilonForOutcome(const ProbTable& probs, std::size_t y) {
  double hi = -1.0, lo = 2.0;
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (!probs.support[s]) continue;
    hi = std::max(hi, probs.probs(s, y));
    lo = std::min(lo, probs.probs(s, y));
  }
  return AbsLogRatio(hi, lo);
}

struct PrivacyCheck {
  bool pass = false;
  double max_violation = 0.0;  // max(0, |log posterior ratio - log prior ratio| - eps)
  double epsilon = 0.0;
  std::vector<std::size_t> skipped_outcomes;  // P(y) = 0
};

// Bayes-rule posterior odds between any two groups after observing an
// outcome stay within e^{+-eps} of the prior odds.
inline PrivacyCheck CheckPrivacyBound(const ProbTable& probs, std::span<const double> prior) {
  if (prior.size() != probs.num_cells()) throw InvalidArgument("prior has the wrong length");
  PrivacyCheck out;
  out.epsilon = EpsilonDf(probs).epsilon;
  std::vector<std::size_t> cells;
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (!probs.support[s]) continue;
    if (!(prior[s] > 0.0)) throw InvalidArgument("prior must be positive on supported cells");
    cells.push_back(s);
  }
  std::vector<double> posterior(probs.num_cells(), 0.0);
  for (std::size_t y = 0; y < probs.n_outcomes; ++y) {
    double evidence = 0.0;
    for (std::size_t s : cells) evidence += probs.probs(s, y) * prior[s];
    if (!(evidence > 0.0)) {
      out.skipped_outcomes.push_back(y);
      continue;
    }
    for (std::size_t s : cells) posterior[s] = probs.probs(s, y) * prior[s] / evidence;
    for (std::size_t i : cells) {
      for (std::size_t j : cells) {
        if (i == j) continue;
        if (posterior[i] == 0.0 || posterior[j] == 0.0) {
          // Only reachable with an unbounded epsilon.
          if (std::isfinite(out.epsilon) && posterior[i] != posterior[j]) {
            out.max_violation = kInfinity;
          }
          continue;
        }
        const double shift = std::log(posterior[i] / posterior[j]) -
                             std::log(prior[i] / prior[j]);
        out.max_violation = std::max(out.max_violation, std::abs(shift) - out.epsilon);
      }
    }
  }
  out.max_violation = std::max(out.max_violation, 0.0);
  out.pass = out.max_violation <= 1e-9;
  return out;
}

struct UtilityCheck {
  bool pass = false;
  double max_ratio = 1.0;  // max over supported pairs of E[u|s_i] / E[u|s_j]
  double epsilon = 0.0;
  bool unbounded = false;  // some E[u|s_j] = 0 < E[u|s_i]
};

// Expected utility under any non-negative utility differs between groups by
// at most a factor e^eps.
inline UtilityCheck CheckUtilityBound(const ProbTable& probs, std::span<const double> utility) {
  if (utility.size() != probs.n_outcomes) throw InvalidArgument("utility has the wrong length");
  bool any = false;
  for (double u : utility) {
    if (!(u >= 0.0)) throw InvalidArgument("utilities must be non-negative");
    any |= u > 0.0;
  }
  if (!any) throw InvalidArgument("utilities must not all be zero");
  UtilityCheck out;
  out.epsilon = EpsilonDf(probs).epsilon;
  double hi = -1.0, lo = kInfinity;
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (!probs.support[s]) continue;
    double e = 0.0;
    for (std::size_t y = 0; y < probs.n_outcomes; ++y) e += utility[y] * probs.probs(s, y);
    hi = std::max(hi, e);
    lo = std::min(lo, e);
  }
  if (lo == 0.0 && hi > 0.0) {
    out.unbounded = true;
    out.max_ratio = kInfinity;
  } else if (hi > 0.0) {
    out.max_ratio = hi / lo;
  }
  out.pass = out.max_ratio <= std::exp(out.epsilon) * (1.0 + 1e-9);
  return out;
}

}  // namespace dfair
