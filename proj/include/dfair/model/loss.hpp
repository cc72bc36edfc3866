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
#include <utility>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/model/classifier.hpp"
#include "dfair/train/penalty.hpp"

namespace dfair {

struct ObjectiveEval {
  double cross_entropy = 0.0;
  double penalty_measure = 0.0;  // eps_soft / gamma_soft, 0 for kind none
  double penalty = 0.0;          // lambda * R
  double total = 0.0;
  std::vector<double> grad;
  Matrix probs;
};

// Mean cross-entropy plus lambda * R with the exact gradient of both terms.
inline ObjectiveEval EvaluateObjective(const Classifier& model, const Dataset& data,
                                       const PenaltySpec& penalty) {
  if (data.n_rows() == 0) throw InvalidArgument("objective needs a non-empty dataset");
  if (penalty.kind != PenaltyKind::kNone && data.n_protected() == 0) {
    throw InvalidArgument("penalty needs protected columns");
  }
  ForwardCache cache = ForwardWithCache(model, data.features);
  const std::size_t n = data.n_rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix dprobs(n, data.n_outcomes);
  ObjectiveEval out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = static_cast<std::size_t>(data.outcome[i]);
    const double p = cache.probs(i, y);
    if (p > kLogFloor) {
      out.cross_entropy -= std::log(p) * inv_n;
      dprobs(i, y) = -inv_n / p;
    } else {
      out.cross_entropy -= std::log(kLogFloor) * inv_n;
    }
  }
  out.total = out.cross_entropy;
  const bool active = penalty.kind != PenaltyKind::kNone && penalty.lambda != 0.0;
  if (active) {
    PenaltyEval r = EvaluatePenalty(cache.probs, data, penalty, true);
    out.penalty_measure = r.measure;
    out.penalty = penalty.lambda * r.value;
    out.total += out.penalty;
    for (std::size_t k = 0; k < dprobs.data().size(); ++k) {
      dprobs.data()[k] += penalty.lambda * r.grad.data()[k];
    }
  }
  out.grad = Backward(model, cache, dprobs);
  out.probs = std::move(cache.probs);
  return out;
}

inline std::pair<double, std::vector<double>> LossAndGrad(const Classifier& model,
                                                          const Dataset& data,
                                                          const PenaltySpec& penalty) {
  ObjectiveEval e = EvaluateObjective(model, data, penalty);
  return {e.total, std::move(e.grad)};
}

}  // namespace dfair
