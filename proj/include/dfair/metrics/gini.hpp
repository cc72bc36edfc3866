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
#include <span>

#include "dfair/core/error.hpp"

namespace dfair {

struct GiniResult {
  double value = 0.0;
  bool degenerate = false;  // mean was zero; value defined as 0
};

// Population-weighted Gini coefficient of per-group fairness values:
// G = 1/(2 mu) sum_i sum_j P_i P_j |F_i - F_j|, mu = sum_i F_i P_i.
inline GiniResult Gini(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw InvalidArgument("gini: values and weights differ in length");
  }
  double total = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw InvalidArgument("gini: negative weight");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw DomainError("gini: per-group values must be finite and >= 0");
    }
    total += weights[i];
    mu += values[i] * weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("gini: weights must sum to 1");
  if (!(mu > 0.0)) return {0.0, true};
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      acc += weights[i] * weights[j] * std::abs(values[i] - values[j]);
    }
  }
  return {acc / (2.0 * mu), false};
}

}  // namespace dfair
