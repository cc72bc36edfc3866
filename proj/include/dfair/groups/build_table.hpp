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

#include <cstddef>

#include "dfair/core/error.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/model/classifier.hpp"

namespace dfair {

enum class TableSource { kLabels, kClassifierHard, kClassifierSoft };

inline OutcomeTable EmptyTableFor(const Dataset& data) {
  OutcomeTable table(data.space, data.n_outcomes);
  table.outcome_labels = data.schema.columns[data.schema.outcome_column()].values;
  return table;
}

// Soft counts from per-row predicted distributions (n x K):
// counts[s][y] = sum over rows in s of P(y|x).
inline OutcomeTable SoftCountTable(const Dataset& data, const Matrix& probs) {
  if (probs.rows() != data.n_rows() || probs.cols() != data.n_outcomes) {
    throw InvalidArgument("prediction matrix does not match dataset");
  }
  OutcomeTable table = EmptyTableFor(data);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    const std::size_t s = data.group_index[i];
    for (std::size_t y = 0; y < data.n_outcomes; ++y) {
      table.counts(s, y) += probs(i, y);
    }
    table.totals[s] += 1.0;
  }
  return table;
}

inline OutcomeTable HardCountTable(const Dataset& data,
                                   std::span<const int> classes) {
  OutcomeTable table = EmptyTableFor(data);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    table.Add(data.group_index[i], static_cast<std::size_t>(classes[i]), 1.0);
  }
  return table;
}

inline OutcomeTable BuildTable(const Dataset& data, TableSource source,
                               const Classifier* model = nullptr) {
  if (source == TableSource::kLabels) return HardCountTable(data, data.outcome);
  if (model == nullptr) {
    throw InvalidArgument("classifier-based table requires a model");
  }
  if (model->n_features() != data.n_features() ||
      model->n_outcomes() != data.n_outcomes) {
    throw InvalidArgument("model does not match dataset: model has " +
                          std::to_string(model->n_features()) + " features and " +
                          std::to_string(model->n_outcomes()) +
                          " outcomes, data has " +
                          std::to_string(data.n_features()) + " and " +
                          std::to_string(data.n_outcomes));
  }
  const Matrix probs = Forward(*model, data.features);
  if (source == TableSource::kClassifierSoft) return SoftCountTable(data, probs);
  return HardCountTable(data, PredictClasses(probs));
}

}  // namespace dfair
