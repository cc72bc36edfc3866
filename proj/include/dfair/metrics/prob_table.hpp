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
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/groups/group_space.hpp"
#include "dfair/groups/outcome_table.hpp"

namespace dfair {

enum class EstimatorKind { kEmpirical, kSmoothed, kSoftSmoothed };

inline const char* ToString(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kEmpirical: return "empirical";
    case EstimatorKind::kSmoothed: return "smoothed";
    case EstimatorKind::kSoftSmoothed: return "soft_smoothed";
  }
  return "?";
}

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kEmpirical;
  double alpha = 1.0;  // symmetric Dirichlet concentration per outcome

  static EstimatorSpec Empirical() { return {}; }
  static EstimatorSpec Smoothed(double alpha = 1.0) {
    return {EstimatorKind::kSmoothed, alpha};
  }
  static EstimatorSpec SoftSmoothed(double alpha = 1.0) {
    return {EstimatorKind::kSoftSmoothed, alpha};
  }

  bool smoothed() const { return kind != EstimatorKind::kEmpirical; }

  void Validate() const {
    if (smoothed() && !(alpha > 0.0)) {
      throw InvalidArgument("smoothed estimators need alpha > 0");
    }
  }
};

// P(y|s) per cell, with support flags P(s) > 0 and optional P(s).
struct ProbTable {
  GroupSpace space;
  std::size_t n_outcomes = 0;
  Matrix probs;                      // cells x K
  std::vector<bool> support;         // P(s) > 0
  std::vector<double> group_weights; // P(s); empty when unknown

  std::size_t num_cells() const { return space.num_cells(); }
  bool has_weights() const { return !group_weights.empty(); }

  std::size_t num_supported() const {
    std::size_t n = 0;
    for (bool b : support) n += b;
    return n;
  }

  void Validate() const {
    if (probs.rows() != num_cells() || probs.cols() != n_outcomes ||
        support.size() != num_cells()) {
      throw InvalidArgument("probability table shape mismatch");
    }
    for (std::size_t s = 0; s < num_cells(); ++s) {
      if (!support[s]) continue;
      double sum = 0.0;
      for (std::size_t y = 0; y < n_outcomes; ++y) {
        const double p = probs(s, y);
        if (!(p >= 0.0 && p <= 1.0)) {
          throw InvalidArgument("probability outside [0, 1]");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidArgument("probability row does not sum to 1");
      }
    }
    if (has_weights()) {
      if (group_weights.size() != num_cells()) {
        throw InvalidArgument("group weight vector has the wrong length");
      }
      double total = 0.0;
      for (double w : group_weights) {
        if (!(w >= 0.0)) throw InvalidArgument("negative group weight");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("group weights do not sum to 1");
      }
    }
  }
};

// Builds a ProbTable directly from per-cell probabilities; every listed cell
// is supported. `weights` may be empty.
inline ProbTable MakeProbTable(GroupSpace space, const Matrix& probs,
                               std::vector<double> weights = {}) {
  ProbTable t;
  t.n_outcomes = probs.cols();
  t.probs = probs;
  t.support.assign(space.num_cells(), true);
  t.space = std::move(space);
  t.group_weights = std::move(weights);
  if (t.has_weights()) {
    for (std::size_t s = 0; s < t.num_cells(); ++s) {
      t.support[s] = t.group_weights[s] > 0.0;
    }
  }
  t.Validate();
  return t;
}

// Empirical: N_{y,s} / N_s. Smoothed (hard or soft counts alike):
// (N_{y,s} + alpha) / (N_s + K alpha). Cells with N_s = 0 are unsupported in
// every case; the soft_smoothed kind just records that the counts are soft.
inline ProbTable TableToProbs(const OutcomeTable& table, const EstimatorSpec& spec) {
  spec.Validate();
  table.Validate();
  const std::size_t K = table.n_outcomes;
  ProbTable out;
  out.space = table.space;
  out.n_outcomes = K;
  out.probs = Matrix(table.num_cells(), K);
  out.support.assign(table.num_cells(), false);
  out.group_weights.assign(table.num_cells(), 0.0);
  const double grand = table.grand_total();
  const double a = spec.smoothed() ? spec.alpha : 0.0;
  for (std::size_t s = 0; s < table.num_cells(); ++s) {
    const double n = table.totals[s];
    if (grand > 0.0) out.group_weights[s] = n / grand;
    if (table.is_empty(s)) {
      // Unsupported rows still hold the prior, which keeps them valid.
      for (std::size_t y = 0; y < K; ++y) out.probs(s, y) = 1.0 / static_cast<double>(K);
      continue;
    }
    out.support[s] = true;
    for (std::size_t y = 0; y < K; ++y) {
      out.probs(s, y) = (table.counts(s, y) + a) / (n + static_cast<double>(K) * a);
    }
  }
  if (!(grand > 0.0)) out.group_weights.clear();
  return out;
}

// Mixture over the marginalized attributes:
// P(y|d) = sum_e P(y|e,d) P(e|d), with P(e|d) from the group weights.
inline ProbTable ProjectProbs(const ProbTable& table,
                              std::span<const std::size_t> keep) {
  if (!table.has_weights()) {
    throw InvalidArgument("projecting probabilities needs group weights");
  }
  ProbTable out;
  out.space = table.space.Subspace(keep);
  out.n_outcomes = table.n_outcomes;
  out.probs = Matrix(out.space.num_cells(), table.n_outcomes);
  out.support.assign(out.space.num_cells(), false);
  out.group_weights.assign(out.space.num_cells(), 0.0);
  for (std::size_t s = 0; s < table.num_cells(); ++s) {
    if (!table.support[s]) continue;
    const double w = table.group_weights[s];
    const std::size_t d = table.space.ProjectCell(s, out.space, keep);
    out.group_weights[d] += w;
    for (std::size_t y = 0; y < table.n_outcomes; ++y) {
      out.probs(d, y) += w * table.probs(s, y);
    }
  }
  for (std::size_t d = 0; d < out.num_cells(); ++d) {
    if (out.group_weights[d] > 0.0) {
      out.support[d] = true;
      for (std::size_t y = 0; y < out.n_outcomes; ++y) {
        out.probs(d, y) /= out.group_weights[d];
      }
    } else {
      for (std::size_t y = 0; y < out.n_outcomes; ++y) {
        out.probs(d, y) = 1.0 / static_cast<double>(out.n_outcomes);
      }
    }
  }
  return out;
}

}  // namespace dfair
