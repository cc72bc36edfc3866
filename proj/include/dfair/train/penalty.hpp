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
#include <string>

#include "dfair/core/error.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/groups/build_table.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/gamma.hpp"
#include "dfair/metrics/prob_table.hpp"
#include "dfair/model/classifier.hpp"

namespace dfair {

enum class PenaltyKind { kNone, kDf, kSf };

inline const char* ToString(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kNone: return "none";
    case PenaltyKind::kDf: return "df";
    case PenaltyKind::kSf: return "sf";
  }
  return "?";
}

// R = max(0, eps_soft - target) for df, max(0, gamma_soft - target) for sf.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::kNone;
  double target = 0.0;
  double lambda = 0.0;
  double alpha = 1.0;             // soft-count smoothing (df)
  std::size_t positive_outcome = 1;  // sf
  SubgroupMode sf_groups = SubgroupMode::kAllLevels;

  static PenaltySpec None() { return {}; }
  static PenaltySpec Df(double target, double lambda = 0.1, double alpha = 1.0) {
    return {PenaltyKind::kDf, target, lambda, alpha, 1, SubgroupMode::kAllLevels};
  }
  static PenaltySpec Sf(double target, double lambda = 1.0, std::size_t positive = 1) {
    return {PenaltyKind::kSf, target, lambda, 1.0, positive, SubgroupMode::kAllLevels};
  }

  void Validate() const {
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
    if (!(target >= 0.0)) throw InvalidArgument("penalty target must be >= 0");
    if (kind == PenaltyKind::kDf && !(alpha > 0.0)) {
      throw InvalidArgument("soft-count smoothing alpha must be > 0");
    }
  }
};

// Clamp used inside every log of the training objective.
inline constexpr double kLogFloor = 1e-12;

struct PenaltyEval {
  double measure = 0.0;  // eps_soft or gamma_soft
  double value = 0.0;    // hinge R
  Matrix grad;           // dR / dP(y|x_i), n x K; empty unless requested
};

// Soft-count epsilon of predictions `probs` on `data` and, optionally, its
// gradient with respect to every prediction. The active branch of the max is
// the EpsilonDf witness (lowest index on ties).
inline PenaltyEval SoftEpsilon(const Matrix& probs, const Dataset& data, double alpha,
                               double target, bool with_grad) {
  const OutcomeTable table = SoftCountTable(data, probs);
  const ProbTable smoothed = TableToProbs(table, EstimatorSpec::SoftSmoothed(alpha));
  if (smoothed.num_supported() < 2) {
    throw DomainError("df penalty needs at least 2 non-empty intersectional cells");
  }
  const EpsilonResult eps = EpsilonDf(smoothed);
  const double q_hi = std::max(smoothed.probs(eps.cell_max, eps.outcome), kLogFloor);
  const double q_lo = std::max(smoothed.probs(eps.cell_min, eps.outcome), kLogFloor);
  PenaltyEval out;
  out.measure = std::log(q_hi) - std::log(q_lo);
  out.value = std::max(0.0, out.measure - target);
  if (!with_grad) return out;
  out.grad = Matrix(probs.rows(), probs.cols());
  if (!(out.measure - target > 0.0) || eps.cell_max == eps.cell_min) return out;
  const double K = static_cast<double>(data.n_outcomes);
  const double d_hi = 1.0 / (q_hi * (table.totals[eps.cell_max] + K * alpha));
  const double d_lo = -1.0 / (q_lo * (table.totals[eps.cell_min] + K * alpha));
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    const std::size_t s = data.group_index[i];
    if (s == eps.cell_max) out.grad(i, eps.outcome) += d_hi;
    if (s == eps.cell_min) out.grad(i, eps.outcome) += d_lo;
  }
  return out;
}

// Soft-count gamma over the given collection:
// gamma_g = |N_g S / N - S_g| / N with S, S_g sums of P(pos|x).
inline PenaltyEval SoftGamma(const Matrix& probs, const Dataset& data,
                             const SubgroupCollection& groups, std::size_t positive,
                             double target, bool with_grad) {
  const OutcomeTable table = SoftCountTable(data, probs);
  const ProbTable rates = TableToProbs(table, EstimatorSpec::Empirical());
  const GammaResult gamma = GammaSf(rates, groups, positive);
  PenaltyEval out;
  out.measure = gamma.gamma;
  out.value = std::max(0.0, out.measure - target);
  if (!with_grad) return out;
  out.grad = Matrix(probs.rows(), probs.cols());
  if (!(out.measure - target > 0.0) || groups.size() == 0) return out;
  const std::size_t g = gamma.worst;
  const double diff = gamma.population_rate - gamma.group_rate[g];
  if (diff == 0.0) return out;
  const double sign = diff > 0.0 ? 1.0 : -1.0;
  const double n = static_cast<double>(data.n_rows());
  const double mass = gamma.group_mass[g];
  const GroupIndicator& ind = groups.indicators[g];
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    const bool member = ind.Contains(data.space, data.group_index[i]);
    out.grad(i, positive) = sign * (mass / n - (member ? 1.0 / n : 0.0));
  }
  return out;
}

inline PenaltyEval EvaluatePenalty(const Matrix& probs, const Dataset& data,
                                   const PenaltySpec& spec, bool with_grad) {
  spec.Validate();
  switch (spec.kind) {
    case PenaltyKind::kNone: {
      PenaltyEval out;
      if (with_grad) out.grad = Matrix(probs.rows(), probs.cols());
      return out;
    }
    case PenaltyKind::kDf:
      return SoftEpsilon(probs, data, spec.alpha, spec.target, with_grad);
    case PenaltyKind::kSf:
      if (spec.positive_outcome >= data.n_outcomes) {
        throw InvalidArgument("sf positive outcome out of range");
      }
      return SoftGamma(probs, data, EnumerateSubgroups(data.space, spec.sf_groups),
                       spec.positive_outcome, spec.target, with_grad);
  }
  return {};
}

// The hinge R for the model's current predictions on `data` (unweighted).
inline double PenaltyValue(const Classifier& model, const Dataset& data,
                           const PenaltySpec& spec) {
  if (data.n_protected() == 0) throw InvalidArgument("penalty needs protected columns");
  return EvaluatePenalty(Forward(model, data.features), data, spec, false).value;
}

}  // namespace dfair
