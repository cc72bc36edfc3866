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
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/prob_table.hpp"

namespace dfair {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// |log a - log b| for probabilities, with 0 vs 0 treated as equal and
// 0 vs positive as an unbounded ratio.
inline double AbsLogRatio(double a, double b) {
  if (a == b) return 0.0;
  if (a <= 0.0 || b <= 0.0) return kInfinity;
  return std::abs(std::log(a) - std::log(b));
}

struct EpsilonResult {
  double epsilon = 0.0;
  // Binding outcome and cell pair: P(y|cell_max) / P(y|cell_min) = e^epsilon.
  std::size_t outcome = 0;
  std::size_t cell_max = 0;
  std::size_t cell_min = 0;

  bool finite() const { return std::isfinite(epsilon); }
};

namespace internal {

inline void RequireTwoSupported(const ProbTable& probs) {
  if (probs.num_supported() < 2) {
    throw DomainError("epsilon needs at least 2 supported cells, found " +
                      std::to_string(probs.num_supported()));
  }
}

}  // namespace internal

// Smallest epsilon with e^-eps <= P(y|s_i)/P(y|s_j) <= e^eps over all
// outcomes and supported cell pairs, computed per outcome as
// log max_s P(y|s) - log min_s P(y|s). Ties resolve to the lowest outcome and
// cell index.
inline EpsilonResult EpsilonDf(const ProbTable& probs) {
  internal::RequireTwoSupported(probs);
  EpsilonResult best;
  bool first = true;
  for (std::size_t y = 0; y < probs.n_outcomes; ++y) {
    std::size_t hi = 0, lo = 0;
    bool seen = false;
    for (std::size_t s = 0; s < probs.num_cells(); ++s) {
      if (!probs.support[s]) continue;
      if (!seen) {
        hi = lo = s;
        seen = true;
        continue;
      }
      if (probs.probs(s, y) > probs.probs(hi, y)) hi = s;
      if (probs.probs(s, y) < probs.probs(lo, y)) lo = s;
    }
    const double e = AbsLogRatio(probs.probs(hi, y), probs.probs(lo, y));
    if (first || e > best.epsilon) {
      best = {e, y, hi, lo};
      first = false;
    }
  }
  return best;
}

// Per supported cell s: max over outcomes and supported s' of
// |log P(y|s) - log P(y|s')|. The maximum over cells equals EpsilonDf.
inline std::map<std::size_t, double> EpsilonPerGroup(const ProbTable& probs) {
  internal::RequireTwoSupported(probs);
  const std::size_t K = probs.n_outcomes;
  std::vector<double> hi(K, -1.0), lo(K, 2.0);
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (!probs.support[s]) continue;
    for (std::size_t y = 0; y < K; ++y) {
      hi[y] = std::max(hi[y], probs.probs(s, y));
      lo[y] = std::min(lo[y], probs.probs(s, y));
    }
  }
  std::map<std::size_t, double> out;
  for (std::size_t s = 0; s < probs.num_cells(); ++s) {
    if (!probs.support[s]) continue;
    double e = 0.0;
    for (std::size_t y = 0; y < K; ++y) {
      const double p = probs.probs(s, y);
      e = std::max({e, AbsLogRatio(p, hi[y]), AbsLogRatio(p, lo[y])});
    }
    out[s] = e;
  }
  return out;
}

// Per-group epsilon of one group given as a distribution `p` over outcomes,
// measured against every supported cell of `reference`.
inline double EpsilonAgainst(std::span<const double> p, const ProbTable& reference) {
  double e = 0.0;
  for (std::size_t s = 0; s < reference.num_cells(); ++s) {
    if (!reference.support[s]) continue;
    for (std::size_t y = 0; y < reference.n_outcomes; ++y) {
      e = std::max(e, AbsLogRatio(p[y], reference.probs(s, y)));
    }
  }
  return e;
}

struct BiasAmplification {
  double value = 0.0;
  bool defined = true;  // false when an input is infinite
};

// eps_mechanism - eps_data; negative when the mechanism is fairer than the
// data it was trained on.
inline BiasAmplification BiasAmplificationOf(double eps_mechanism, double eps_data) {
  if (!std::isfinite(eps_mechanism) || !std::isfinite(eps_data)) {
    const double v = eps_mechanism - eps_data;
    return {v, false};
  }
  return {eps_mechanism - eps_data, true};
}

struct Stratum {
  std::string label;
  OutcomeTable table;
};

struct DfcResult {
  double epsilon = 0.0;
  std::vector<std::pair<std::string, double>> per_stratum;
  std::vector<std::string> skipped;  // strata with < 2 supported cells
};

// Differential fairness with confounders: epsilon within each stratum, the
// worst stratum governing.
inline DfcResult EpsilonDfc(std::span<const Stratum> strata, const EstimatorSpec& spec) {
  if (strata.empty()) throw InvalidArgument("DFC needs at least one stratum");
  DfcResult out;
  bool any = false;
  for (const Stratum& st : strata) {
    const ProbTable probs = TableToProbs(st.table, spec);
    if (probs.num_supported() < 2) {
      out.skipped.push_back(st.label);
      continue;
    }
    const double e = EpsilonDf(probs).epsilon;
    out.per_stratum.emplace_back(st.label, e);
    out.epsilon = any ? std::max(out.epsilon, e) : e;
    any = true;
  }
  if (!any) throw DomainError("no stratum has at least 2 supported cells");
  return out;
}

struct ConfounderCheck {
  bool pass = false;
  double pooled_epsilon = 0.0;
  double dfc_epsilon = 0.0;
};

// Mixes strata by P(y|s) = sum_c P(y|s,c) P(c|s) and verifies that the pooled
// epsilon does not exceed the DFC epsilon. `stratum_weights` is cells x C
// holding P(c|s); rows of cells absent from the population are all zero.
inline ConfounderCheck CheckConfounderTheorem(std::span<const Stratum> strata,
                                              const Matrix& stratum_weights,
                                              const EstimatorSpec& spec = {}) {
  if (strata.empty()) throw InvalidArgument("need at least one stratum");
  const GroupSpace& space = strata.front().table.space;
  const std::size_t K = strata.front().table.n_outcomes;
  if (stratum_weights.rows() != space.num_cells() ||
      stratum_weights.cols() != strata.size()) {
    throw InvalidArgument("stratum weight matrix must be cells x strata");
  }
  std::vector<ProbTable> per;
  for (const Stratum& st : strata) {
    if (!(st.table.space == space) || st.table.n_outcomes != K) {
      throw InvalidArgument("strata must share group space and outcomes");
    }
    per.push_back(TableToProbs(st.table, spec));
  }
  Matrix pooled(space.num_cells(), K);
  std::vector<bool> support(space.num_cells(), false);
  for (std::size_t s = 0; s < space.num_cells(); ++s) {
    double row = 0.0;
    for (std::size_t c = 0; c < strata.size(); ++c) {
      const double w = stratum_weights(s, c);
      if (!(w >= 0.0)) throw InvalidArgument("inconsistent weights: negative P(c|s)");
      if (w == 0.0) continue;
      if (!per[c].support[s]) {
        throw InvalidArgument("inconsistent weights: P(c|s) > 0 for a cell "
                              "absent from stratum '" + strata[c].label + "'");
      }
      row += w;
      for (std::size_t y = 0; y < K; ++y) pooled(s, y) += w * per[c].probs(s, y);
    }
    if (row == 0.0) {
      for (std::size_t y = 0; y < K; ++y) pooled(s, y) = 1.0 / static_cast<double>(K);
      continue;
    }
    if (std::abs(row - 1.0) > 1e-9) {
      throw InvalidArgument("inconsistent weights: P(c|s) row does not sum to 1");
    }
    support[s] = true;
  }
  ProbTable mixed;
  mixed.space = space;
  mixed.n_outcomes = K;
  mixed.probs = std::move(pooled);
  mixed.support = std::move(support);

  ConfounderCheck out;
  out.dfc_epsilon = EpsilonDfc(strata, spec).epsilon;
  out.pooled_epsilon = EpsilonDf(mixed).epsilon;
  out.pass = out.pooled_epsilon <= out.dfc_epsilon + 1e-9;
  return out;
}

}  // namespace dfair
