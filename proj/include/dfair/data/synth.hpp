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
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/random.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/data/schema.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/prob_table.hpp"

namespace dfair::synth {

// --- Gaussian hiring -------------------------------------------------------
// Group 1 or 2 with probability 1/2, score ~ N(mu_g, sigma), hired iff
// score >= threshold.

inline Schema GaussianHiringSchema() {
  Schema s;
  s.columns = {{"group", ColumnKind::kProtected, {"1", "2"}, {}, true},
               {"score", ColumnKind::kContinuous, {}, {}, true},
               {"hired", ColumnKind::kOutcome, {"no", "yes"}, {}, true}};
  s.outcome_positive_label = "yes";
  return s;
}

// Population P(hired | group) in closed form; rows (no, yes), equal weights.
inline ProbTable GaussianHiringProbs(double mu1, double mu2, double sigma, double threshold) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  auto upper_tail = [&](double mu) {
    return 0.5 * std::erfc((threshold - mu) / (sigma * std::numbers::sqrt2));
  };
  Matrix probs(2, 2);
  const double mus[2] = {mu1, mu2};
  for (std::size_t g = 0; g < 2; ++g) {
    const double yes = upper_tail(mus[g]);
    probs(g, 1) = yes;
    probs(g, 0) = 1.0 - yes;
  }
  return MakeProbTable(GroupSpaceFor(GaussianHiringSchema()), probs, {0.5, 0.5});
}

inline Dataset GaussianHiring(double mu1, double mu2, double sigma, double threshold,
                              std::size_t n, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (n == 0) throw InvalidArgument("n must be positive");
  Rng rng(seed);
  std::vector<ColumnData> cols(3);
  for (std::size_t i = 0; i < n; ++i) {
    const int g = rng.Bernoulli(0.5) ? 1 : 0;
    const double score = rng.Normal(g == 0 ? mu1 : mu2, sigma);
    cols[0].codes.push_back(g);
    cols[1].values.push_back(score);
    cols[2].codes.push_back(score >= threshold ? 1 : 0);
  }
  return Encode(GaussianHiringSchema(), std::move(cols));
}

// --- University admissions (Simpson's reversal) ----------------------------

inline Schema SimpsonsSchema() {
  Schema s;
  s.columns = {{"gender", ColumnKind::kProtected, {"A", "B"}, {}, true},
               {"race", ColumnKind::kProtected, {"1", "2"}, {}, true},
               {"admitted", ColumnKind::kOutcome, {"no", "yes"}, {}, true}};
  s.outcome_positive_label = "yes";
  return s;
}

struct AdmissionCell {
  int gender;  // 0 = A, 1 = B
  int race;    // 0 = race 1, 1 = race 2
  int admitted;
  int total;
};

inline constexpr AdmissionCell kAdmissions[] = {
    {0, 0, 81, 87}, {1, 0, 234, 270}, {0, 1, 192, 263}, {1, 1, 55, 80}};

// Exact admitted/total counts over Gender x Race.
inline OutcomeTable Simpsons() {
  OutcomeTable t(GroupSpaceFor(SimpsonsSchema()), 2);
  t.outcome_labels = {"no", "yes"};
  for (const AdmissionCell& c : kAdmissions) {
    const int tuple[2] = {c.gender, c.race};
    const std::size_t s = t.space.CellId(tuple);
    t.Add(s, 1, c.admitted);
    t.Add(s, 0, c.total - c.admitted);
  }
  return t;
}

// The same table as 700 individual rows.
inline Dataset SimpsonsDataset() {
  std::vector<ColumnData> cols(3);
  for (const AdmissionCell& c : kAdmissions) {
    for (int k = 0; k < c.total; ++k) {
      cols[0].codes.push_back(c.gender);
      cols[1].codes.push_back(c.race);
      cols[2].codes.push_back(k < c.admitted ? 1 : 0);
    }
  }
  return Encode(SimpsonsSchema(), std::move(cols));
}

// --- Two-group biased labels -----------------------------------------------
// group = minority with probability p_minority; y ~ Bernoulli(rate of the
// group); each feature x_j = (y ? +1 : -1) + (minority ? +0.5 : -0.5) + N(0,1).

inline Schema BiasedSchema(std::size_t n_features) {
  Schema s;
  s.columns.push_back({"group", ColumnKind::kProtected, {"majority", "minority"}, {}, true});
  for (std::size_t j = 0; j < n_features; ++j) {
    s.columns.push_back({"x" + std::to_string(j + 1), ColumnKind::kContinuous, {}, {}, true});
  }
  s.columns.push_back({"y", ColumnKind::kOutcome, {"0", "1"}, {}, true});
  s.outcome_positive_label = "1";
  return s;
}

namespace internal {
inline void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
  }
}
}  // namespace internal

// Exact label distribution: rows (majority, minority), weights (1 - pm, pm).
inline ProbTable BiasedProbs(double p_minority, double p_pos_majority, double p_pos_minority) {
  internal::CheckProbability(p_minority, "p_minority");
  internal::CheckProbability(p_pos_majority, "p_pos_majority");
  internal::CheckProbability(p_pos_minority, "p_pos_minority");
  Matrix probs(2, 2);
  probs(0, 1) = p_pos_majority;
  probs(0, 0) = 1.0 - p_pos_majority;
  probs(1, 1) = p_pos_minority;
  probs(1, 0) = 1.0 - p_pos_minority;
  return MakeProbTable(GroupSpaceFor(BiasedSchema(1)), probs,
                       {1.0 - p_minority, p_minority});
}

inline Dataset Biased(double p_minority, double p_pos_majority, double p_pos_minority,
                      std::size_t n_features, std::size_t n, std::uint64_t seed) {
  internal::CheckProbability(p_minority, "p_minority");
  internal::CheckProbability(p_pos_majority, "p_pos_majority");
  internal::CheckProbability(p_pos_minority, "p_pos_minority");
  Rng rng(seed);
  std::vector<ColumnData> cols(n_features + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const bool minority = rng.Bernoulli(p_minority);
    const bool positive = rng.Bernoulli(minority ? p_pos_minority : p_pos_majority);
    cols[0].codes.push_back(minority ? 1 : 0);
    for (std::size_t j = 0; j < n_features; ++j) {
      const double mean = (positive ? 1.0 : -1.0) + (minority ? 0.5 : -0.5);
      cols[j + 1].values.push_back(rng.Normal(mean, 1.0));
    }
    cols[n_features + 1].codes.push_back(positive ? 1 : 0);
  }
  return Encode(BiasedSchema(n_features), std::move(cols));
}

}  // namespace dfair::synth
