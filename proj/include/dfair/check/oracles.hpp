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

// Reference computations that share no code path with the library
// implementations they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dfair/core/matrix.hpp"
#include "dfair/core/random.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/groups/group_space.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/prob_table.hpp"

namespace dfair::oracle {

// Exhaustive max over (y, s_i, s_j) of |log P(y|s_i) - log P(y|s_j)|.
inline double BruteForceEpsilon(const ProbTable& t) {
  double best = 0.0;
  for (std::size_t y = 0; y < t.n_outcomes; ++y) {
    for (std::size_t i = 0; i < t.num_cells(); ++i) {
      if (!t.support[i]) continue;
      for (std::size_t j = 0; j < t.num_cells(); ++j) {
        if (!t.support[j]) continue;
        const double a = t.probs(i, y);
        const double b = t.probs(j, y);
        double e;
        if (a == b) {
          e = 0.0;
        } else if (a == 0.0 || b == 0.0) {
          e = std::numeric_limits<double>::infinity();
        } else {
          e = std::abs(std::log(a) - std::log(b));
        }
        best = std::max(best, e);
      }
    }
  }
  return best;
}

// Central differences of f at w, one coordinate at a time.
inline std::vector<double> FiniteDifferenceGradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> w,
    double step = 1e-6) {
  std::vector<double> g(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double orig = w[k];
    w[k] = orig + step;
    const double up = f(w);
    w[k] = orig - step;
    const double down = f(w);
    w[k] = orig;
    g[k] = (up - down) / (2.0 * step);
  }
  return g;
}

// ||a - b|| / max(||a||, ||b||); 0 when both vanish.
inline double RelativeError(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff += (a[k] - b[k]) * (a[k] - b[k]);
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  const double scale = std::sqrt(std::max(na, nb));
  return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

// --- random instances ------------------------------------------------------

inline GroupSpace RandomSpace(Rng& rng, std::size_t max_attributes, std::size_t max_cardinality) {
  const std::size_t p = 1 + rng.UniformInt(max_attributes);
  std::vector<Attribute> attrs;
  for (std::size_t a = 0; a < p; ++a) {
    const std::size_t k = 2 + rng.UniformInt(max_cardinality - 1);
    Attribute attr{"a" + std::to_string(a), {}};
    for (std::size_t v = 0; v < k; ++v) attr.labels.push_back(std::to_string(v));
    attrs.push_back(std::move(attr));
  }
  return GroupSpace(std::move(attrs));
}

inline GroupSpace RandomSpaceWithAttributes(Rng& rng, std::size_t min_attributes,
                                            std::size_t max_attributes,
                                            std::size_t max_cardinality) {
  while (true) {
    GroupSpace s = RandomSpace(rng, max_attributes, max_cardinality);
    if (s.num_attributes() >= min_attributes) return s;
  }
}

// Strictly positive distribution over k outcomes.
inline std::vector<double> RandomDistribution(Rng& rng, std::size_t k) {
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.Uniform());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

// Every cell supported, weights P(s) random and positive.
inline ProbTable RandomProbTable(Rng& rng, const GroupSpace& space, std::size_t k) {
  Matrix probs(space.num_cells(), k);
  for (std::size_t s = 0; s < space.num_cells(); ++s) {
    const auto d = RandomDistribution(rng, k);
    for (std::size_t y = 0; y < k; ++y) probs(s, y) = d[y];
  }
  return MakeProbTable(space, probs, RandomDistribution(rng, space.num_cells()));
}

// Integer counts; each cell is left empty with probability `p_empty` and
// individual counts may be zero.
inline OutcomeTable RandomCountTable(Rng& rng, const GroupSpace& space, std::size_t k,
                                     double p_empty = 0.0, std::size_t max_count = 40) {
  OutcomeTable t(space, k);
  for (std::size_t s = 0; s < space.num_cells(); ++s) {
    if (rng.Bernoulli(p_empty)) continue;
    for (std::size_t y = 0; y < k; ++y) {
      t.Add(s, y, static_cast<double>(rng.UniformInt(max_count + 1)));
    }
    if (t.totals[s] == 0.0) t.Add(s, rng.UniformInt(k), 1.0);
  }
  return t;
}

// Small labelled dataset with `p` binary protected attributes and `nc`
// continuous features; every intersectional cell gets rows.
inline Dataset RandomDataset(Rng& rng, std::size_t p, std::size_t nc, std::size_t k,
                             std::size_t n) {
  Schema schema;
  for (std::size_t a = 0; a < p; ++a) {
    schema.columns.push_back({"s" + std::to_string(a), ColumnKind::kProtected, {"0", "1"}, {}, true});
  }
  for (std::size_t f = 0; f < nc; ++f) {
    schema.columns.push_back({"x" + std::to_string(f), ColumnKind::kContinuous, {}, {}, true});
  }
  std::vector<std::string> labels;
  for (std::size_t y = 0; y < k; ++y) labels.push_back(std::to_string(y));
  schema.columns.push_back({"y", ColumnKind::kOutcome, labels, {}, true});
  schema.outcome_positive_label = labels.back();
  std::vector<ColumnData> cols(schema.columns.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      cols[a].codes.push_back(static_cast<int>((i >> a) & 1U));
    }
    for (std::size_t f = 0; f < nc; ++f) cols[p + f].values.push_back(rng.Normal());
    cols[p + nc].codes.push_back(static_cast<int>(rng.UniformInt(k)));
  }
  return Encode(std::move(schema), std::move(cols));
}

}  // namespace dfair::oracle
