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

// Randomized checks of the theorems and identities the library relies on.
// Each property draws its own instances from Rng::Mix(seed, property), so a
// single property can be rerun in isolation with the same seed.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dfair/check/oracles.hpp"
#include "dfair/core/random.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/bounds.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/gamma.hpp"
#include "dfair/metrics/intersectionality.hpp"
#include "dfair/metrics/prob_table.hpp"
#include "dfair/model/classifier.hpp"
#include "dfair/model/loss.hpp"
#include "dfair/train/penalty.hpp"

namespace dfair::check {

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest observed error or violation
  std::string first_failure;

  bool pass() const { return trials > 0 && failures == 0; }
};

// A trial returns the observed violation; > 0 means failure. It may fill
// `detail` to describe the instance.
using Trial = std::function<double(Rng&, std::string& detail)>;

inline PropertyResult RunProperty(const std::string& name, std::size_t trials,
                                  std::uint64_t seed, const Trial& trial) {
  PropertyResult r{name, trials, 0, 0.0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::Mix(seed, t));
    std::string detail;
    const double v = trial(rng, detail);
    if (v > r.worst) r.worst = v;
    if (v > 0.0) {
      if (r.failures == 0) r.first_failure = "trial " + std::to_string(t) + ": " + detail;
      ++r.failures;
    }
  }
  return r;
}

// Subset epsilon never exceeds the full intersectional epsilon (exact
// mixture projection over a random population).
inline PropertyResult IntersectionalityProperty(std::size_t trials, std::uint64_t seed) {
  return RunProperty("intersectionality", trials, seed, [](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpaceWithAttributes(rng, 2, 4, 3);
    const std::size_t k = 2 + rng.UniformInt(3);
    const ProbTable full = oracle::RandomProbTable(rng, space, k);
    const double e_full = EpsilonDf(full).epsilon;
    double worst = 0.0;
    for (const auto& keep : AttributeSubsets(space.num_attributes(), false)) {
      const double e = EpsilonDf(ProjectProbs(full, keep)).epsilon;
      const double excess = e - e_full;
      if (excess > 1e-9 && excess > worst) {
        worst = excess;
        detail = internal::SubsetName(space, keep) + " eps " + std::to_string(e) + " > " +
                 std::to_string(e_full);
      }
    }
    return worst;
  });
}

// Pooled epsilon against the per-stratum maximum. With arbitrary P(c|s) the
// bound does not hold in general (a Simpson's reversal breaks it), so this
// property reports violations. With `independent` every cell shares one
// P(c), the case in which mixing cannot widen any ratio.
inline PropertyResult ConfounderProperty(std::size_t trials, std::uint64_t seed,
                                         bool independent = false) {
  const char* name = independent ? "confounder_indep" : "confounder";
  return RunProperty(name, trials, seed, [independent](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpace(rng, 3, 3);
    const std::size_t k = 2 + rng.UniformInt(2);
    const std::size_t c = 2 + rng.UniformInt(3);
    std::vector<Stratum> strata;
    for (std::size_t j = 0; j < c; ++j) {
      OutcomeTable t = oracle::RandomCountTable(rng, space, k, 0.0);
      strata.push_back({"c" + std::to_string(j), std::move(t)});
    }
    Matrix w(space.num_cells(), c);
    const auto shared = oracle::RandomDistribution(rng, c);
    for (std::size_t s = 0; s < space.num_cells(); ++s) {
      const auto d = independent ? shared : oracle::RandomDistribution(rng, c);
      for (std::size_t j = 0; j < c; ++j) w(s, j) = d[j];
    }
    const EstimatorSpec spec = EstimatorSpec::Smoothed(1.0);
    const ConfounderCheck r = CheckConfounderTheorem(strata, w, spec);
    const double excess = r.pooled_epsilon - r.dfc_epsilon;
    if (!r.pass) {
      detail = "pooled " + std::to_string(r.pooled_epsilon) + " > dfc " +
               std::to_string(r.dfc_epsilon);
      return std::max(excess, 1e-300);
    }
    return 0.0;
  });
}

inline PropertyResult PrivacyProperty(std::size_t trials, std::uint64_t seed) {
  return RunProperty("privacy_bound", trials, seed, [](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpace(rng, 3, 3);
    const ProbTable t = oracle::RandomProbTable(rng, space, 2 + rng.UniformInt(3));
    const auto prior = oracle::RandomDistribution(rng, space.num_cells());
    const PrivacyCheck r = CheckPrivacyBound(t, prior);
    if (!r.pass) {
      detail = "posterior odds exceed e^eps by " + std::to_string(r.max_violation);
      return std::max(r.max_violation, 1e-300);
    }
    return 0.0;
  });
}

inline PropertyResult UtilityProperty(std::size_t trials, std::uint64_t seed) {
  return RunProperty("utility_bound", trials, seed, [](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpace(rng, 3, 3);
    const std::size_t k = 2 + rng.UniformInt(3);
    const ProbTable t = oracle::RandomProbTable(rng, space, k);
    std::vector<double> u(k);
    for (double& v : u) v = rng.Uniform(0.0, 10.0);
    const UtilityCheck r = CheckUtilityBound(t, u);
    if (!r.pass) {
      detail = "utility ratio " + std::to_string(r.max_ratio) + " > e^" +
               std::to_string(r.epsilon);
      return std::max(r.max_ratio - std::exp(r.epsilon), 1e-300);
    }
    return 0.0;
  });
}

// Projection conserves every per-outcome count and the grand total.
inline PropertyResult ProjectionMassProperty(std::size_t trials, std::uint64_t seed) {
  return RunProperty("projection_mass", trials, seed, [](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpaceWithAttributes(rng, 2, 4, 3);
    const std::size_t k = 2 + rng.UniformInt(3);
    const OutcomeTable t = oracle::RandomCountTable(rng, space, k, 0.2);
    std::vector<double> margins(k, 0.0);
    for (std::size_t s = 0; s < t.num_cells(); ++s) {
      for (std::size_t y = 0; y < k; ++y) margins[y] += t.counts(s, y);
    }
    double worst = 0.0;
    for (const auto& keep : AttributeSubsets(space.num_attributes(), false)) {
      const OutcomeTable p = Project(t, keep);
      std::vector<double> m(k, 0.0);
      for (std::size_t s = 0; s < p.num_cells(); ++s) {
        for (std::size_t y = 0; y < k; ++y) m[y] += p.counts(s, y);
      }
      for (std::size_t y = 0; y < k; ++y) {
        const double d = std::abs(m[y] - margins[y]);
        if (d > 0.0 && d > worst) {
          worst = d;
          detail = internal::SubsetName(space, keep) + " outcome " + std::to_string(y);
        }
      }
      const double dt = std::abs(p.grand_total() - t.grand_total());
      if (dt > worst) {
        worst = dt;
        detail = internal::SubsetName(space, keep) + " grand total";
      }
    }
    return worst;
  });
}

// The library epsilon agrees with the exhaustive triple loop, including
// empty cells and zero counts.
inline PropertyResult EpsilonOracleProperty(std::size_t trials, std::uint64_t seed) {
  return RunProperty("epsilon_oracle", trials, seed, [](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpace(rng, 4, 3);
    const std::size_t k = 2 + rng.UniformInt(3);
    OutcomeTable t = oracle::RandomCountTable(rng, space, k, 0.2, 10);
    while (t.num_cells() - t.empty_cells().size() < 2) {
      t = oracle::RandomCountTable(rng, space, k, 0.2, 10);
    }
    const EstimatorSpec spec =
        rng.Bernoulli(0.5) ? EstimatorSpec::Empirical() : EstimatorSpec::Smoothed(rng.Uniform(0.1, 2.0));
    const ProbTable probs = TableToProbs(t, spec);
    const double a = EpsilonDf(probs).epsilon;
    const double b = oracle::BruteForceEpsilon(probs);
    if (std::isinf(a) && std::isinf(b)) return 0.0;
    const double d = std::abs(a - b);
    if (d > 1e-12) {
      detail = "library " + std::to_string(a) + " oracle " + std::to_string(b);
      return d;
    }
    return 0.0;
  });
}

// The 80% rule and epsilon <= -log 0.8 on the positive outcome agree.
inline PropertyResult EightyPercentProperty(std::size_t trials, std::uint64_t seed) {
  return RunProperty("eighty_percent", trials, seed, [](Rng& rng, std::string& detail) {
    const GroupSpace space = oracle::RandomSpace(rng, 2, 3);
    Matrix probs(space.num_cells(), 2);
    const double base = rng.Uniform(0.05, 0.95);
    for (std::size_t s = 0; s < space.num_cells(); ++s) {
      const double p = std::min(0.999, base * rng.Uniform(0.7, 1.3));
      probs(s, 1) = p;
      probs(s, 0) = 1.0 - p;
    }
    const ProbTable t = MakeProbTable(space, probs);
    const bool rule = EightyPercentRule(t, 1).pass;
    const bool df = EpsilonForOutcome(t, 1) <= kEightyPercentEpsilon;
    if (rule != df) {
      detail = "rule " + std::to_string(rule) + " eps " + std::to_string(EpsilonForOutcome(t, 1));
      return 1.0;
    }
    return 0.0;
  });
}

// Analytic gradient of the full objective against central differences on
// small random models. With `df_only` every trial uses the DF hinge;
// otherwise half use the SF hinge.
inline PropertyResult GradientProperty(std::size_t trials, std::uint64_t seed,
                                       bool df_only = false) {
  return RunProperty("gradient", trials, seed, [df_only](Rng& rng, std::string& detail) {
    const std::size_t k = 2 + rng.UniformInt(2);
    const std::size_t n = 16 + rng.UniformInt(17);
    const Dataset data = oracle::RandomDataset(rng, 2, 2, k, n);
    const Architecture arch = rng.Bernoulli(0.5)
                                  ? Architecture::Logistic()
                                  : Architecture::Mlp(2, 8);
    Classifier model = MakeClassifier(arch, data.n_features(), k, rng.NextBits());
    // Biases start at zero, which can put a pre-activation exactly on the
    // ReLU kink; jitter every parameter off it.
    std::vector<double> w = model.weights();
    for (double& v : w) v += rng.Normal(0.0, 0.1);
    model.set_weights(std::move(w));
    const bool sf = !df_only && rng.Bernoulli(0.5);
    PenaltySpec pen = !sf
                          ? PenaltySpec::Df(0.0, rng.Uniform(0.1, 1.0), 1.0)
                          : PenaltySpec::Sf(0.0, rng.Uniform(0.1, 1.0), k - 1);
    const auto [loss, grad] = LossAndGrad(model, data, pen);
    (void)loss;
    const auto numeric = oracle::FiniteDifferenceGradient(
        [&](const std::vector<double>& w) {
          Classifier m = model;
          m.set_weights(w);
          return EvaluateObjective(m, data, pen).total;
        },
        model.weights());
    const double err = oracle::RelativeError(grad, numeric);
    if (err > 1e-5) {
      detail = arch.ToString() + " " + ToString(pen.kind) + " K=" + std::to_string(k) +
               " relative error " + std::to_string(err);
      return err;
    }
    return 0.0;
  });
}

// Every property, in a fixed order. Property i uses seed Mix(seed, i).
inline std::vector<PropertyResult> RunAllProperties(std::size_t trials, std::uint64_t seed) {
  auto sub = [seed](std::uint64_t i) { return Rng::Mix(seed, 1000 + i); };
  return {IntersectionalityProperty(trials, sub(0)), ConfounderProperty(trials, sub(1)),
          ConfounderProperty(trials, sub(8), true),  PrivacyProperty(trials, sub(2)),
          UtilityProperty(trials, sub(3)),           ProjectionMassProperty(trials, sub(4)),
          EpsilonOracleProperty(trials, sub(5)),     EightyPercentProperty(trials, sub(6)),
          GradientProperty(trials, sub(7))};
}

}  // namespace dfair::check
