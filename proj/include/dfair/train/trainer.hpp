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
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/model/adam.hpp"
#include "dfair/model/classifier.hpp"
#include "dfair/model/loss.hpp"
#include "dfair/train/penalty.hpp"

namespace dfair {

struct TrainConfig {
  std::size_t iterations = 500;
  std::size_t burn_in = 50;
  std::uint64_t seed = 0;
  double learning_rate = 0.01;
  std::size_t eval_every = 10;

  void Validate() const {
    if (iterations == 0) throw InvalidArgument("iterations must be positive");
    if (burn_in >= iterations) throw InvalidArgument("burn_in must be < iterations");
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (eval_every == 0) throw InvalidArgument("eval_every must be positive");
  }
};

struct TraceRecord {
  std::size_t iteration = 0;
  double loss = 0.0;      // objective actually minimized at this iteration
  double penalty = 0.0;   // lambda * R, exactly 0 during burn-in
  double epsilon = 0.0;   // soft-count epsilon on the training batch
  double gamma = 0.0;     // soft-count gamma on the training batch
  double dev_accuracy = NAN;
};

struct TrainTrace {
  std::vector<TraceRecord> records;

  void WriteCsv(std::ostream& out) const {
    out << "iteration,loss,penalty,epsilon,gamma,dev_accuracy\n";
    for (const TraceRecord& r : records) {
      out << r.iteration << ',' << FormatDouble(r.loss) << ',' << FormatDouble(r.penalty)
          << ',' << FormatDouble(r.epsilon) << ',' << FormatDouble(r.gamma) << ','
          << FormatDouble(r.dev_accuracy) << '\n';
    }
  }

  std::string ToCsv() const {
    std::ostringstream out;
    WriteCsv(out);
    return out.str();
  }
};

struct TrainResult {
  Classifier model;
  TrainTrace trace;
};

// Soft-count fairness of predictions on a dataset, as monitored during
// training and reported afterwards.
struct SoftFairness {
  double epsilon = 0.0;
  double gamma = 0.0;
};

inline SoftFairness MeasureSoftFairness(const Matrix& probs, const Dataset& data,
                                        double alpha, std::size_t positive) {
  SoftFairness f;
  f.epsilon = SoftEpsilon(probs, data, alpha, 0.0, false).measure;
  f.gamma = SoftGamma(probs, data, EnumerateSubgroups(data.space, SubgroupMode::kAllLevels),
                      positive, 0.0, false)
                .measure;
  return f;
}

// Full-batch adaptive-moment descent on cross-entropy + lambda * R. The
// penalty contributes neither loss nor gradient before `burn_in`.
inline TrainResult Train(const Dataset& train, const Dataset& dev, const Architecture& arch,
                         const PenaltySpec& spec, const TrainConfig& cfg) {
  cfg.Validate();
  spec.Validate();
  if (train.n_rows() == 0) throw InvalidArgument("training split is empty");
  if (dev.n_rows() > 0 &&
      (dev.n_features() != train.n_features() || dev.n_outcomes != train.n_outcomes)) {
    throw InvalidArgument("train and dev splits do not share a schema");
  }
  TrainResult result{MakeClassifier(arch, train.n_features(), train.n_outcomes, cfg.seed), {}};
  OptimState opt = OptimState::For(result.model, cfg.learning_rate);
  const std::size_t positive =
      spec.kind == PenaltyKind::kSf ? spec.positive_outcome
                                    : static_cast<std::size_t>(train.schema.positive_index());
  const PenaltySpec none = PenaltySpec::None();

  auto record = [&](std::size_t it, const ObjectiveEval& e) {
    TraceRecord r;
    r.iteration = it;
    r.loss = e.total;
    r.penalty = e.penalty;
    const SoftFairness f = MeasureSoftFairness(e.probs, train, spec.alpha, positive);
    r.epsilon = f.epsilon;
    r.gamma = f.gamma;
    if (dev.n_rows() > 0) {
      r.dev_accuracy = Accuracy(Forward(result.model, dev.features), dev.outcome);
    }
    result.trace.records.push_back(r);
  };

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const PenaltySpec& active = it < cfg.burn_in ? none : spec;
    ObjectiveEval e = EvaluateObjective(result.model, train, active);
    if (it % cfg.eval_every == 0) record(it, e);
    AdamStep(result.model, opt, e.grad);
  }
  // Final state after the last update.
  ObjectiveEval last = EvaluateObjective(result.model, train, spec);
  record(cfg.iterations, last);
  return result;
}

}  // namespace dfair
