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

#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "dfair/check/oracles.hpp"
#include "dfair/core/error.hpp"
#include "dfair/data/synth.hpp"
#include "dfair/model/adam.hpp"
#include "dfair/model/checkpoint.hpp"
#include "dfair/model/classifier.hpp"
#include "dfair/model/loss.hpp"

namespace dfair {
namespace {

Matrix RandomInputs(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, d);
  for (double& v : x.data()) v = rng.Normal(0.0, 2.0);
  return x;
}

TEST(ClassifierTest, ParameterLayout) {
  EXPECT_EQ(Classifier::ParameterCount(Architecture::Logistic(), 5, 2), 6U);
  EXPECT_EQ(Classifier::ParameterCount(Architecture::Logistic(), 5, 3), 18U);
  // 5*16+16 + 16*16+16 + 16*16+16 + 16+1
  EXPECT_EQ(Classifier::ParameterCount(Architecture::Mlp(3, 16), 5, 2), 657U);
  const Classifier m(Architecture::Mlp(2, 4), 3, 2);
  ASSERT_EQ(m.layers().size(), 3U);
  EXPECT_EQ(m.layers()[1].offset, 16U);
  EXPECT_EQ(m.layers()[1].bias_offset(), 32U);
  EXPECT_THROW(Architecture::Mlp(0, 4), InvalidArgument);
  EXPECT_THROW(Classifier(Architecture::Logistic(), 3, 1), InvalidArgument);
}

TEST(ClassifierTest, ZeroLogisticIsHalf) {
  const Classifier m(Architecture::Logistic(), 4, 2);
  const Matrix p = Forward(m, RandomInputs(10, 4, 1));
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(p(i, 1), 0.5);
    EXPECT_EQ(p(i, 0), 0.5);
  }
}

TEST(ClassifierTest, LogisticMatchesDefinition) {
  Classifier m(Architecture::Logistic(), 2, 2);
  m.set_weights({0.5, -1.5, 0.25});
  Matrix x(1, 2);
  x(0, 0) = 2.0;
  x(0, 1) = 1.0;
  const double z = 0.5 * 2.0 - 1.5 * 1.0 + 0.25;
  EXPECT_NEAR(Forward(m, x)(0, 1), 1.0 / (1.0 + std::exp(-z)), 1e-15);
}

TEST(ClassifierTest, ZeroHiddenWeightsGiveConstantOutput) {
  Classifier m = MakeClassifier(Architecture::Mlp(2, 5), 3, 3, 4);
  const std::size_t first = m.layers()[0].weight_count();
  for (std::size_t k = 0; k < first; ++k) m.weights()[k] = 0.0;
  const Matrix p = Forward(m, RandomInputs(20, 3, 2));
  for (std::size_t i = 1; i < 20; ++i) {
    for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(p(i, y), p(0, y));
  }
}

TEST(ClassifierTest, RowsAreDistributions) {
  for (std::size_t k : {2U, 4U}) {
    const Classifier m = MakeClassifier(Architecture::Mlp(2, 8), 6, k, 9);
    const Matrix p = Forward(m, RandomInputs(100, 6, 3));
    for (std::size_t i = 0; i < 100; ++i) {
      double sum = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        EXPECT_GE(p(i, y), 0.0);
        sum += p(i, y);
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(ClassifierTest, RejectsBadInputs) {
  const Classifier m(Architecture::Logistic(), 2, 2);
  EXPECT_THROW(Forward(m, Matrix(3, 5)), InvalidArgument);
  Matrix x(1, 2);
  x(0, 0) = NAN;
  EXPECT_THROW(Forward(m, x), DomainError);
  Classifier w(Architecture::Logistic(), 2, 2);
  EXPECT_THROW(w.set_weights({1.0}), InvalidArgument);
}

TEST(ClassifierTest, PredictAndAccuracy) {
  Matrix p(3, 2);
  p(0, 0) = 0.7;
  p(0, 1) = 0.3;
  p(1, 0) = 0.5;
  p(1, 1) = 0.5;
  p(2, 0) = 0.2;
  p(2, 1) = 0.8;
  EXPECT_EQ(PredictClasses(p), (std::vector<int>{0, 0, 1}));
  EXPECT_DOUBLE_EQ(Accuracy(p, std::vector<int>{0, 1, 1}), 2.0 / 3.0);
}

TEST(LossTest, UniformPredictorIsLn2) {
  const Dataset d = synth::Biased(0.5, 0.5, 0.5, 2, 400, 1);
  const Classifier m(Architecture::Logistic(), d.n_features(), 2);
  const ObjectiveEval e = EvaluateObjective(m, d, PenaltySpec::None());
  EXPECT_NEAR(e.cross_entropy, std::log(2.0), 1e-12);
  EXPECT_EQ(e.penalty, 0.0);
}

TEST(LossTest, PerfectClassifierHasZeroLossFiniteGradient) {
  // y = [x1 > 0] separated with a huge margin.
  Schema schema = synth::BiasedSchema(1);
  std::vector<ColumnData> cols(3);
  for (int i = 0; i < 20; ++i) {
    const bool pos = i % 2 == 0;
    cols[0].codes.push_back(i % 4 < 2 ? 0 : 1);
    cols[1].values.push_back(pos ? 1.0 : -1.0);
    cols[2].codes.push_back(pos ? 1 : 0);
  }
  const Dataset d = Encode(schema, cols);
  Classifier m(Architecture::Logistic(), d.n_features(), 2);
  m.set_weights({0.0, 0.0, 1000.0, 0.0});
  const ObjectiveEval e = EvaluateObjective(m, d, PenaltySpec::None());
  EXPECT_EQ(e.cross_entropy, 0.0);
  for (double g : e.grad) EXPECT_TRUE(std::isfinite(g));
}

TEST(LossTest, GradientMatchesFiniteDifferences) {
  Rng rng(21);
  const Dataset d = oracle::RandomDataset(rng, 2, 3, 3, 40);
  for (const Architecture& arch : {Architecture::Logistic(), Architecture::Mlp(2, 4)}) {
    for (const PenaltySpec& pen : {PenaltySpec::None(), PenaltySpec::Df(0.0, 0.5),
                                   PenaltySpec::Sf(0.0, 1.0, 2)}) {
      Classifier m = MakeClassifier(arch, d.n_features(), 3, 8);
      for (double& w : m.weights()) w += rng.Normal(0.0, 0.1);
      const auto [loss, grad] = LossAndGrad(m, d, pen);
      const auto numeric = oracle::FiniteDifferenceGradient(
          [&](const std::vector<double>& w) {
            Classifier c = m;
            c.set_weights(w);
            return EvaluateObjective(c, d, pen).total;
          },
          m.weights());
      EXPECT_LT(oracle::RelativeError(grad, numeric), 1e-5)
          << arch.ToString() << " " << ToString(pen.kind);
      EXPECT_DOUBLE_EQ(loss, EvaluateObjective(m, d, pen).total);
    }
  }
}

TEST(LossTest, PenaltyNeedsProtectedColumns) {
  Rng rng(2);
  Dataset d = oracle::RandomDataset(rng, 1, 2, 2, 10);
  d.protected_columns.clear();
  const Classifier m(Architecture::Logistic(), d.n_features(), 2);
  EXPECT_THROW(EvaluateObjective(m, d, PenaltySpec::Df(0.0)), InvalidArgument);
}

TEST(AdamTest, ZeroGradientLeavesWeights) {
  Classifier m = MakeClassifier(Architecture::Logistic(), 3, 2, 1);
  const auto before = m.weights();
  OptimState opt = OptimState::For(m);
  AdamStep(m, opt, std::vector<double>(before.size(), 0.0));
  EXPECT_EQ(m.weights(), before);
  EXPECT_EQ(opt.step_count, 1U);
}

TEST(AdamTest, ConstantGradientStepApproachesLearningRate) {
  Classifier m(Architecture::Logistic(), 1, 2);
  OptimState opt = OptimState::For(m, 0.01);
  const std::vector<double> g{0.3, -2.0};
  std::vector<double> prev = m.weights();
  for (int t = 0; t < 200; ++t) {
    prev = m.weights();
    AdamStep(m, opt, g);
  }
  EXPECT_NEAR(m.weights()[0] - prev[0], -0.01, 1e-6);
  EXPECT_NEAR(m.weights()[1] - prev[1], 0.01, 1e-6);
}

TEST(AdamTest, NonFiniteGradientNamesIndex) {
  Classifier m(Architecture::Logistic(), 2, 2);
  OptimState opt = OptimState::For(m);
  try {
    AdamStep(m, opt, std::vector<double>{0.0, INFINITY, 0.0});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
  EXPECT_THROW(AdamStep(m, opt, std::vector<double>{0.0}), InvalidArgument);
}

TEST(AdamTest, Deterministic) {
  auto run = [] {
    Rng rng(5);
    const Dataset d = oracle::RandomDataset(rng, 2, 2, 2, 30);
    Classifier m = MakeClassifier(Architecture::Mlp(1, 4), d.n_features(), 2, 3);
    OptimState opt = OptimState::For(m);
    for (int t = 0; t < 20; ++t) AdamStep(m, opt, LossAndGrad(m, d, PenaltySpec::None()).second);
    return m.weights();
  };
  EXPECT_EQ(run(), run());
}

TEST(CheckpointTest, RoundTripIsExact) {
  Checkpoint c{MakeClassifier(Architecture::Mlp(2, 3), 4, 3, 77), {}};
  c.model.weights()[0] = 1.0 / 3.0;
  c.scaling.shift = {0.1, 0.0, 2.5, 0.0};
  c.scaling.scale = {3.0, 1.0, 0.7, 1.0};
  std::stringstream s;
  WriteCheckpoint(c, s);
  const Checkpoint r = ReadCheckpoint(s);
  EXPECT_EQ(r.model.arch(), c.model.arch());
  EXPECT_EQ(r.model.n_features(), 4U);
  EXPECT_EQ(r.model.n_outcomes(), 3U);
  EXPECT_EQ(r.model.weights(), c.model.weights());
  EXPECT_EQ(r.scaling.shift, c.scaling.shift);
  EXPECT_EQ(r.scaling.scale, c.scaling.scale);

  Checkpoint plain{MakeClassifier(Architecture::Logistic(), 2, 2, 1), {}};
  std::stringstream t;
  WriteCheckpoint(plain, t);
  EXPECT_TRUE(ReadCheckpoint(t).scaling.empty());
}

TEST(CheckpointTest, RejectsCorruptInput) {
  std::stringstream bad("dfair-model 2\n");
  EXPECT_THROW(ReadCheckpoint(bad), FormatError);
  std::stringstream short_params("dfair-model 1\narch logistic\nfeatures 2\noutcomes 2\nparams 3\n1\n2\n");
  EXPECT_THROW(ReadCheckpoint(short_params), FormatError);
}

}  // namespace
}  // namespace dfair
