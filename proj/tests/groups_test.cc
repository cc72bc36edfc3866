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

#include <vector>

#include <gtest/gtest.h>

#include "dfair/core/error.hpp"
#include "dfair/data/synth.hpp"
#include "dfair/groups/build_table.hpp"
#include "dfair/groups/group_space.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/model/classifier.hpp"

namespace dfair {
namespace {

GroupSpace ThreeAttributes() {
  return GroupSpace({{"gender", {"f", "m"}},
                     {"race", {"a", "b", "c"}},
                     {"nation", {"us", "non-us"}}});
}

TEST(GroupSpaceTest, LexicographicIds) {
  const GroupSpace s = ThreeAttributes();
  EXPECT_EQ(s.num_cells(), 12U);
  EXPECT_EQ(s.CellId(std::vector<int>{0, 0, 0}), 0U);
  EXPECT_EQ(s.CellId(std::vector<int>{0, 0, 1}), 1U);
  EXPECT_EQ(s.CellId(std::vector<int>{1, 2, 1}), 11U);
  for (std::size_t id = 0; id < s.num_cells(); ++id) EXPECT_EQ(s.CellId(s.Tuple(id)), id);
  EXPECT_EQ(s.ValueOf(11, 1), 2);
  EXPECT_EQ(s.CellName(7), "gender=m|race=a|nation=non-us");
}

TEST(GroupSpaceTest, RejectsDegenerateAttributes) {
  EXPECT_THROW((GroupSpace(std::vector<Attribute>{{"x", {"only"}}})), InvalidArgument);
  const GroupSpace s = ThreeAttributes();
  EXPECT_THROW(s.CellId(std::vector<int>{0, 3, 0}), InvalidArgument);
  EXPECT_THROW(s.CellId(std::vector<int>{0, 0}), InvalidArgument);
}

TEST(GroupSpaceTest, SubspaceAndProjection) {
  const GroupSpace s = ThreeAttributes();
  const std::vector<std::size_t> keep{0, 2};
  const GroupSpace sub = s.Subspace(keep);
  EXPECT_EQ(sub.num_cells(), 4U);
  EXPECT_EQ(s.ProjectCell(s.CellId(std::vector<int>{1, 2, 0}), sub, keep),
            sub.CellId(std::vector<int>{1, 0}));
}

TEST(GroupSpaceTest, AttributeSubsetsOrder) {
  const auto subsets = AttributeSubsets(3, false);
  const std::vector<std::vector<std::size_t>> expected{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(subsets, expected);
  EXPECT_EQ(AttributeSubsets(3, true).size(), 7U);
}

TEST(SubgroupsTest, CountsMatchProductFormula) {
  const GroupSpace s = ThreeAttributes();
  // (2+1)(3+1)(2+1) - 1 groups once every attribute may be left free.
  EXPECT_EQ(EnumerateSubgroups(s, SubgroupMode::kAllLevels).size(), 35U);
  EXPECT_EQ(EnumerateSubgroups(s, SubgroupMode::kBottomOnly).size(), 12U);
  const auto groups = EnumerateSubgroups(s, SubgroupMode::kAllLevels);
  EXPECT_EQ(groups.indicators.front().Name(s), "gender=f");
  EXPECT_EQ(groups.indicators.back().Name(s), "gender=m|race=c|nation=non-us");
}

TEST(SubgroupsTest, ContainsMarginalizesFreeAttributes) {
  const GroupSpace s = ThreeAttributes();
  const GroupIndicator race_b{{1}, {1}};
  std::size_t members = 0;
  for (std::size_t c = 0; c < s.num_cells(); ++c) members += race_b.Contains(s, c);
  EXPECT_EQ(members, 4U);
}

TEST(OutcomeTableTest, ProjectSumsCounts) {
  const OutcomeTable t = synth::Simpsons();
  const OutcomeTable race = Project(t, std::vector<std::size_t>{1});
  EXPECT_EQ(race.counts(0, 1), 81.0 + 234.0);
  EXPECT_EQ(race.totals[0], 87.0 + 270.0);
  EXPECT_EQ(race.grand_total(), 700.0);
  EXPECT_THROW(Project(t, std::vector<std::size_t>{}), InvalidArgument);
  EXPECT_THROW(Project(t, std::vector<std::size_t>{0, 1}), InvalidArgument);
  EXPECT_THROW(Project(t, std::vector<std::size_t>{1, 1}), InvalidArgument);
}

TEST(OutcomeTableTest, EmptyCellsAndText) {
  OutcomeTable t(GroupSpace({{"g", {"a", "b", "c"}}}), 2);
  t.outcome_labels = {"no", "yes"};
  t.Add(0, 1, 3.0);
  t.Add(2, 0, 1.0);
  EXPECT_EQ(t.empty_cells(), std::vector<std::size_t>{1});
  EXPECT_EQ(t.ToText(), "cell\tno\tyes\ttotal\ng=a\t0\t3\t3\ng=b\t0\t0\t0\ng=c\t1\t0\t1\n");
}

TEST(BuildTableTest, LabelsMatchSimpsons) {
  const Dataset d = synth::SimpsonsDataset();
  const OutcomeTable t = BuildTable(d, TableSource::kLabels);
  const OutcomeTable ref = synth::Simpsons();
  EXPECT_EQ(t.counts, ref.counts);
  EXPECT_EQ(t.totals, ref.totals);
}

TEST(BuildTableTest, SoftCountsSumPredictedProbabilities) {
  const Dataset d = synth::Biased(0.5, 0.8, 0.1, 2, 200, 1);
  const Classifier m = MakeClassifier(Architecture::Logistic(), d.n_features(), 2, 5);
  const OutcomeTable soft = BuildTable(d, TableSource::kClassifierSoft, &m);
  const Matrix probs = Forward(m, d.features);
  double expect = 0.0;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    if (d.group_index[i] == 1) expect += probs(i, 1);
  }
  EXPECT_NEAR(soft.counts(1, 1), expect, 1e-9);
  EXPECT_NEAR(soft.counts(1, 0) + soft.counts(1, 1), soft.totals[1], 1e-9);
  const OutcomeTable hard = BuildTable(d, TableSource::kClassifierHard, &m);
  EXPECT_EQ(hard.grand_total(), 200.0);
}

TEST(BuildTableTest, ModelMismatchIsAnError) {
  const Dataset d = synth::Biased(0.5, 0.8, 0.1, 2, 20, 1);
  const Classifier m = MakeClassifier(Architecture::Logistic(), d.n_features() + 1, 2, 5);
  EXPECT_THROW(BuildTable(d, TableSource::kClassifierSoft, &m), InvalidArgument);
  EXPECT_THROW(BuildTable(d, TableSource::kClassifierSoft, nullptr), InvalidArgument);
}

}  // namespace
}  // namespace dfair
