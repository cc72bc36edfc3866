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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dfair/core/error.hpp"
#include "dfair/data/csv.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/data/schema.hpp"
#include "dfair/data/synth.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/gamma.hpp"

namespace dfair {
namespace {

Schema HiringSchema() {
  return SchemaFromJson(nlohmann::json::parse(R"({
    "columns": [
      {"name": "gender", "kind": "protected", "values": ["f", "m"]},
      {"name": "race", "kind": "protected", "values": ["white", "non-white"],
       "aliases": {"White": "white", "*": "non-white"}, "model_input": false},
      {"name": "age", "kind": "continuous"},
      {"name": "degree", "kind": "categorical", "values": ["none", "bsc", "msc"]},
      {"name": "hired", "kind": "outcome", "values": ["no", "yes"]}
    ],
    "outcome_positive_label": "yes"
  })"));
}

Dataset ParseText(const std::string& text, const Schema& schema) {
  std::istringstream in(text);
  return ParseCsv(in, schema);
}

TEST(CsvTest, QuotesAndEscapes) {
  std::istringstream in("a,b\n\"x,1\",\"say \"\"hi\"\"\"\n\n3,4\n");
  const auto rows = csv::Parse(in);
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[1].fields[0], "x,1");
  EXPECT_EQ(rows[1].fields[1], "say \"hi\"");
  EXPECT_EQ(rows[2].line, 4U);
}

TEST(CsvTest, CrLfAndTrailingRecord) {
  std::istringstream in("a,b\r\n1,2\r\n3,4");
  const auto rows = csv::Parse(in);
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[2].fields[1], "4");
}

TEST(CsvTest, UnterminatedQuoteIsFormatError) {
  std::istringstream in("a\n\"open\n");
  EXPECT_THROW(csv::Parse(in), FormatError);
}

TEST(CsvTest, QuoteRoundTrip) {
  std::ostringstream out;
  csv::WriteRow(out, {"plain", "with,comma", "with\"quote"});
  std::istringstream in(out.str());
  const auto rows = csv::Parse(in);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_EQ(rows[0].fields[1], "with,comma");
  EXPECT_EQ(rows[0].fields[2], "with\"quote");
}

TEST(SchemaTest, LookupAliasesAndWildcard) {
  const Schema s = HiringSchema();
  const ColumnSpec& race = s.columns[1];
  EXPECT_EQ(*race.Lookup("White"), 0);
  EXPECT_EQ(*race.Lookup("white"), 0);
  EXPECT_EQ(*race.Lookup("Asian-Pac-Islander"), 1);
  EXPECT_FALSE(s.columns[0].Lookup("x").has_value());
}

TEST(SchemaTest, ValidationErrors) {
  Schema s = HiringSchema();
  s.columns[4].kind = ColumnKind::kCategorical;
  EXPECT_THROW(s.Validate(), SchemaError);  // no outcome

  s = HiringSchema();
  s.columns[0].kind = ColumnKind::kCategorical;
  s.columns[1].kind = ColumnKind::kCategorical;
  EXPECT_THROW(s.Validate(), SchemaError);  // no protected column

  s = HiringSchema();
  s.columns[2].name = "gender";
  EXPECT_THROW(s.Validate(), SchemaError);  // duplicate name

  s = HiringSchema();
  s.outcome_positive_label = "maybe";
  EXPECT_THROW(s.Validate(), SchemaError);

  s = HiringSchema();
  s.columns[0].values = {"f"};
  EXPECT_THROW(s.Validate(), SchemaError);

  s = HiringSchema();
  s.columns[1].aliases["Black"] = "black";
  EXPECT_THROW(s.Validate(), SchemaError);

  EXPECT_THROW(SchemaFromJson(nlohmann::json::parse(R"({"columns": [{"kind": "outcome"}]})")),
               SchemaError);
}

TEST(SchemaTest, JsonRoundTrip) {
  const Schema s = HiringSchema();
  const Schema t = SchemaFromJson(SchemaToJson(s));
  ASSERT_EQ(t.columns.size(), s.columns.size());
  for (std::size_t c = 0; c < s.columns.size(); ++c) {
    EXPECT_EQ(t.columns[c].name, s.columns[c].name);
    EXPECT_EQ(t.columns[c].kind, s.columns[c].kind);
    EXPECT_EQ(t.columns[c].values, s.columns[c].values);
    EXPECT_EQ(t.columns[c].aliases, s.columns[c].aliases);
    EXPECT_EQ(t.columns[c].model_input, s.columns[c].model_input);
  }
  EXPECT_EQ(t.outcome_positive_label, "yes");
}

constexpr const char* kHiringCsv =
    "gender,race,age,degree,hired\n"
    "f,White,30,bsc,yes\n"
    "m,Black,41.5,msc,no\n"
    "f,Asian,25,none,no\n";

TEST(DatasetTest, ParsesAndEncodes) {
  const Dataset d = ParseText(kHiringCsv, HiringSchema());
  ASSERT_EQ(d.n_rows(), 3U);
  EXPECT_EQ(d.n_protected(), 2U);
  EXPECT_EQ(d.space.num_cells(), 4U);
  // gender one-hot (2) + age + degree one-hot (3); race is not a model input.
  ASSERT_EQ(d.n_features(), 6U);
  EXPECT_EQ(d.feature_info[0].name, "gender=f");
  EXPECT_TRUE(d.feature_info[2].continuous);
  EXPECT_EQ(d.features(1, 2), 41.5);
  EXPECT_EQ(d.features(1, 5), 1.0);
  EXPECT_EQ(d.features(1, 1), 1.0);
  EXPECT_EQ(d.outcome, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(d.protected_value(1, 1), 1);
  EXPECT_EQ(d.Label(2, 1), "non-white");
  EXPECT_EQ(d.group_index[0], d.space.CellId(std::vector<int>{0, 0}));
}

TEST(DatasetTest, UnknownLabelNamesLineAndColumn) {
  try {
    ParseText("gender,race,age,degree,hired\nf,White,30,phd,yes\n", HiringSchema());
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("phd"), std::string::npos) << msg;
    EXPECT_NE(msg.find("degree"), std::string::npos) << msg;
  }
}

TEST(DatasetTest, FieldCountAndNumberErrors) {
  EXPECT_THROW(ParseText("gender,race,age,degree,hired\nf,White,30,bsc\n", HiringSchema()),
               FormatError);
  EXPECT_THROW(ParseText("gender,race,age,degree,hired\nf,White,old,bsc,no\n", HiringSchema()),
               FormatError);
  EXPECT_THROW(ParseText("gender,race,degree,hired\nf,White,bsc,no\n", HiringSchema()),
               SchemaError);
  EXPECT_THROW(ParseText("gender,race,age,degree,hired,extra\nf,White,3,bsc,no,1\n",
                         HiringSchema()),
               SchemaError);
  EXPECT_THROW(ParseText("", HiringSchema()), FormatError);
}

TEST(DatasetTest, MissingPolicy) {
  const std::string text = "gender,race,age,degree,hired\nf,White,?,bsc,yes\nm,White,3,bsc,no\n";
  Schema s = HiringSchema();
  EXPECT_EQ(ParseText(text, s).n_rows(), 1U);
  s.missing_policy = MissingPolicy::kError;
  EXPECT_THROW(ParseText(text, s), FormatError);
}

TEST(DatasetTest, ExtraColumnsIgnoredWhenAllowed) {
  Schema s = HiringSchema();
  s.ignore_extra_columns = true;
  const Dataset d =
      ParseText("id,gender,race,age,degree,hired\n7,f,White,30,bsc,yes\n", s);
  EXPECT_EQ(d.n_rows(), 1U);
}

TEST(DatasetTest, WriteCsvRoundTrip) {
  const Dataset d = ParseText(kHiringCsv, HiringSchema());
  std::ostringstream out;
  WriteCsv(d, out);
  const Dataset e = ParseText(out.str(), HiringSchema());
  EXPECT_EQ(e.outcome, d.outcome);
  EXPECT_EQ(e.features, d.features);
  EXPECT_EQ(e.group_index, d.group_index);
}

TEST(SplitTest, DeterministicAndDisjoint) {
  const Dataset d = synth::Biased(0.5, 0.8, 0.1, 2, 1001, 4);
  const Splits a = Split(d, {0.6, 0.2, 0.2, 11});
  const Splits b = Split(d, {0.6, 0.2, 0.2, 11});
  EXPECT_EQ(a.train.n_rows(), 601U);
  EXPECT_EQ(a.dev.n_rows(), 200U);
  EXPECT_EQ(a.test.n_rows(), 200U);
  EXPECT_EQ(a.train.features, b.train.features);
  EXPECT_EQ(a.dev.outcome, b.dev.outcome);
  const Splits c = Split(d, {0.6, 0.2, 0.2, 12});
  EXPECT_FALSE(a.train.features == c.train.features);
  EXPECT_THROW(Split(d, {0.6, 0.6, 0.0, 1}), InvalidArgument);
}

TEST(SplitTest, StandardizesContinuousFeaturesOnTrain) {
  const Dataset d = synth::Biased(0.5, 0.8, 0.1, 2, 2000, 4);
  const Splits s = Split(d, {0.8, 0.2, 0.0, 1});
  for (std::size_t f = 0; f < s.train.n_features(); ++f) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < s.train.n_rows(); ++i) {
      sum += s.train.features(i, f);
      sq += s.train.features(i, f) * s.train.features(i, f);
    }
    const double n = static_cast<double>(s.train.n_rows());
    if (s.train.feature_info[f].continuous) {
      EXPECT_NEAR(sum / n, 0.0, 1e-12);
      EXPECT_NEAR(sq / n, 1.0, 1e-9);
    } else {
      EXPECT_EQ(s.scaling.shift[f], 0.0);
      EXPECT_EQ(s.scaling.scale[f], 1.0);
    }
  }
}

TEST(SynthTest, SimpsonsCounts) {
  const OutcomeTable t = synth::Simpsons();
  EXPECT_EQ(t.grand_total(), 700.0);
  EXPECT_EQ(t.counts(t.space.CellId(std::vector<int>{0, 0}), 1), 81.0);
  EXPECT_EQ(t.totals[t.space.CellId(std::vector<int>{0, 0})], 87.0);
  const OutcomeTable g = Project(t, std::vector<std::size_t>{0});
  EXPECT_EQ(g.counts(0, 1), 273.0);
  EXPECT_EQ(g.totals[0], 350.0);
  EXPECT_EQ(g.counts(1, 1), 289.0);
  const Dataset d = synth::SimpsonsDataset();
  EXPECT_EQ(d.n_rows(), 700U);
}

TEST(SynthTest, GaussianHiringClosedForm) {
  const ProbTable p = synth::GaussianHiringProbs(10, 12, 1, 10.5);
  EXPECT_NEAR(p.probs(0, 1), 0.3085, 5e-5);
  EXPECT_NEAR(p.probs(1, 1), 0.9332, 5e-5);
  EXPECT_NEAR(EpsilonDf(p).epsilon, 2.337, 5e-4);
  const ProbTable q = synth::GaussianHiringProbs(11, 11, 2, 10.5);
  EXPECT_EQ(EpsilonDf(q).epsilon, 0.0);
  EXPECT_THROW(synth::GaussianHiring(10, 12, 0.0, 10.5, 10, 1), InvalidArgument);
}

TEST(SynthTest, BiasedExactTable) {
  const ProbTable p = synth::BiasedProbs(0.5, 0.8, 0.1);
  EXPECT_NEAR(EpsilonDf(p).epsilon, std::log(0.8 / 0.1), 1e-12);
  EXPECT_NEAR(EpsilonDf(p).epsilon, 2.0794, 5e-4);
  EXPECT_EQ(EpsilonDf(synth::BiasedProbs(0.3, 0.4, 0.4)).epsilon, 0.0);
  const ProbTable q = synth::BiasedProbs(0.1, 0.8, 0.1);
  const auto groups = EnumerateSubgroups(q.space, SubgroupMode::kAllLevels);
  const GammaResult g = GammaSf(q, groups, 1);
  for (double v : g.per_group) EXPECT_NEAR(v, 0.063, 1e-12);
  EXPECT_THROW(synth::BiasedProbs(1.5, 0.8, 0.1), InvalidArgument);
}

TEST(SynthTest, BiasedSamplesAreDeterministic) {
  const Dataset a = synth::Biased(0.5, 0.8, 0.1, 3, 500, 9);
  const Dataset b = synth::Biased(0.5, 0.8, 0.1, 3, 500, 9);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.n_features(), 3U + 2U);  // x1..x3 plus the group one-hot
}

}  // namespace
}  // namespace dfair
