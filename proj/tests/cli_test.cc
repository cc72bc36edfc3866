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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dfair/cli/commands.hpp"
#include "json.hpp"

namespace dfair::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("dfair_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static json Load(const std::string& path) { return json::parse(Slurp(path)); }

  void Synth(const std::string& kind, const std::string& name, std::size_t n = 2000) {
    SynthArgs s;
    s.kind = kind;
    s.out = Path(name + ".csv");
    s.n = n;
    s.seed = 5;
    ASSERT_EQ(CmdSynth(s, out_, err_), kExitOk) << err_.str();
  }

  AuditArgs Audit(const std::string& name, const std::string& report) {
    AuditArgs a;
    a.data = Path(name + ".csv");
    a.schema = Path(name + ".schema.json");
    a.out = Path(report);
    return a;
  }

  TrainArgs TrainOn(const std::string& name, const std::string& out, const std::string& penalty) {
    TrainArgs t;
    t.data = Path(name + ".csv");
    t.schema = Path(name + ".schema.json");
    t.out = Path(out);
    t.penalty = penalty;
    t.arch = "mlp";
    t.hidden_layers = 2;
    t.hidden_width = 8;
    t.iterations = 300;
    t.burn_in = 30;
    t.seed = 2;
    return t;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, SimpsonsAuditReproducesKnownValues) {
  Synth("simpsons", "simp");
  ASSERT_EQ(CmdAudit(Audit("simp", "r.json"), out_, err_), kExitOk) << err_.str();
  const json r = Load(Path("r.json"));
  EXPECT_NEAR(r["epsilon_overall"].get<double>(), 1.511, 5e-4);
  const json& eps = r["intersectionality"]["epsilon"];
  ASSERT_EQ(eps.size(), 3U);
  EXPECT_EQ(eps[0]["attributes"], "gender");
  EXPECT_NEAR(eps[0]["value"].get<double>(), 0.2329, 5e-4);
  EXPECT_EQ(eps[1]["attributes"], "race");
  EXPECT_NEAR(eps[1]["value"].get<double>(), 0.8667, 5e-4);
  EXPECT_EQ(r["metadata"]["command"], "audit");
  EXPECT_TRUE(r["blocks"].contains("data"));
  EXPECT_TRUE(fs::exists(Path("r.groups.csv")));
  EXPECT_EQ(Slurp(Path("r.groups.csv")).substr(0, 33), "group_tuple,size,weight,epsilon,g");
}

TEST_F(CliTest, ReportsAreByteIdenticalAcrossRuns) {
  Synth("gaussian", "g");
  AuditArgs a = Audit("g", "a.json");
  a.estimator = "smoothed";
  ASSERT_EQ(CmdAudit(a, out_, err_), kExitOk) << err_.str();
  a.out = Path("b.json");
  ASSERT_EQ(CmdAudit(a, out_, err_), kExitOk) << err_.str();
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  EXPECT_EQ(Slurp(Path("a.groups.csv")), Slurp(Path("b.groups.csv")));
}

TEST_F(CliTest, BadLabelNamesLineAndColumn) {
  Synth("simpsons", "simp");
  std::string csv = Slurp(Path("simp.csv"));
  const std::size_t third = csv.find('\n', csv.find('\n', csv.find('\n') + 1) + 1);
  const std::size_t line_end = csv.find('\n', third + 1);
  csv.replace(third + 1, line_end - third - 1, "A,1,maybe");
  std::ofstream(Path("simp.csv"), std::ios::binary) << csv;
  EXPECT_EQ(CmdAudit(Audit("simp", "r.json"), out_, err_), kExitInputError);
  const std::string msg = err_.str();
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("admitted"), std::string::npos) << msg;
  EXPECT_FALSE(fs::exists(Path("r.json")));
}

TEST_F(CliTest, MissingInputsAreInputErrors) {
  AuditArgs a;
  EXPECT_EQ(CmdAudit(a, out_, err_), kExitInputError);
  a.data = Path("nope.csv");
  a.schema = Path("nope.json");
  EXPECT_EQ(CmdAudit(a, out_, err_), kExitInputError);
  SynthArgs s;
  s.kind = "bogus";
  s.out = Path("x.csv");
  EXPECT_EQ(CmdSynth(s, out_, err_), kExitInputError);
}

TEST_F(CliTest, SoftEstimatorNeedsModel) {
  Synth("simpsons", "simp");
  AuditArgs a = Audit("simp", "r.json");
  a.estimator = "soft";
  EXPECT_EQ(CmdAudit(a, out_, err_), kExitInputError);
}

TEST_F(CliTest, CheckZeroTrialsIsInputError) {
  CheckArgs c;
  c.trials = 0;
  EXPECT_EQ(CmdCheck(c, out_, err_), kExitInputError);
}

TEST_F(CliTest, CheckIsDeterministic) {
  CheckArgs c;
  c.trials = 20;
  c.seed = 9;
  std::ostringstream a, b;
  const int ra = CmdCheck(c, a, err_);
  const int rb = CmdCheck(c, b, err_);
  EXPECT_EQ(ra, rb);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("intersectionality"), std::string::npos);
}

TEST_F(CliTest, OverridesSelectColumns) {
  Synth("simpsons", "simp");
  AuditArgs a = Audit("simp", "r.json");
  a.protected_columns = {"race"};
  ASSERT_EQ(CmdAudit(a, out_, err_), kExitOk) << err_.str();
  EXPECT_NEAR(Load(Path("r.json"))["epsilon_overall"].get<double>(), 0.8667, 5e-4);
}

TEST_F(CliTest, DfTrainingReducesEpsilon) {
  Synth("biased", "b");
  TrainArgs t = TrainOn("b", "df", "df");
  t.lambda = 1.0;
  ASSERT_EQ(CmdTrain(t, out_, err_), kExitOk) << err_.str();
  const json before = Load(Path("df/report_before.json"));
  const json after = Load(Path("df/report_after.json"));
  EXPECT_LT(after["epsilon_overall"].get<double>(), before["epsilon_overall"].get<double>());
  EXPECT_TRUE(after.contains("dev"));
  EXPECT_TRUE(fs::exists(Path("df/model.txt")));
  EXPECT_TRUE(fs::exists(Path("df/trace.csv")));

  // The saved checkpoint audits with the model's own predictions.
  AuditArgs a = Audit("b", "m.json");
  a.model = Path("df/model.txt");
  a.estimator = "soft";
  ASSERT_EQ(CmdAudit(a, out_, err_), kExitOk) << err_.str();
  const json m = Load(Path("m.json"));
  EXPECT_TRUE(m["blocks"].contains("model_hard"));
  EXPECT_TRUE(m["blocks"].contains("model_soft"));
}

TEST_F(CliTest, SfTrainingReducesGamma) {
  Synth("biased", "b");
  ASSERT_EQ(CmdTrain(TrainOn("b", "sf", "sf"), out_, err_), kExitOk) << err_.str();
  const json before = Load(Path("sf/report_before.json"));
  const json after = Load(Path("sf/report_after.json"));
  EXPECT_LT(after["gamma_overall"].get<double>(), before["gamma_overall"].get<double>());
}

TEST_F(CliTest, UnpenalizedTrainingReportsAmplification) {
  Synth("biased", "b");
  ASSERT_EQ(CmdTrain(TrainOn("b", "none", "none"), out_, err_), kExitOk) << err_.str();
  const json after = Load(Path("none/report_after.json"));
  ASSERT_TRUE(after["bias_amplification_df"].is_number());
  const double amp = after["bias_amplification_df"].get<double>();
  EXPECT_DOUBLE_EQ(amp, after["epsilon_overall"].get<double>() -
                            after["epsilon_data"].get<double>());
}

}  // namespace
}  // namespace dfair::cli
