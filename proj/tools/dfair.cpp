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

// dfair: audit datasets and classifiers for differential fairness, train
// fairness-penalized classifiers, generate synthetic scenarios and run the
// randomized property checks.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dfair/cli/commands.hpp"

namespace {

void AddSchemaFlags(CLI::App* cmd, std::string& data, std::string& schema,
                    std::vector<std::string>& prot, std::string& outcome,
                    std::string& positive) {
  cmd->add_option("--data", data, "CSV file")->required();
  cmd->add_option("--schema", schema, "Schema JSON file")->required();
  cmd->add_option("--protected", prot, "Protected columns, overriding the schema")
      ->delimiter(',');
  cmd->add_option("--outcome", outcome, "Outcome column, overriding the schema");
  cmd->add_option("--positive", positive, "Positive outcome label");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential fairness audits and fair training"};
  app.set_version_flag("--version", std::string(dfair::kVersion));
  app.require_subcommand(1);

  dfair::cli::AuditArgs audit;
  CLI::App* a = app.add_subcommand("audit", "Audit a dataset, optionally with a model");
  AddSchemaFlags(a, audit.data, audit.schema, audit.protected_columns, audit.outcome,
                 audit.positive);
  a->add_option("--out", audit.out, "Report JSON path");
  a->add_option("--groups-out", audit.groups_out, "Per-group CSV path");
  a->add_option("--estimator", audit.estimator, "empirical | smoothed | soft")
      ->check(CLI::IsMember({"empirical", "smoothed", "soft"}));
  a->add_option("--alpha", audit.alpha, "Dirichlet smoothing concentration");
  a->add_option("--confounder", audit.confounder, "Confounder column for DFC");
  a->add_option("--metric", audit.metric, "df | sf | both")
      ->check(CLI::IsMember({"df", "sf", "both"}));
  a->add_option("--model", audit.model, "Model checkpoint");
  a->add_option("--seed", audit.seed, "Recorded in the report metadata");

  dfair::cli::TrainArgs train;
  CLI::App* t = app.add_subcommand("train", "Train a classifier with a fairness penalty");
  AddSchemaFlags(t, train.data, train.schema, train.protected_columns, train.outcome,
                 train.positive);
  t->add_option("--out", train.out, "Output directory")->required();
  t->add_option("--penalty", train.penalty, "none | df | sf")
      ->check(CLI::IsMember({"none", "df", "sf"}));
  t->add_option("--target", train.target, "Fairness target (epsilon or gamma)");
  t->add_option("--lambda", train.lambda, "Penalty weight (default 0.1 df, 1.0 sf)");
  t->add_option("--alpha", train.alpha, "Smoothing for the soft-count estimator");
  t->add_option("--iterations", train.iterations);
  t->add_option("--burn-in", train.burn_in);
  t->add_option("--lr", train.learning_rate);
  t->add_option("--eval-every", train.eval_every);
  t->add_option("--seed", train.seed);
  t->add_option("--dev-fraction", train.dev_fraction);
  t->add_option("--arch", train.arch, "logistic | mlp")
      ->check(CLI::IsMember({"logistic", "mlp"}));
  t->add_option("--layers", train.hidden_layers, "Hidden layers (mlp)");
  t->add_option("--width", train.hidden_width, "Hidden width (mlp)");

  dfair::cli::SynthArgs synth;
  CLI::App* s = app.add_subcommand("synth", "Write a synthetic dataset and its schema");
  s->add_option("kind", synth.kind, "gaussian | simpsons | biased")->required();
  s->add_option("--out", synth.out, "CSV path")->required();
  s->add_option("--n", synth.n, "Rows (gaussian, biased)");
  s->add_option("--seed", synth.seed);
  s->add_option("--mu1", synth.mu1);
  s->add_option("--mu2", synth.mu2);
  s->add_option("--sigma", synth.sigma);
  s->add_option("--threshold", synth.threshold);
  s->add_option("--p-minority", synth.p_minority);
  s->add_option("--p-pos-majority", synth.p_pos_majority);
  s->add_option("--p-pos-minority", synth.p_pos_minority);
  s->add_option("--features", synth.n_features);

  dfair::cli::CheckArgs check;
  CLI::App* c = app.add_subcommand("check", "Run the randomized property suite");
  c->add_option("--trials", check.trials, "Trials per property");
  c->add_option("--seed", check.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dfair::cli::kExitInputError;
  }
  if (a->parsed()) return dfair::cli::CmdAudit(audit, std::cout, std::cerr);
  if (t->parsed()) return dfair::cli::CmdTrain(train, std::cout, std::cerr);
  if (s->parsed()) return dfair::cli::CmdSynth(synth, std::cout, std::cerr);
  return dfair::cli::CmdCheck(check, std::cout, std::cerr);
}
