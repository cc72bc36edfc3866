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

// Command implementations behind the dfair tool. Each returns the process
// exit code: 0 success, 1 property failure, 2 input error. Diagnostics go to
// `err`, summaries to `out`.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dfair/check/property_suite.hpp"
#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/data/schema.hpp"
#include "dfair/data/synth.hpp"
#include "dfair/groups/build_table.hpp"
#include "dfair/metrics/report.hpp"
#include "dfair/model/checkpoint.hpp"
#include "dfair/model/classifier.hpp"
#include "dfair/train/penalty.hpp"
#include "dfair/train/trainer.hpp"

namespace dfair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;

struct AuditArgs {
  std::string data;
  std::string schema;
  std::string out;         // report JSON; empty writes nothing
  std::string groups_out;  // per-group CSV; defaults to <out stem>.groups.csv
  std::vector<std::string> protected_columns;  // overrides the schema
  std::string outcome;                         // overrides the schema
  std::string positive;                        // overrides the schema
  std::string estimator = "empirical";         // empirical | smoothed | soft
  double alpha = 1.0;
  std::string confounder;
  std::string metric = "both";  // df | sf | both
  std::string model;
  std::uint64_t seed = 0;
};

struct TrainArgs {
  std::string data;
  std::string schema;
  std::string out;  // output directory
  std::vector<std::string> protected_columns;
  std::string outcome;
  std::string positive;
  std::string penalty = "df";  // none | df | sf
  double target = 0.0;
  std::optional<double> lambda;  // default 0.1 for df, 1.0 for sf
  double alpha = 1.0;
  std::size_t iterations = 500;
  std::size_t burn_in = 50;
  double learning_rate = 0.01;
  std::size_t eval_every = 10;
  std::uint64_t seed = 0;
  double dev_fraction = 0.2;
  std::string arch = "mlp";  // logistic | mlp
  std::size_t hidden_layers = 3;
  std::size_t hidden_width = 16;
};

struct SynthArgs {
  std::string kind;  // gaussian | simpsons | biased
  std::string out;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  double mu1 = 10.0, mu2 = 12.0, sigma = 1.0, threshold = 10.5;
  double p_minority = 0.5, p_pos_majority = 0.8, p_pos_minority = 0.1;
  std::size_t n_features = 4;
};

struct CheckArgs {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

namespace internal {

inline void ApplyOverrides(Schema& schema, const std::vector<std::string>& protected_columns,
                           const std::string& outcome, const std::string& positive) {
  auto require_column = [&](const std::string& name) -> ColumnSpec& {
    auto idx = schema.find(name);
    if (!idx) throw SchemaError("unknown column '" + name + "'");
    return schema.columns[*idx];
  };
  if (!outcome.empty()) {
    ColumnSpec& target = require_column(outcome);
    for (ColumnSpec& c : schema.columns) {
      if (c.kind == ColumnKind::kOutcome) c.kind = ColumnKind::kIgnore;
    }
    target.kind = ColumnKind::kOutcome;
  }
  if (!protected_columns.empty()) {
    for (ColumnSpec& c : schema.columns) {
      if (c.kind != ColumnKind::kProtected) continue;
      c.kind = c.model_input ? ColumnKind::kCategorical : ColumnKind::kIgnore;
    }
    for (const std::string& name : protected_columns) {
      ColumnSpec& c = require_column(name);
      if (c.kind == ColumnKind::kOutcome) {
        throw SchemaError("column '" + name + "' cannot be both outcome and protected");
      }
      c.kind = ColumnKind::kProtected;
    }
  }
  if (!positive.empty()) schema.outcome_positive_label = positive;
  schema.Validate();
}

inline Schema LoadSchemaWithOverrides(const std::string& path,
                                      const std::vector<std::string>& protected_columns,
                                      const std::string& outcome,
                                      const std::string& positive) {
  Schema schema = LoadSchema(path);
  ApplyOverrides(schema, protected_columns, outcome, positive);
  return schema;
}

inline EstimatorSpec ParseEstimator(const std::string& name, double alpha) {
  if (name == "empirical") return EstimatorSpec::Empirical();
  if (name == "smoothed") return EstimatorSpec::Smoothed(alpha);
  if (name == "soft") return EstimatorSpec::SoftSmoothed(alpha);
  throw InvalidArgument("unknown estimator '" + name + "' (empirical, smoothed, soft)");
}

inline PenaltyKind ParsePenalty(const std::string& name) {
  if (name == "none") return PenaltyKind::kNone;
  if (name == "df") return PenaltyKind::kDf;
  if (name == "sf") return PenaltyKind::kSf;
  throw InvalidArgument("unknown penalty '" + name + "' (none, df, sf)");
}

// One outcome table per value of `column`, built from labels or from the
// model's predictions on each row.
inline std::vector<Stratum> StrataFor(const Dataset& data, const std::string& column,
                                      const Matrix* probs, bool soft) {
  auto idx = data.schema.find(column);
  if (!idx) throw SchemaError("unknown confounder column '" + column + "'");
  const ColumnSpec& spec = data.schema.columns[*idx];
  if (spec.kind == ColumnKind::kProtected || spec.kind == ColumnKind::kOutcome ||
      !spec.has_alphabet()) {
    throw SchemaError("confounder '" + column +
                      "' must be a categorical column outside the protected attributes");
  }
  std::vector<Stratum> strata;
  for (const std::string& v : spec.values) strata.push_back({column + "=" + v, EmptyTableFor(data)});
  std::vector<int> hard;
  if (probs != nullptr && !soft) hard = PredictClasses(*probs);
  const auto& codes = data.columns[*idx].codes;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    OutcomeTable& t = strata[static_cast<std::size_t>(codes[i])].table;
    const std::size_t s = data.group_index[i];
    if (probs == nullptr) {
      t.Add(s, static_cast<std::size_t>(data.outcome[i]), 1.0);
    } else if (!soft) {
      t.Add(s, static_cast<std::size_t>(hard[i]), 1.0);
    } else {
      for (std::size_t y = 0; y < data.n_outcomes; ++y) t.counts(s, y) += (*probs)(i, y);
      t.totals[s] += 1.0;
    }
  }
  return strata;
}

inline void WriteJsonFile(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline std::string StemOf(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".json" || ext == ".csv") return path.substr(0, path.size() - ext.size());
  return path;
}

inline nlohmann::json Metadata(const std::string& command, const EstimatorSpec& est,
                               std::uint64_t seed) {
  return {{"tool", "dfair"},
          {"version", kVersion},
          {"command", command},
          {"estimator", ToString(est.kind)},
          {"alpha", est.smoothed() ? nlohmann::json(est.alpha) : nlohmann::json(nullptr)},
          {"seed", seed}};
}

inline std::string Num(double x) { return FormatDouble(x); }

inline void PrintSummary(const FairnessReport& r, const std::string& title, std::ostream& out) {
  out << title << ":\n";
  if (r.has_df) {
    out << "  epsilon " << Num(r.epsilon_overall) << " (outcome " << r.witness_outcome << ", "
        << r.witness_cell_max << " vs " << r.witness_cell_min << ")\n";
  }
  if (r.has_sf) {
    out << "  gamma " << Num(r.gamma_overall) << " (" << r.gamma_worst_group << ")\n";
  }
  out << "  80% rule " << (r.eighty_pct_pass ? "pass" : "fail") << " (ratio "
      << Num(r.eighty_pct_worst_ratio) << ")\n";
  if (r.gini_df) out << "  gini(epsilon) " << Num(*r.gini_df) << "\n";
  if (r.gini_sf) out << "  gini(gamma) " << Num(*r.gini_sf) << "\n";
  if (r.dfc_epsilon) out << "  dfc epsilon " << Num(*r.dfc_epsilon) << "\n";
  if (r.bias_amplification_df) out << "  bias amplification (df) " << Num(*r.bias_amplification_df) << "\n";
  if (r.bias_amplification_sf) out << "  bias amplification (sf) " << Num(*r.bias_amplification_sf) << "\n";
  for (const auto& m : r.intersectionality_epsilon) {
    out << "  epsilon(" << m.name << ") " << Num(m.value) << (m.violated ? " VIOLATION" : "")
        << "\n";
  }
  for (const auto& m : r.intersectionality_gamma) {
    out << "  gamma(" << m.name << ") " << Num(m.value) << (m.violated ? " VIOLATION" : "")
        << "\n";
  }
  if (!r.empty_cells.empty()) {
    out << "  empty cells:";
    for (const auto& c : r.empty_cells) out << ' ' << c;
    out << "\n";
  }
}

// Runs `body`, mapping library exceptions to the input-error exit code.
template <typename F>
int Guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace internal

// --- audit -------------------------------------------------------------------

inline int CmdAudit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  return internal::Guarded(err, [&] {
    if (a.data.empty() || a.schema.empty()) throw InvalidArgument("--data and --schema are required");
    if (a.metric != "df" && a.metric != "sf" && a.metric != "both") {
      throw InvalidArgument("unknown metric '" + a.metric + "' (df, sf, both)");
    }
    const EstimatorSpec est = internal::ParseEstimator(a.estimator, a.alpha);
    if (est.kind == EstimatorKind::kSoftSmoothed && a.model.empty()) {
      throw InvalidArgument("the soft estimator needs --model");
    }
    const Schema schema =
        internal::LoadSchemaWithOverrides(a.schema, a.protected_columns, a.outcome, a.positive);
    Dataset data = LoadCsv(a.data, schema);

    ReportOptions opt;
    opt.positive = static_cast<std::size_t>(schema.positive_index());
    opt.compute_df = a.metric != "sf";
    opt.compute_sf = a.metric != "df";

    // Labels are one-hot, so hard and soft counts coincide; the data block
    // uses the hard-count form of the requested estimator.
    opt.estimator = est.kind == EstimatorKind::kSoftSmoothed ? EstimatorSpec::Smoothed(est.alpha) : est;
    const OutcomeTable data_table = BuildTable(data, TableSource::kLabels);
    std::vector<Stratum> data_strata;
    if (!a.confounder.empty()) {
      data_strata = internal::StrataFor(data, a.confounder, nullptr, false);
      opt.strata = data_strata;
    }
    const FairnessReport data_report = BuildReport(data_table, opt);

    nlohmann::json doc;
    nlohmann::json blocks;
    blocks["data"] = ReportToJson(data_report);
    const FairnessReport* primary = &data_report;
    const OutcomeTable* primary_table = &data_table;
    std::optional<FairnessReport> hard_report, soft_report;
    OutcomeTable hard_table, soft_table;
    if (!a.model.empty()) {
      const Checkpoint ckpt = LoadCheckpoint(a.model);
      if (!ckpt.scaling.empty()) ckpt.scaling.Apply(data.features);
      hard_table = BuildTable(data, TableSource::kClassifierHard, &ckpt.model);
      soft_table = BuildTable(data, TableSource::kClassifierSoft, &ckpt.model);
      const Matrix probs = Forward(ckpt.model, data.features);
      std::vector<Stratum> hard_strata, soft_strata;
      if (!a.confounder.empty()) {
        hard_strata = internal::StrataFor(data, a.confounder, &probs, false);
        soft_strata = internal::StrataFor(data, a.confounder, &probs, true);
      }
      ReportOptions mo = opt;
      mo.baseline = &data_report;
      mo.estimator = est.kind == EstimatorKind::kSoftSmoothed ? EstimatorSpec::Smoothed(est.alpha) : est;
      mo.strata = hard_strata;
      hard_report = BuildReport(hard_table, mo);
      mo.estimator = EstimatorSpec::SoftSmoothed(est.alpha);
      mo.soft_counts = true;
      mo.strata = soft_strata;
      soft_report = BuildReport(soft_table, mo);
      blocks["model_hard"] = ReportToJson(*hard_report);
      blocks["model_soft"] = ReportToJson(*soft_report);
      blocks["model_hard"]["accuracy"] = Accuracy(probs, data.outcome);
      const bool soft_primary = est.kind == EstimatorKind::kSoftSmoothed;
      primary = soft_primary ? &*soft_report : &*hard_report;
      primary_table = soft_primary ? &soft_table : &hard_table;
    }

    doc = ReportToJson(*primary);
    doc["metadata"] = internal::Metadata("audit", est, a.seed);
    doc["metadata"]["data"] = a.data;
    doc["metadata"]["positive_label"] = schema.outcome_positive_label;
    if (!a.model.empty()) doc["metadata"]["model"] = a.model;
    if (!a.confounder.empty()) doc["metadata"]["confounder"] = a.confounder;
    doc["blocks"] = std::move(blocks);
    doc["outcome_table"] = primary_table->ToText();

    if (!a.out.empty()) {
      internal::WriteJsonFile(doc, a.out);
      const std::string groups =
          a.groups_out.empty() ? internal::StemOf(a.out) + ".groups.csv" : a.groups_out;
      std::ofstream g(groups, std::ios::binary);
      if (!g) throw Error("cannot write '" + groups + "'");
      WriteGroupCsv(*primary, g);
    }
    out << "rows " << data.n_rows() << ", cells " << data.space.num_cells() << "\n";
    internal::PrintSummary(data_report, "data", out);
    if (hard_report) internal::PrintSummary(*hard_report, "model (hard)", out);
    if (soft_report) internal::PrintSummary(*soft_report, "model (soft)", out);
    return kExitOk;
  });
}

// --- train -------------------------------------------------------------------

inline int CmdTrain(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  return internal::Guarded(err, [&] {
    if (a.data.empty() || a.schema.empty() || a.out.empty()) {
      throw InvalidArgument("--data, --schema and --out are required");
    }
    const PenaltyKind kind = internal::ParsePenalty(a.penalty);
    Architecture arch;
    if (a.arch == "logistic") {
      arch = Architecture::Logistic();
    } else if (a.arch == "mlp") {
      arch = Architecture::Mlp(a.hidden_layers, a.hidden_width);
    } else {
      throw InvalidArgument("unknown architecture '" + a.arch + "' (logistic, mlp)");
    }
    const Schema schema =
        internal::LoadSchemaWithOverrides(a.schema, a.protected_columns, a.outcome, a.positive);
    const Dataset data = LoadCsv(a.data, schema);
    const std::size_t positive = static_cast<std::size_t>(schema.positive_index());

    PenaltySpec spec;
    switch (kind) {
      case PenaltyKind::kNone:
        spec = PenaltySpec::None();
        break;
      case PenaltyKind::kDf:
        spec = PenaltySpec::Df(a.target, a.lambda.value_or(0.1), a.alpha);
        break;
      case PenaltyKind::kSf:
        spec = PenaltySpec::Sf(a.target, a.lambda.value_or(1.0), positive);
        break;
    }
    spec.alpha = a.alpha;
    TrainConfig cfg;
    cfg.iterations = a.iterations;
    cfg.burn_in = a.burn_in;
    cfg.seed = a.seed;
    cfg.learning_rate = a.learning_rate;
    cfg.eval_every = a.eval_every;

    SplitSpec split{1.0 - a.dev_fraction, a.dev_fraction, 0.0, a.seed};
    const Splits parts = Split(data, split);
    const TrainResult result = Train(parts.train, parts.dev, arch, spec, cfg);

    std::filesystem::create_directories(a.out);
    const std::filesystem::path dir(a.out);
    SaveCheckpoint({result.model, parts.scaling}, (dir / "model.txt").string());
    {
      std::ofstream trace((dir / "trace.csv").string(), std::ios::binary);
      if (!trace) throw Error("cannot write trace.csv");
      result.trace.WriteCsv(trace);
    }

    // Before: the training labels under the penalty's estimator. After: the
    // classifier's soft counts on train and dev against that baseline.
    ReportOptions ro;
    ro.positive = positive;
    ro.estimator = EstimatorSpec::Smoothed(a.alpha);
    const FairnessReport before = BuildReport(BuildTable(parts.train, TableSource::kLabels), ro);
    const EstimatorSpec soft = EstimatorSpec::SoftSmoothed(a.alpha);

    nlohmann::json meta = internal::Metadata("train", soft, a.seed);
    meta["architecture"] = arch.ToString();
    meta["penalty"] = {{"kind", ToString(spec.kind)},
                       {"target", spec.target},
                       {"lambda", spec.lambda},
                       {"alpha", spec.alpha}};
    meta["iterations"] = cfg.iterations;
    meta["burn_in"] = cfg.burn_in;
    meta["learning_rate"] = cfg.learning_rate;
    meta["dev_fraction"] = a.dev_fraction;
    meta["data"] = a.data;

    nlohmann::json jb = ReportToJson(before);
    jb["metadata"] = meta;
    jb["metadata"]["estimator"] = ToString(ro.estimator.kind);
    jb["split"] = "train";
    internal::WriteJsonFile(jb, (dir / "report_before.json").string());

    ReportOptions ra;
    ra.positive = positive;
    ra.estimator = soft;
    ra.soft_counts = true;
    ra.baseline = &before;
    const FairnessReport after_train =
        BuildReport(BuildTable(parts.train, TableSource::kClassifierSoft, &result.model), ra);
    const double train_acc =
        Accuracy(Forward(result.model, parts.train.features), parts.train.outcome);
    nlohmann::json ja = ReportToJson(after_train);
    ja["split"] = "train";
    ja["accuracy"] = train_acc;
    ja["epsilon_data"] = dfair::internal::JsonNumber(before.epsilon_overall);
    ja["metadata"] = meta;
    std::optional<FairnessReport> after_dev;
    if (parts.dev.n_rows() > 0) {
      ReportOptions rd = ra;
      rd.baseline = nullptr;
      try {
        after_dev =
            BuildReport(BuildTable(parts.dev, TableSource::kClassifierSoft, &result.model), rd);
        nlohmann::json jd = ReportToJson(*after_dev);
        jd["accuracy"] = Accuracy(Forward(result.model, parts.dev.features), parts.dev.outcome);
        ja["dev"] = std::move(jd);
      } catch (const DomainError& e) {
        ja["dev"] = {{"error", e.what()}};
      }
    }
    internal::WriteJsonFile(ja, (dir / "report_after.json").string());

    internal::PrintSummary(before, "before (train labels)", out);
    internal::PrintSummary(after_train, "after (train, soft counts)", out);
    if (after_dev) internal::PrintSummary(*after_dev, "after (dev, soft counts)", out);
    out << "  train accuracy " << internal::Num(train_acc) << "\n";
    return kExitOk;
  });
}

// --- synth -------------------------------------------------------------------

inline int CmdSynth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  return internal::Guarded(err, [&] {
    if (a.out.empty()) throw InvalidArgument("--out is required");
    Dataset d;
    if (a.kind == "gaussian") {
      d = synth::GaussianHiring(a.mu1, a.mu2, a.sigma, a.threshold, a.n, a.seed);
    } else if (a.kind == "simpsons") {
      d = synth::SimpsonsDataset();
    } else if (a.kind == "biased") {
      d = synth::Biased(a.p_minority, a.p_pos_majority, a.p_pos_minority, a.n_features, a.n,
                        a.seed);
    } else {
      throw InvalidArgument("unknown synthetic kind '" + a.kind + "' (gaussian, simpsons, biased)");
    }
    WriteCsvFile(d, a.out);
    const std::string schema_path = internal::StemOf(a.out) + ".schema.json";
    SaveSchema(d.schema, schema_path);
    out << "wrote " << d.n_rows() << " rows to " << a.out << " (schema " << schema_path << ")\n";
    return kExitOk;
  });
}

// --- check -------------------------------------------------------------------

inline int CmdCheck(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  if (a.trials == 0) {
    err << "error: --trials must be at least 1\n";
    return kExitInputError;
  }
  return internal::Guarded(err, [&] {
    const auto results = check::RunAllProperties(a.trials, a.seed);
    bool ok = true;
    for (const auto& r : results) {
      out << std::left << std::setw(18) << r.name << " trials " << r.trials << " failures "
          << r.failures << " worst " << FormatDouble(r.worst) << ' '
          << (r.pass() ? "PASS" : "FAIL") << '\n';
      if (!r.pass()) {
        out << "  first failure: " << r.first_failure << '\n';
        ok = false;
      }
    }
    return ok ? kExitOk : kExitPropertyFailure;
  });
}

}  // namespace dfair::cli
