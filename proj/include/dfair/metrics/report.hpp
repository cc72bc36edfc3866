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
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/data/csv.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/bounds.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/gamma.hpp"
#include "dfair/metrics/gini.hpp"
#include "dfair/metrics/intersectionality.hpp"
#include "dfair/metrics/prob_table.hpp"
#include "json.hpp"

namespace dfair {

struct GroupRow {
  std::string name;
  std::size_t level = 0;  // number of attributes fixed by the group
  bool bottom = false;    // an intersectional cell
  double size = 0.0;      // N_g
  double weight = 0.0;    // P(g)
  std::optional<double> epsilon;  // absent when the group is empty
  std::optional<double> gamma;
};

struct FairnessReport {
  EstimatorSpec estimator;
  std::string estimator_counts = "hard";  // "hard" or "soft"
  std::size_t positive_outcome = 1;

  bool has_df = true;
  double epsilon_overall = 0.0;
  EpsilonResult epsilon_witness;
  std::string witness_outcome, witness_cell_max, witness_cell_min;

  bool has_sf = true;
  double gamma_overall = 0.0;
  std::string gamma_worst_group;

  std::vector<GroupRow> groups;
  std::optional<double> bias_amplification_df;
  std::optional<double> bias_amplification_sf;
  std::optional<double> dfc_epsilon;
  std::vector<std::pair<std::string, double>> dfc_per_stratum;
  std::vector<std::string> dfc_skipped;
  std::optional<double> gini_df, gini_sf;
  bool gini_df_degenerate = false, gini_sf_degenerate = false;
  bool eighty_pct_pass = false;
  double eighty_pct_worst_ratio = 0.0;
  std::vector<std::string> empty_cells;
  std::vector<SubsetMeasurement> intersectionality_epsilon;
  std::vector<SubsetMeasurement> intersectionality_gamma;
};

struct ReportOptions {
  EstimatorSpec estimator;
  bool soft_counts = false;
  std::size_t positive = 1;
  bool compute_df = true;
  bool compute_sf = true;
  // Report of the data the mechanism was trained on; enables bias
  // amplification. Must have been computed with the same estimator.
  const FairnessReport* baseline = nullptr;
  std::span<const Stratum> strata;
};

inline FairnessReport BuildReport(const OutcomeTable& table, const ReportOptions& opt) {
  table.Validate();
  const ProbTable probs = TableToProbs(table, opt.estimator);
  if (probs.num_supported() < 2) {
    throw DomainError("audit needs at least 2 non-empty intersectional cells, found " +
                      std::to_string(probs.num_supported()));
  }
  if (opt.positive >= table.n_outcomes) throw InvalidArgument("positive outcome out of range");

  FairnessReport r;
  r.estimator = opt.estimator;
  r.estimator_counts = opt.soft_counts ? "soft" : "hard";
  r.positive_outcome = opt.positive;
  r.has_df = opt.compute_df;
  r.has_sf = opt.compute_sf;
  for (std::size_t s : table.empty_cells()) r.empty_cells.push_back(table.space.CellName(s));

  const SubgroupCollection groups = EnumerateSubgroups(table.space, SubgroupMode::kAllLevels);
  const GammaResult gamma = GammaSf(probs, groups, opt.positive);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const GroupIndicator& ind = groups.indicators[g];
    GroupRow row;
    row.name = ind.Name(table.space);
    row.level = ind.attributes.size();
    row.bottom = row.level == table.space.num_attributes();
    for (std::size_t s = 0; s < table.num_cells(); ++s) {
      if (ind.Contains(table.space, s)) row.size += table.totals[s];
    }
    row.weight = gamma.group_mass[g];
    if (!gamma.zero_mass[g] && opt.compute_sf) row.gamma = gamma.per_group[g];
    r.groups.push_back(std::move(row));
  }

  if (opt.compute_df) {
    r.epsilon_witness = EpsilonDf(probs);
    r.epsilon_overall = r.epsilon_witness.epsilon;
    r.witness_outcome = table.outcome_labels[r.epsilon_witness.outcome];
    r.witness_cell_max = table.space.CellName(r.epsilon_witness.cell_max);
    r.witness_cell_min = table.space.CellName(r.epsilon_witness.cell_min);
    const auto bottom = EpsilonPerGroup(probs);
    // Higher-level groups: hold the group fixed against the other cells of
    // its own attribute subset.
    std::vector<std::size_t> current;
    ProbTable projected;
    std::map<std::size_t, double> projected_eps;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const GroupIndicator& ind = groups.indicators[g];
      if (gamma.zero_mass[g]) continue;
      if (r.groups[g].bottom) {
        r.groups[g].epsilon = bottom.at(table.space.CellId(ind.values));
        continue;
      }
      if (ind.attributes != current) {
        current = ind.attributes;
        projected = ProjectProbs(probs, current);
        projected_eps.clear();
        if (projected.num_supported() >= 2) projected_eps = EpsilonPerGroup(projected);
      }
      const std::size_t cell = projected.space.CellId(ind.values);
      auto it = projected_eps.find(cell);
      r.groups[g].epsilon = it == projected_eps.end() ? 0.0 : it->second;
    }
    std::vector<double> values, weights;
    bool finite = true;
    for (std::size_t s = 0; s < table.num_cells(); ++s) {
      if (!probs.support[s]) continue;
      values.push_back(bottom.at(s));
      weights.push_back(probs.group_weights[s]);
      finite &= std::isfinite(bottom.at(s));
    }
    if (finite) {
      const GiniResult gd = Gini(values, weights);
      r.gini_df = gd.value;
      r.gini_df_degenerate = gd.degenerate;
    }
    if (table.space.num_attributes() >= 2) {
      r.intersectionality_epsilon = AuditEpsilonMonotonicity(table, opt.estimator);
    }
  }

  if (opt.compute_sf) {
    r.gamma_overall = gamma.gamma;
    r.gamma_worst_group = r.groups[gamma.worst].name;
    std::vector<double> values, weights;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!r.groups[g].bottom || gamma.zero_mass[g]) continue;
      values.push_back(gamma.per_group[g]);
      weights.push_back(gamma.group_mass[g]);
    }
    const GiniResult gs = Gini(values, weights);
    r.gini_sf = gs.value;
    r.gini_sf_degenerate = gs.degenerate;
    if (table.space.num_attributes() >= 2) {
      r.intersectionality_gamma = AuditGammaMonotonicity(table, opt.positive);
    }
  }

  const EightyPercentResult rule = EightyPercentRule(probs, opt.positive);
  r.eighty_pct_pass = rule.pass;
  r.eighty_pct_worst_ratio = rule.worst_ratio;

  if (opt.baseline != nullptr) {
    if (opt.compute_df && opt.baseline->has_df) {
      auto b = BiasAmplificationOf(r.epsilon_overall, opt.baseline->epsilon_overall);
      if (b.defined) r.bias_amplification_df = b.value;
    }
    if (opt.compute_sf && opt.baseline->has_sf) {
      r.bias_amplification_sf = r.gamma_overall - opt.baseline->gamma_overall;
    }
  }

  if (!opt.strata.empty()) {
    const DfcResult dfc = EpsilonDfc(opt.strata, opt.estimator);
    r.dfc_epsilon = dfc.epsilon;
    r.dfc_per_stratum = dfc.per_stratum;
    r.dfc_skipped = dfc.skipped;
  }
  return r;
}

namespace internal {

// JSON has no infinity; unbounded values are written as the string "inf".
inline nlohmann::json JsonNumber(double x) {
  if (std::isfinite(x)) return x;
  return FormatDouble(x);
}

inline nlohmann::json JsonOptional(const std::optional<double>& x) {
  return x ? JsonNumber(*x) : nlohmann::json(nullptr);
}

inline nlohmann::json SubsetRows(const std::vector<SubsetMeasurement>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : rows) {
    nlohmann::json row = {{"attributes", m.name},
                          {"value", JsonNumber(m.value)},
                          {"violated", m.violated}};
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace internal

// Field names follow the FairnessReport members.
inline nlohmann::json ReportToJson(const FairnessReport& r) {
  using internal::JsonNumber;
  using internal::JsonOptional;
  nlohmann::json j;
  j["estimator"] = {{"kind", ToString(r.estimator.kind)},
                    {"alpha", r.estimator.smoothed() ? nlohmann::json(r.estimator.alpha)
                                                     : nlohmann::json(nullptr)},
                    {"counts", r.estimator_counts}};
  nlohmann::json eps_groups = nlohmann::json::object();
  nlohmann::json gamma_groups = nlohmann::json::object();
  for (const GroupRow& g : r.groups) {
    if (g.epsilon) eps_groups[g.name] = JsonNumber(*g.epsilon);
    if (g.gamma) gamma_groups[g.name] = JsonNumber(*g.gamma);
  }
  if (r.has_df) {
    j["epsilon_overall"] = JsonNumber(r.epsilon_overall);
    j["epsilon_witness"] = {{"outcome", r.witness_outcome},
                            {"cell_max", r.witness_cell_max},
                            {"cell_min", r.witness_cell_min}};
    j["epsilon_per_group"] = std::move(eps_groups);
  } else {
    j["epsilon_overall"] = nullptr;
    j["epsilon_per_group"] = nullptr;
  }
  if (r.has_sf) {
    j["gamma_overall"] = JsonNumber(r.gamma_overall);
    j["gamma_worst_group"] = r.gamma_worst_group;
    j["gamma_per_group"] = std::move(gamma_groups);
  } else {
    j["gamma_overall"] = nullptr;
    j["gamma_per_group"] = nullptr;
  }
  j["bias_amplification_df"] = JsonOptional(r.bias_amplification_df);
  j["bias_amplification_sf"] = JsonOptional(r.bias_amplification_sf);
  j["dfc_epsilon"] = JsonOptional(r.dfc_epsilon);
  if (r.dfc_epsilon) {
    nlohmann::json strata = nlohmann::json::object();
    for (const auto& [label, e] : r.dfc_per_stratum) strata[label] = JsonNumber(e);
    j["dfc_per_stratum"] = std::move(strata);
    j["dfc_skipped_strata"] = r.dfc_skipped;
  }
  j["gini_df"] = JsonOptional(r.gini_df);
  j["gini_sf"] = JsonOptional(r.gini_sf);
  j["eighty_pct_pass"] = r.eighty_pct_pass;
  j["eighty_pct_worst_ratio"] = JsonNumber(r.eighty_pct_worst_ratio);
  j["empty_cells"] = r.empty_cells;
  if (!r.intersectionality_epsilon.empty() || !r.intersectionality_gamma.empty()) {
    j["intersectionality"] = {
        {"epsilon", internal::SubsetRows(r.intersectionality_epsilon)},
        {"gamma", internal::SubsetRows(r.intersectionality_gamma)}};
  }
  return j;
}

// One row per group at every level: group_tuple,size,weight,epsilon,gamma.
inline void WriteGroupCsv(const FairnessReport& r, std::ostream& out) {
  csv::WriteRow(out, {"group_tuple", "size", "weight", "epsilon", "gamma"});
  for (const GroupRow& g : r.groups) {
    csv::WriteRow(out, {g.name, FormatDouble(g.size), FormatDouble(g.weight),
                        g.epsilon ? FormatDouble(*g.epsilon) : "",
                        g.gamma ? FormatDouble(*g.gamma) : ""});
  }
}

}  // namespace dfair
