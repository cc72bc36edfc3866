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

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/groups/group_space.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/gamma.hpp"
#include "dfair/metrics/prob_table.hpp"

namespace dfair {

struct SubsetMeasurement {
  std::vector<std::size_t> attributes;
  std::string name;    // e.g. "gender,race"
  double value = 0.0;  // epsilon or gamma over the subset's cells
  bool pass = true;    // epsilon check: value <= full-space epsilon
  bool violated = false;  // some strict superset scores lower
};

struct IntersectionalityCheck {
  double full_epsilon = 0.0;
  std::vector<SubsetMeasurement> subsets;  // non-empty proper subsets

  bool all_pass() const {
    return std::all_of(subsets.begin(), subsets.end(),
                       [](const SubsetMeasurement& m) { return m.pass; });
  }
};

namespace internal {

inline std::string SubsetName(const GroupSpace& space, const std::vector<std::size_t>& attrs) {
  std::string name;
  for (std::size_t k = 0; k < attrs.size(); ++k) {
    if (k) name += ',';
    name += space.attribute(attrs[k]).name;
  }
  return name;
}

inline bool IsStrictSubset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Marks every measurement that exceeds the value of one of its supersets.
inline void FlagMonotonicityViolations(std::vector<SubsetMeasurement>& rows) {
  for (auto& sub : rows) {
    for (const auto& sup : rows) {
      if (IsStrictSubset(sub.attributes, sup.attributes) && sub.value > sup.value + 1e-12) {
        sub.violated = true;
      }
    }
  }
}

}  // namespace internal

// Epsilon over every non-empty proper attribute subset D, each obtained from
// the probability mixture P(y|D) = sum_E P(y|E,D) P(E|D). For the empirical
// estimator this equals aggregating counts.
inline IntersectionalityCheck CheckIntersectionality(const OutcomeTable& table,
                                                     const EstimatorSpec& spec) {
  const std::size_t p = table.space.num_attributes();
  if (p < 2) throw InvalidArgument("intersectionality check needs >= 2 attributes");
  const ProbTable full = TableToProbs(table, spec);
  IntersectionalityCheck out;
  out.full_epsilon = EpsilonDf(full).epsilon;
  for (auto& attrs : AttributeSubsets(p, /*include_full=*/false)) {
    const ProbTable sub = ProjectProbs(full, attrs);
    SubsetMeasurement m;
    m.name = internal::SubsetName(table.space, attrs);
    m.value = sub.num_supported() >= 2 ? EpsilonDf(sub).epsilon : 0.0;
    m.pass = m.value <= out.full_epsilon + 1e-9;
    m.attributes = std::move(attrs);
    out.subsets.push_back(std::move(m));
  }
  return out;
}

// Epsilon for every non-empty attribute subset including the full set, with
// monotonicity flags (the epsilon side of the intersectionality audit).
inline std::vector<SubsetMeasurement> AuditEpsilonMonotonicity(const OutcomeTable& table,
                                                               const EstimatorSpec& spec) {
  const std::size_t p = table.space.num_attributes();
  if (p < 2) throw InvalidArgument("monotonicity audit needs >= 2 attributes");
  const ProbTable full = TableToProbs(table, spec);
  std::vector<SubsetMeasurement> rows;
  for (auto& attrs : AttributeSubsets(p, /*include_full=*/true)) {
    const ProbTable sub = attrs.size() == p ? full : ProjectProbs(full, attrs);
    SubsetMeasurement m;
    m.name = internal::SubsetName(table.space, attrs);
    m.value = sub.num_supported() >= 2 ? EpsilonDf(sub).epsilon : 0.0;
    m.attributes = std::move(attrs);
    rows.push_back(std::move(m));
  }
  internal::FlagMonotonicityViolations(rows);
  return rows;
}

// Gamma over each attribute subset's own cells, P(g) and P(y|g) taken from
// the table's empirical frequencies. A subset is flagged when its gamma
// exceeds that of a superset, which cannot happen for epsilon.
inline std::vector<SubsetMeasurement> AuditGammaMonotonicity(const OutcomeTable& table,
                                                             std::size_t positive) {
  const std::size_t p = table.space.num_attributes();
  if (p < 2) throw InvalidArgument("monotonicity audit needs >= 2 attributes");
  const ProbTable full = TableToProbs(table, EstimatorSpec::Empirical());
  std::vector<SubsetMeasurement> rows;
  for (auto& attrs : AttributeSubsets(p, /*include_full=*/true)) {
    const ProbTable sub = attrs.size() == p ? full : ProjectProbs(full, attrs);
    SubsetMeasurement m;
    m.name = internal::SubsetName(table.space, attrs);
    m.value = GammaSf(sub, EnumerateSubgroups(sub.space, SubgroupMode::kBottomOnly),
                      positive).gamma;
    m.attributes = std::move(attrs);
    rows.push_back(std::move(m));
  }
  internal::FlagMonotonicityViolations(rows);
  return rows;
}

}  // namespace dfair
