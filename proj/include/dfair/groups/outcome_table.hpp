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
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/groups/group_space.hpp"

namespace dfair {

// Per-cell outcome counts N_{y,s}. Hard counts are integer valued, soft
// counts (sums of predicted probabilities) are real valued.
struct OutcomeTable {
  GroupSpace space;
  std::size_t n_outcomes = 0;
  Matrix counts;               // cells x K
  std::vector<double> totals;  // N_s
  std::vector<std::string> outcome_labels;

  OutcomeTable() = default;
  OutcomeTable(GroupSpace s, std::size_t k)
      : space(std::move(s)),
        n_outcomes(k),
        counts(space.num_cells(), k),
        totals(space.num_cells(), 0.0) {
    for (std::size_t y = 0; y < k; ++y) outcome_labels.push_back(std::to_string(y));
  }

  std::size_t num_cells() const { return space.num_cells(); }
  bool is_empty(std::size_t cell) const { return !(totals[cell] > 0.0); }

  void Add(std::size_t cell, std::size_t y, double amount) {
    counts(cell, y) += amount;
    totals[cell] += amount;
  }

  double grand_total() const {
    double t = 0.0;
    for (double v : totals) t += v;
    return t;
  }

  std::vector<std::size_t> empty_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < num_cells(); ++s) {
      if (is_empty(s)) out.push_back(s);
    }
    return out;
  }

  void Validate() const {
    if (n_outcomes < 2) throw InvalidArgument("outcome table needs K >= 2");
    if (counts.rows() != space.num_cells() || counts.cols() != n_outcomes ||
        totals.size() != space.num_cells()) {
      throw InvalidArgument("outcome table shape does not match its space");
    }
    for (std::size_t s = 0; s < num_cells(); ++s) {
      double sum = 0.0;
      for (std::size_t y = 0; y < n_outcomes; ++y) {
        if (!(counts(s, y) >= 0.0)) throw InvalidArgument("negative count");
        sum += counts(s, y);
      }
      if (std::abs(sum - totals[s]) > 1e-9 * std::max(1.0, totals[s])) {
        throw InvalidArgument("cell total does not match its counts");
      }
    }
  }

  // Plain text: one line per cell with its tuple, per-outcome counts, total.
  std::string ToText() const {
    std::ostringstream out;
    out << "cell";
    for (const auto& label : outcome_labels) out << '\t' << label;
    out << "\ttotal\n";
    for (std::size_t s = 0; s < num_cells(); ++s) {
      out << space.CellName(s);
      for (std::size_t y = 0; y < n_outcomes; ++y) {
        out << '\t' << FormatDouble(counts(s, y));
      }
      out << '\t' << FormatDouble(totals[s]) << '\n';
    }
    return out.str();
  }
};

// Marginalizes the attributes not in `keep` by summing counts.
inline OutcomeTable Project(const OutcomeTable& table,
                            std::span<const std::size_t> keep) {
  const std::size_t p = table.space.num_attributes();
  if (keep.empty() || keep.size() >= p) {
    throw InvalidArgument("projection needs a non-empty proper attribute subset");
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= p) throw InvalidArgument("attribute index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (keep[i] == keep[j]) throw InvalidArgument("repeated attribute in subset");
    }
  }
  OutcomeTable out(table.space.Subspace(keep), table.n_outcomes);
  out.outcome_labels = table.outcome_labels;
  for (std::size_t s = 0; s < table.num_cells(); ++s) {
    const std::size_t t = table.space.ProjectCell(s, out.space, keep);
    for (std::size_t y = 0; y < table.n_outcomes; ++y) {
      out.counts(t, y) += table.counts(s, y);
    }
    out.totals[t] += table.totals[s];
  }
  return out;
}

// Indicator g: rows whose listed attributes take the listed values.
struct GroupIndicator {
  std::vector<std::size_t> attributes;  // increasing
  std::vector<int> values;

  bool Contains(const GroupSpace& space, std::size_t cell) const {
    for (std::size_t k = 0; k < attributes.size(); ++k) {
      if (space.ValueOf(cell, attributes[k]) != values[k]) return false;
    }
    return true;
  }

  std::string Name(const GroupSpace& space) const {
    std::string name;
    for (std::size_t k = 0; k < attributes.size(); ++k) {
      if (k) name += '|';
      const Attribute& a = space.attribute(attributes[k]);
      name += a.name + '=' + a.labels[static_cast<std::size_t>(values[k])];
    }
    return name;
  }

  friend bool operator==(const GroupIndicator&, const GroupIndicator&) = default;
};

struct SubgroupCollection {
  std::vector<GroupIndicator> indicators;

  std::size_t size() const { return indicators.size(); }
};

enum class SubgroupMode { kBottomOnly, kAllLevels };

inline SubgroupCollection EnumerateSubgroups(const GroupSpace& space,
                                             SubgroupMode mode) {
  SubgroupCollection out;
  const std::size_t p = space.num_attributes();
  std::vector<std::vector<std::size_t>> subsets;
  if (mode == SubgroupMode::kBottomOnly) {
    std::vector<std::size_t> all(p);
    for (std::size_t i = 0; i < p; ++i) all[i] = i;
    subsets.push_back(std::move(all));
  } else {
    subsets = AttributeSubsets(p, /*include_full=*/true);
  }
  for (const auto& attrs : subsets) {
    const GroupSpace sub = space.Subspace(attrs);
    for (std::size_t c = 0; c < sub.num_cells(); ++c) {
      std::vector<int> t = sub.Tuple(c);
      out.indicators.push_back({attrs, std::move(t)});
    }
  }
  return out;
}

}  // namespace dfair
