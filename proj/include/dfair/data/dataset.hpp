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
#include <fstream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/core/random.hpp"
#include "dfair/data/csv.hpp"
#include "dfair/data/schema.hpp"
#include "dfair/groups/group_space.hpp"

namespace dfair {

// Decoded values of one schema column. Alphabet columns fill `codes`,
// continuous columns fill `values`, ignored columns stay empty.
struct ColumnData {
  std::vector<int> codes;
  std::vector<double> values;
};

struct FeatureInfo {
  std::string name;
  std::size_t source_column = 0;
  bool continuous = false;
};

struct Dataset {
  Schema schema;
  GroupSpace space;
  std::vector<ColumnData> columns;  // parallel to schema.columns

  Matrix features;  // n_rows x n_features
  std::vector<FeatureInfo> feature_info;
  std::vector<int> outcome;
  std::size_t n_outcomes = 0;
  std::vector<std::size_t> protected_columns;  // schema indices, attribute order
  std::vector<int> protected_codes;            // n_rows x p, row-major
  std::vector<std::size_t> group_index;

  std::size_t n_rows() const { return outcome.size(); }
  std::size_t n_features() const { return features.cols(); }
  std::size_t n_protected() const { return protected_columns.size(); }

  int protected_value(std::size_t row, std::size_t attr) const {
    return protected_codes[row * protected_columns.size() + attr];
  }

  // The original category label (after alias resolution) or the formatted
  // number for column `col` of row `row`.
  std::string Label(std::size_t row, std::size_t col) const {
    const ColumnSpec& spec = schema.columns[col];
    if (spec.kind == ColumnKind::kContinuous) {
      return FormatDouble(columns[col].values[row]);
    }
    if (spec.kind == ColumnKind::kIgnore) return {};
    return spec.values[static_cast<std::size_t>(columns[col].codes[row])];
  }
};

inline GroupSpace GroupSpaceFor(const Schema& schema) {
  std::vector<Attribute> attrs;
  for (std::size_t c : schema.protected_columns()) {
    attrs.push_back({schema.columns[c].name, schema.columns[c].values});
  }
  return GroupSpace(std::move(attrs));
}

// Builds features, outcome, protected indices and group ids from decoded
// columns. Continuous features are left on their raw scale.
inline Dataset Encode(Schema schema, std::vector<ColumnData> columns) {
  schema.Validate();
  if (columns.size() != schema.columns.size()) {
    throw InvalidArgument("column data does not match schema");
  }
  Dataset d;
  d.space = GroupSpaceFor(schema);
  d.protected_columns = schema.protected_columns();
  const std::size_t oc = schema.outcome_column();
  d.outcome = columns[oc].codes;
  d.n_outcomes = schema.columns[oc].values.size();
  const std::size_t n = d.outcome.size();

  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& spec = schema.columns[c];
    const std::size_t len = spec.kind == ColumnKind::kContinuous
                                ? columns[c].values.size()
                                : columns[c].codes.size();
    if (spec.kind != ColumnKind::kIgnore && len != n) {
      throw InvalidArgument("column '" + spec.name + "' has the wrong length");
    }
    switch (spec.kind) {
      case ColumnKind::kContinuous:
        d.feature_info.push_back({spec.name, c, true});
        break;
      case ColumnKind::kProtected:
        if (!spec.model_input) break;
        [[fallthrough]];
      case ColumnKind::kCategorical:
        for (const std::string& v : spec.values) {
          d.feature_info.push_back({spec.name + "=" + v, c, false});
        }
        break;
      default:
        break;
    }
  }

  d.features = Matrix(n, d.feature_info.size());
  for (std::size_t f = 0, c = 0; f < d.feature_info.size();) {
    c = d.feature_info[f].source_column;
    if (d.feature_info[f].continuous) {
      for (std::size_t i = 0; i < n; ++i) d.features(i, f) = columns[c].values[i];
      ++f;
    } else {
      const std::size_t width = schema.columns[c].values.size();
      for (std::size_t i = 0; i < n; ++i) {
        d.features(i, f + static_cast<std::size_t>(columns[c].codes[i])) = 1.0;
      }
      f += width;
    }
  }

  const std::size_t p = d.protected_columns.size();
  d.protected_codes.resize(n * p);
  d.group_index.resize(n);
  std::vector<int> tuple(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      tuple[a] = columns[d.protected_columns[a]].codes[i];
      d.protected_codes[i * p + a] = tuple[a];
    }
    d.group_index[i] = d.space.CellId(tuple);
  }
  d.schema = std::move(schema);
  d.columns = std::move(columns);
  return d;
}

inline Dataset ParseCsv(std::istream& in, const Schema& schema) {
  schema.Validate();
  std::vector<csv::Record> records = csv::Parse(in);
  if (records.empty()) throw FormatError("CSV input has no header row");

  // Map schema columns to header positions.
  const auto& header = records.front().fields;
  std::vector<std::ptrdiff_t> position(schema.columns.size(), -1);
  for (std::size_t h = 0; h < header.size(); ++h) {
    const std::string name(Trim(header[h]));
    auto col = schema.find(name);
    if (!col) {
      if (!schema.ignore_extra_columns) {
        throw SchemaError("CSV column '" + name + "' is not in the schema");
      }
      continue;
    }
    if (position[*col] == -1) position[*col] = static_cast<std::ptrdiff_t>(h);
  }
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (position[c] == -1 && schema.columns[c].kind != ColumnKind::kIgnore) {
      throw SchemaError("schema column '" + schema.columns[c].name +
                        "' is missing from the CSV header");
    }
  }

  std::vector<ColumnData> columns(schema.columns.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const csv::Record& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw FormatError("line " + std::to_string(rec.line) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(rec.fields.size()));
    }
    bool missing = false;
    std::vector<int> codes(schema.columns.size(), 0);
    std::vector<double> values(schema.columns.size(), 0.0);
    for (std::size_t c = 0; c < schema.columns.size() && !missing; ++c) {
      const ColumnSpec& spec = schema.columns[c];
      if (spec.kind == ColumnKind::kIgnore) continue;
      const std::string field(
          Trim(rec.fields[static_cast<std::size_t>(position[c])]));
      if (schema.is_missing(field)) {
        if (schema.missing_policy == MissingPolicy::kError) {
          throw FormatError("line " + std::to_string(rec.line) +
                            ": missing value in column '" + spec.name + "'");
        }
        missing = true;
        break;
      }
      if (spec.kind == ColumnKind::kContinuous) {
        auto v = ParseDouble(field);
        if (!v || !std::isfinite(*v)) {
          throw FormatError("line " + std::to_string(rec.line) + ": column '" +
                            spec.name + "' has non-numeric value '" + field +
                            "'");
        }
        values[c] = *v;
      } else {
        auto code = spec.Lookup(field);
        if (!code) {
          throw SchemaError("line " + std::to_string(rec.line) +
                            ": unknown label '" + field + "' in column '" +
                            spec.name + "'");
        }
        codes[c] = *code;
      }
    }
    if (missing) continue;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      switch (schema.columns[c].kind) {
        case ColumnKind::kContinuous:
          columns[c].values.push_back(values[c]);
          break;
        case ColumnKind::kIgnore:
          break;
        default:
          columns[c].codes.push_back(codes[c]);
      }
    }
  }
  return Encode(schema, std::move(columns));
}

inline Dataset LoadCsv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open CSV file: " + path);
  return ParseCsv(in, schema);
}

// Writes every non-ignored column with its decoded labels; the output loads
// back through ParseCsv with the same schema.
inline void WriteCsv(const Dataset& d, std::ostream& out) {
  std::vector<std::size_t> cols;
  std::vector<std::string> row;
  for (std::size_t c = 0; c < d.schema.columns.size(); ++c) {
    if (d.schema.columns[c].kind == ColumnKind::kIgnore) continue;
    cols.push_back(c);
    row.push_back(d.schema.columns[c].name);
  }
  csv::WriteRow(out, row);
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) row[k] = d.Label(i, cols[k]);
    csv::WriteRow(out, row);
  }
}

inline void WriteCsvFile(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV file: " + path);
  WriteCsv(d, out);
}

inline Dataset SelectRows(const Dataset& d, std::span<const std::size_t> rows) {
  std::vector<ColumnData> columns(d.columns.size());
  for (std::size_t c = 0; c < d.columns.size(); ++c) {
    for (std::size_t r : rows) {
      if (!d.columns[c].codes.empty()) columns[c].codes.push_back(d.columns[c].codes[r]);
      if (!d.columns[c].values.empty()) columns[c].values.push_back(d.columns[c].values[r]);
    }
  }
  Dataset out = Encode(d.schema, std::move(columns));
  // Keep any scaling already applied to d.
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto src = d.features.row(rows[k]);
    std::copy(src.begin(), src.end(), out.features.row(k).begin());
  }
  return out;
}

// Affine map applied to continuous feature columns: (x - shift) / scale.
struct Standardization {
  std::vector<double> shift;
  std::vector<double> scale;

  bool empty() const { return shift.empty(); }

  void Apply(Matrix& features) const {
    if (empty()) return;
    if (shift.size() != features.cols()) {
      throw InvalidArgument("standardization width does not match features");
    }
    for (std::size_t i = 0; i < features.rows(); ++i) {
      for (std::size_t f = 0; f < features.cols(); ++f) {
        features(i, f) = (features(i, f) - shift[f]) / scale[f];
      }
    }
  }
};

// Mean/sd of each continuous feature over `train`; one-hot columns map to
// the identity. Constant columns are centered only.
inline Standardization FitStandardization(const Dataset& train) {
  const std::size_t nf = train.n_features();
  const std::size_t n = train.n_rows();
  Standardization s{std::vector<double>(nf, 0.0), std::vector<double>(nf, 1.0)};
  if (n == 0) return s;
  for (std::size_t f = 0; f < nf; ++f) {
    if (!train.feature_info[f].continuous) continue;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += train.features(i, f);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = train.features(i, f) - mean;
      ss += dx * dx;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.shift[f] = mean;
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

struct SplitSpec {
  double train_fraction = 0.8;
  double dev_fraction = 0.2;
  double test_fraction = 0.0;
  std::uint64_t seed = 0;

  void Validate() const {
    for (double f : {train_fraction, dev_fraction, test_fraction}) {
      if (!(f >= 0.0 && f <= 1.0)) {
        throw InvalidArgument("split fractions must lie in [0, 1]");
      }
    }
    if (std::abs(train_fraction + dev_fraction + test_fraction - 1.0) > 1e-9) {
      throw InvalidArgument("split fractions must sum to 1");
    }
  }
};

struct Splits {
  Dataset train;
  Dataset dev;
  Dataset test;
  Standardization scaling;  // fitted on train, applied to all three
};

// Row permutation used by Split; a function of (seed, n) only.
inline std::vector<std::size_t> SplitPermutation(std::size_t n,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(perm));
  return perm;
}

inline Splits Split(const Dataset& data, const SplitSpec& spec) {
  spec.Validate();
  const std::size_t n = data.n_rows();
  auto count = [n](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 0.5));
  };
  const std::size_t n_train = std::min(count(spec.train_fraction), n);
  const std::size_t n_dev = std::min(count(spec.dev_fraction), n - n_train);
  const std::vector<std::size_t> perm = SplitPermutation(n, spec.seed);

  auto part = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> rows(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                                  perm.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(rows.begin(), rows.end());
    return SelectRows(data, rows);
  };
  Splits out{part(0, n_train), part(n_train, n_train + n_dev),
             part(n_train + n_dev, n), {}};
  out.scaling = FitStandardization(out.train);
  out.scaling.Apply(out.train.features);
  out.scaling.Apply(out.dev.features);
  out.scaling.Apply(out.test.features);
  return out;
}

}  // namespace dfair
