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
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "json.hpp"

namespace dfair {

enum class ColumnKind { kCategorical, kContinuous, kOutcome, kProtected, kIgnore };
enum class MissingPolicy { kDropRow, kError };

inline const char* ToString(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kCategorical: return "categorical";
    case ColumnKind::kContinuous: return "continuous";
    case ColumnKind::kOutcome: return "outcome";
    case ColumnKind::kProtected: return "protected";
    case ColumnKind::kIgnore: return "ignore";
  }
  return "?";
}

inline ColumnKind ParseColumnKind(const std::string& s) {
  if (s == "categorical") return ColumnKind::kCategorical;
  if (s == "continuous") return ColumnKind::kContinuous;
  if (s == "outcome") return ColumnKind::kOutcome;
  if (s == "protected") return ColumnKind::kProtected;
  if (s == "ignore") return ColumnKind::kIgnore;
  throw SchemaError("unknown column kind '" + s + "'");
}

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  // Admissible labels, in index order. Required for categorical, protected
  // and outcome columns.
  std::vector<std::string> values;
  // Raw label -> admissible label. The key "*" catches every raw label not
  // otherwise matched, which is how multi-valued source columns are
  // binarized.
  std::map<std::string, std::string> aliases;
  // Protected columns only: whether the attribute is also a model feature.
  bool model_input = true;

  bool has_alphabet() const {
    return kind == ColumnKind::kCategorical || kind == ColumnKind::kProtected ||
           kind == ColumnKind::kOutcome;
  }

  // Index of `raw` in `values` after alias resolution, or nullopt.
  std::optional<int> Lookup(const std::string& raw) const {
    auto find = [&](const std::string& label) -> std::optional<int> {
      auto it = std::find(values.begin(), values.end(), label);
      if (it == values.end()) return std::nullopt;
      return static_cast<int>(it - values.begin());
    };
    if (auto a = aliases.find(raw); a != aliases.end()) return find(a->second);
    if (auto direct = find(raw)) return direct;
    if (auto wild = aliases.find("*"); wild != aliases.end()) {
      return find(wild->second);
    }
    return std::nullopt;
  }
};

struct Schema {
  std::vector<ColumnSpec> columns;
  std::string outcome_positive_label;
  MissingPolicy missing_policy = MissingPolicy::kDropRow;
  // Header columns absent from `columns` are an error unless this is set.
  bool ignore_extra_columns = false;
  std::vector<std::string> missing_tokens = {"", "?"};

  std::size_t outcome_column() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i].kind == ColumnKind::kOutcome) return i;
    }
    throw SchemaError("schema has no outcome column");
  }

  std::vector<std::size_t> protected_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i].kind == ColumnKind::kProtected) out.push_back(i);
    }
    return out;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i].name == name) return i;
    }
    return std::nullopt;
  }

  int positive_index() const {
    const ColumnSpec& out = columns[outcome_column()];
    auto idx = out.Lookup(outcome_positive_label);
    if (!idx) {
      throw SchemaError("outcome_positive_label '" + outcome_positive_label +
                        "' is not a value of outcome column '" + out.name +
                        "'");
    }
    return *idx;
  }

  bool is_missing(const std::string& field) const {
    return std::find(missing_tokens.begin(), missing_tokens.end(), field) !=
           missing_tokens.end();
  }

  void Validate() const {
    std::set<std::string> names;
    std::size_t outcomes = 0;
    std::size_t protected_count = 0;
    for (const ColumnSpec& c : columns) {
      if (c.name.empty()) throw SchemaError("column with empty name");
      if (!names.insert(c.name).second) {
        throw SchemaError("duplicate column name '" + c.name + "'");
      }
      if (c.kind == ColumnKind::kOutcome) ++outcomes;
      if (c.kind == ColumnKind::kProtected) ++protected_count;
      if (c.has_alphabet()) {
        if (c.values.empty()) {
          throw SchemaError("column '" + c.name + "' must list its values");
        }
        std::set<std::string> labels(c.values.begin(), c.values.end());
        if (labels.size() != c.values.size()) {
          throw SchemaError("column '" + c.name + "' lists a value twice");
        }
        for (const auto& [raw, label] : c.aliases) {
          if (!labels.contains(label)) {
            throw SchemaError("column '" + c.name + "' aliases '" + raw +
                              "' to unknown value '" + label + "'");
          }
        }
      }
      if ((c.kind == ColumnKind::kProtected || c.kind == ColumnKind::kOutcome) &&
          c.values.size() < 2) {
        throw SchemaError("column '" + c.name + "' needs at least 2 values");
      }
    }
    if (outcomes != 1) {
      throw SchemaError("schema must have exactly one outcome column, found " +
                        std::to_string(outcomes));
    }
    if (protected_count == 0) {
      throw SchemaError("schema must have at least one protected column");
    }
    positive_index();
  }
};

inline Schema SchemaFromJson(const nlohmann::json& j) {
  Schema schema;
  try {
    for (const auto& col : j.at("columns")) {
      ColumnSpec spec;
      spec.name = col.at("name").get<std::string>();
      spec.kind = ParseColumnKind(col.at("kind").get<std::string>());
      if (col.contains("values")) {
        for (const auto& v : col.at("values")) {
          spec.values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      }
      if (col.contains("aliases")) {
        spec.aliases =
            col.at("aliases").get<std::map<std::string, std::string>>();
      }
      if (col.contains("model_input")) {
        spec.model_input = col.at("model_input").get<bool>();
      }
      schema.columns.push_back(std::move(spec));
    }
    if (j.contains("outcome_positive_label")) {
      const auto& pos = j.at("outcome_positive_label");
      schema.outcome_positive_label =
          pos.is_string() ? pos.get<std::string>() : pos.dump();
    }
    if (j.contains("missing_policy")) {
      const std::string policy = j.at("missing_policy").get<std::string>();
      if (policy == "drop_row") {
        schema.missing_policy = MissingPolicy::kDropRow;
      } else if (policy == "error") {
        schema.missing_policy = MissingPolicy::kError;
      } else {
        throw SchemaError("unknown missing_policy '" + policy + "'");
      }
    }
    if (j.contains("extra_columns")) {
      const std::string extra = j.at("extra_columns").get<std::string>();
      if (extra != "error" && extra != "ignore") {
        throw SchemaError("extra_columns must be 'error' or 'ignore'");
      }
      schema.ignore_extra_columns = extra == "ignore";
    }
    if (j.contains("missing_tokens")) {
      schema.missing_tokens =
          j.at("missing_tokens").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed schema: ") + e.what());
  }
  schema.Validate();
  return schema;
}

inline nlohmann::json SchemaToJson(const Schema& schema) {
  nlohmann::json cols = nlohmann::json::array();
  for (const ColumnSpec& c : schema.columns) {
    nlohmann::json col = {{"name", c.name}, {"kind", ToString(c.kind)}};
    if (!c.values.empty()) col["values"] = c.values;
    if (!c.aliases.empty()) col["aliases"] = c.aliases;
    if (c.kind == ColumnKind::kProtected && !c.model_input) {
      col["model_input"] = false;
    }
    cols.push_back(std::move(col));
  }
  nlohmann::json j;
  j["columns"] = std::move(cols);
  j["outcome_positive_label"] = schema.outcome_positive_label;
  j["missing_policy"] =
      schema.missing_policy == MissingPolicy::kDropRow ? "drop_row" : "error";
  if (schema.ignore_extra_columns) j["extra_columns"] = "ignore";
  return j;
}

inline Schema LoadSchema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("schema file " + path + " is not valid JSON: " + e.what());
  }
  return SchemaFromJson(j);
}

inline void SaveSchema(const Schema& schema, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write schema file: " + path);
  out << SchemaToJson(schema).dump(2) << '\n';
}

}  // namespace dfair
