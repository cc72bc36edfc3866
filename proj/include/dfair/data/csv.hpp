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

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dfair/core/error.hpp"

namespace dfair::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// Reads comma-separated records. Fields may be wrapped in double quotes, in
// which case "" is a literal quote and commas/newlines are kept verbatim.
// Blank lines are skipped.
inline std::vector<Record> Parse(std::istream& in) {
  std::vector<Record> records;
  std::string field;
  Record current;
  bool in_quotes = false;
  bool field_quoted = false;
  bool record_open = false;
  std::size_t line = 1;
  char c;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    const bool blank = current.fields.size() == 1 &&
                       current.fields[0].empty() && !field_quoted;
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    record_open = false;
  };

  while (in.get(c)) {
    if (!record_open) {
      current.line = line;
      record_open = true;
    }
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty()) {
          in_quotes = true;
          field_quoted = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_field();
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw FormatError("unterminated quoted field starting on line " +
                      std::to_string(current.line));
  }
  if (record_open) {
    end_field();
    end_record();
  }
  return records;
}

inline std::vector<Record> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open CSV file: " + path);
  return Parse(in);
}

inline std::string Quote(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void WriteRow(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << Quote(row[i]);
  }
  out << '\n';
}

}  // namespace dfair::csv
