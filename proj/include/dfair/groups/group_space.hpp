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
#include <span>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"

namespace dfair {

struct Attribute {
  std::string name;
  std::vector<std::string> labels;

  std::size_t cardinality() const { return labels.size(); }
};

// The intersectional cells S_1 x ... x S_p. Cell ids enumerate value tuples
// lexicographically in attribute order: the first attribute varies slowest.
class GroupSpace {
 public:
  GroupSpace() = default;

  explicit GroupSpace(std::vector<Attribute> attributes)
      : attributes_(std::move(attributes)) {
    if (attributes_.empty()) {
      throw InvalidArgument("group space needs at least one attribute");
    }
    strides_.assign(attributes_.size(), 1);
    num_cells_ = 1;
    for (std::size_t i = attributes_.size(); i-- > 0;) {
      if (attributes_[i].cardinality() < 2) {
        throw InvalidArgument("attribute '" + attributes_[i].name +
                              "' needs at least 2 values");
      }
      strides_[i] = num_cells_;
      num_cells_ *= attributes_[i].cardinality();
    }
  }

  std::size_t num_attributes() const { return attributes_.size(); }
  std::size_t num_cells() const { return num_cells_; }
  const Attribute& attribute(std::size_t i) const { return attributes_[i]; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  std::size_t CellId(std::span<const int> tuple) const {
    if (tuple.size() != attributes_.size()) {
      throw InvalidArgument("tuple arity does not match group space");
    }
    std::size_t id = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] < 0 ||
          static_cast<std::size_t>(tuple[i]) >= attributes_[i].cardinality()) {
        throw InvalidArgument("value index out of range for attribute '" +
                              attributes_[i].name + "'");
      }
      id += static_cast<std::size_t>(tuple[i]) * strides_[i];
    }
    return id;
  }

  std::vector<int> Tuple(std::size_t id) const {
    std::vector<int> tuple(attributes_.size());
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      tuple[i] = static_cast<int>(id / strides_[i] % attributes_[i].cardinality());
    }
    return tuple;
  }

  int ValueOf(std::size_t id, std::size_t attr) const {
    return static_cast<int>(id / strides_[attr] % attributes_[attr].cardinality());
  }

  // e.g. "gender=A|race=1"
  std::string CellName(std::size_t id) const {
    std::string name;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (i) name += '|';
      name += attributes_[i].name + '=' +
              attributes_[i].labels[static_cast<std::size_t>(ValueOf(id, i))];
    }
    return name;
  }

  // Space over the listed attributes, in the given order.
  GroupSpace Subspace(std::span<const std::size_t> keep) const {
    std::vector<Attribute> attrs;
    for (std::size_t a : keep) {
      if (a >= attributes_.size()) throw InvalidArgument("attribute out of range");
      attrs.push_back(attributes_[a]);
    }
    return GroupSpace(std::move(attrs));
  }

  // Cell id in Subspace(keep) that cell `id` of this space maps to.
  std::size_t ProjectCell(std::size_t id, const GroupSpace& sub,
                          std::span<const std::size_t> keep) const {
    std::vector<int> t(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) t[k] = ValueOf(id, keep[k]);
    return sub.CellId(t);
  }

  friend bool operator==(const GroupSpace& a, const GroupSpace& b) {
    if (a.attributes_.size() != b.attributes_.size()) return false;
    for (std::size_t i = 0; i < a.attributes_.size(); ++i) {
      if (a.attributes_[i].name != b.attributes_[i].name ||
          a.attributes_[i].labels != b.attributes_[i].labels) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::size_t> strides_;
  std::size_t num_cells_ = 0;
};

// All non-empty attribute subsets, ordered by size then lexicographically.
// When `include_full` is false the full set is left out.
inline std::vector<std::vector<std::size_t>> AttributeSubsets(std::size_t p,
                                                              bool include_full) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t last = include_full ? p : p - 1;
  for (std::size_t size = 1; size <= last; ++size) {
    std::vector<std::size_t> combo(size);
    for (std::size_t i = 0; i < size; ++i) combo[i] = i;
    while (true) {
      out.push_back(combo);
      std::size_t i = size;
      while (i > 0 && combo[i - 1] == p - size + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t k = i; k < size; ++k) combo[k] = combo[k - 1] + 1;
    }
  }
  return out;
}

}  // namespace dfair
