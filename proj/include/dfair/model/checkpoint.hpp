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

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/model/classifier.hpp"

namespace dfair {

// A trained model plus the input scaling it was trained under.
struct Checkpoint {
  Classifier model;
  Standardization scaling;
};

// Text format:
//   dfair-model 1
//   arch logistic | arch mlp <layers> <width>
//   features <n>
//   outcomes <K>
//   params <count>
//   <one parameter per line>
//   scaling <n>            (optional)
//   <shift> <scale>        (n lines)
// Numbers use the shortest round-trip decimal form, so reading back is exact.
inline void WriteCheckpoint(const Checkpoint& ckpt, std::ostream& out) {
  const Classifier& m = ckpt.model;
  out << "dfair-model 1\n";
  out << "arch " << m.arch().ToString() << '\n';
  out << "features " << m.n_features() << '\n';
  out << "outcomes " << m.n_outcomes() << '\n';
  out << "params " << m.weights().size() << '\n';
  for (double w : m.weights()) out << FormatDouble(w) << '\n';
  if (!ckpt.scaling.empty()) {
    out << "scaling " << ckpt.scaling.shift.size() << '\n';
    for (std::size_t f = 0; f < ckpt.scaling.shift.size(); ++f) {
      out << FormatDouble(ckpt.scaling.shift[f]) << ' '
          << FormatDouble(ckpt.scaling.scale[f]) << '\n';
    }
  }
}

inline Checkpoint ReadCheckpoint(std::istream& in) {
  auto fail = [](const std::string& what) -> FormatError {
    return FormatError("malformed model checkpoint: " + what);
  };
  std::string tag, kind;
  int version = 0;
  if (!(in >> tag >> version) || tag != "dfair-model" || version != 1) {
    throw fail("bad header");
  }
  Architecture arch;
  if (!(in >> tag >> kind) || tag != "arch") throw fail("missing arch");
  if (kind == "mlp") {
    std::size_t layers = 0, width = 0;
    if (!(in >> layers >> width)) throw fail("bad mlp descriptor");
    arch = Architecture::Mlp(layers, width);
  } else if (kind != "logistic") {
    throw fail("unknown architecture '" + kind + "'");
  }
  std::size_t nf = 0, k = 0, count = 0;
  if (!(in >> tag >> nf) || tag != "features") throw fail("missing features");
  if (!(in >> tag >> k) || tag != "outcomes") throw fail("missing outcomes");
  if (!(in >> tag >> count) || tag != "params") throw fail("missing params");
  Checkpoint ckpt{Classifier(arch, nf, k), {}};
  std::vector<double> w(count);
  std::string tok;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> tok)) throw fail("truncated parameter list");
    auto v = ParseDouble(tok);
    if (!v || !std::isfinite(*v)) throw fail("bad parameter '" + tok + "'");
    w[i] = *v;
  }
  ckpt.model.set_weights(std::move(w));
  if (in >> tag) {
    std::size_t n = 0;
    if (tag != "scaling" || !(in >> n) || n != nf) throw fail("bad scaling block");
    ckpt.scaling.shift.resize(n);
    ckpt.scaling.scale.resize(n);
    std::string a, b;
    for (std::size_t f = 0; f < n; ++f) {
      if (!(in >> a >> b)) throw fail("truncated scaling block");
      auto sa = ParseDouble(a);
      auto sb = ParseDouble(b);
      if (!sa || !sb) throw fail("bad scaling entry");
      ckpt.scaling.shift[f] = *sa;
      ckpt.scaling.scale[f] = *sb;
    }
  }
  return ckpt;
}

inline void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  WriteCheckpoint(ckpt, out);
}

inline Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file: " + path);
  return ReadCheckpoint(in);
}

}  // namespace dfair
