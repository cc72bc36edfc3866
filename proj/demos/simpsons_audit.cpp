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

// Audits the admissions table from the Simpson's paradox scenario and prints
// epsilon for the full intersection and for each attribute alone.

#include <iostream>

#include "dfair/dfair.hpp"

int main() {
  const dfair::OutcomeTable table = dfair::synth::Simpsons();
  std::cout << table.ToText() << '\n';
  const dfair::IntersectionalityCheck full =
      dfair::CheckIntersectionality(table, dfair::EstimatorSpec::Empirical());
  std::cout << "epsilon(gender,race) = " << full.full_epsilon << '\n';
  for (const auto& sub : full.subsets) {
    std::cout << "epsilon(" << sub.name << ") = " << sub.value
              << (sub.pass ? "" : "  exceeds the intersection") << '\n';
  }
  return 0;
}
