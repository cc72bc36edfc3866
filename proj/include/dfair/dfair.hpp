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

// Umbrella header for the dfair library.

#include "dfair/core/error.hpp"
#include "dfair/core/format.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/core/random.hpp"
#include "dfair/data/csv.hpp"
#include "dfair/data/dataset.hpp"
#include "dfair/data/schema.hpp"
#include "dfair/data/synth.hpp"
#include "dfair/groups/build_table.hpp"
#include "dfair/groups/group_space.hpp"
#include "dfair/groups/outcome_table.hpp"
#include "dfair/metrics/bounds.hpp"
#include "dfair/metrics/epsilon.hpp"
#include "dfair/metrics/gamma.hpp"
#include "dfair/metrics/gini.hpp"
#include "dfair/metrics/intersectionality.hpp"
#include "dfair/metrics/prob_table.hpp"
#include "dfair/metrics/report.hpp"
#include "dfair/model/adam.hpp"
#include "dfair/model/checkpoint.hpp"
#include "dfair/model/classifier.hpp"
#include "dfair/model/loss.hpp"
#include "dfair/train/penalty.hpp"
#include "dfair/train/trainer.hpp"
