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
#include <span>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/model/classifier.hpp"

namespace dfair {

struct OptimState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::size_t step_count = 0;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stab = 1e-8;

  static OptimState For(const Classifier& model, double learning_rate = 0.01) {
    OptimState s;
    s.first_moment.assign(model.weights().size(), 0.0);
    s.second_moment.assign(model.weights().size(), 0.0);
    s.learning_rate = learning_rate;
    return s;
  }
};

// Bias-corrected adaptive-moment update of model weights in place.
inline void AdamStep(Classifier& model, OptimState& opt,
                     std::span<const double> grad) {
  auto& w = model.weights();
  if (grad.size() != w.size() || opt.first_moment.size() != w.size() ||
      opt.second_moment.size() != w.size()) {
    throw InvalidArgument("gradient/optimizer length does not match weights");
  }
  for (std::size_t k = 0; k < grad.size(); ++k) {
    if (!std::isfinite(grad[k])) {
      throw DomainError("non-finite gradient at index " + std::to_string(k));
    }
  }
  ++opt.step_count;
  const double t = static_cast<double>(opt.step_count);
  const double c1 = 1.0 - std::pow(opt.beta1, t);
  const double c2 = 1.0 - std::pow(opt.beta2, t);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double g = grad[k];
    opt.first_moment[k] = opt.beta1 * opt.first_moment[k] + (1.0 - opt.beta1) * g;
    opt.second_moment[k] =
        opt.beta2 * opt.second_moment[k] + (1.0 - opt.beta2) * g * g;
    const double m_hat = opt.first_moment[k] / c1;
    const double v_hat = opt.second_moment[k] / c2;
    w[k] -= opt.learning_rate * m_hat / (std::sqrt(v_hat) + opt.eps_stab);
  }
}

}  // namespace dfair
