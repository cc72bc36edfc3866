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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dfair/core/error.hpp"
#include "dfair/core/matrix.hpp"
#include "dfair/core/random.hpp"

namespace dfair {

struct Architecture {
  enum class Kind { kLogistic, kMlp };
  Kind kind = Kind::kLogistic;
  std::size_t hidden_layers = 0;
  std::size_t hidden_width = 0;

  static Architecture Logistic() { return {}; }
  static Architecture Mlp(std::size_t layers, std::size_t width) {
    if (layers == 0 || width == 0) {
      throw InvalidArgument("mlp needs at least one hidden layer of width >= 1");
    }
    return {Kind::kMlp, layers, width};
  }

  std::string ToString() const {
    if (kind == Kind::kLogistic) return "logistic";
    return "mlp " + std::to_string(hidden_layers) + " " +
           std::to_string(hidden_width);
  }

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct LayerShape {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t offset = 0;  // index of the first weight in the flat vector

  std::size_t weight_count() const { return in * out; }
  std::size_t bias_offset() const { return offset + in * out; }
};

// Feed-forward classifier over a flat parameter vector. Layers are stored in
// order, each as its (out x in) row-major weight matrix followed by its bias
// vector. Hidden layers use ReLU. With K = 2 the output is one logistic unit
// p = P(y=1|x) expanded to (1-p, p); with K > 2 it is a softmax over K units.
class Classifier {
 public:
  Classifier() = default;
  Classifier(Architecture arch, std::size_t n_features, std::size_t n_outcomes)
      : arch_(arch), n_features_(n_features), n_outcomes_(n_outcomes) {
    if (n_features == 0) throw InvalidArgument("classifier needs >= 1 feature");
    if (n_outcomes < 2) throw InvalidArgument("classifier needs K >= 2");
    std::size_t in = n_features;
    std::size_t offset = 0;
    const std::size_t hidden =
        arch.kind == Architecture::Kind::kMlp ? arch.hidden_layers : 0;
    for (std::size_t l = 0; l <= hidden; ++l) {
      const std::size_t out = l < hidden ? arch.hidden_width : output_units();
      layers_.push_back({in, out, offset});
      offset += in * out + out;
      in = out;
    }
    weights_.assign(offset, 0.0);
  }

  static std::size_t ParameterCount(Architecture arch, std::size_t n_features,
                                    std::size_t n_outcomes) {
    return Classifier(arch, n_features, n_outcomes).weights().size();
  }

  const Architecture& arch() const { return arch_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_outcomes() const { return n_outcomes_; }
  std::size_t output_units() const { return n_outcomes_ == 2 ? 1 : n_outcomes_; }
  const std::vector<LayerShape>& layers() const { return layers_; }

  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

  void set_weights(std::vector<double> w) {
    if (w.size() != weights_.size()) {
      throw InvalidArgument("parameter vector has length " +
                            std::to_string(w.size()) + ", architecture needs " +
                            std::to_string(weights_.size()));
    }
    weights_ = std::move(w);
  }

 private:
  Architecture arch_;
  std::size_t n_features_ = 0;
  std::size_t n_outcomes_ = 0;
  std::vector<LayerShape> layers_;
  std::vector<double> weights_;
};

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
inline Classifier MakeClassifier(Architecture arch, std::size_t n_features,
                                 std::size_t n_outcomes, std::uint64_t seed) {
  Classifier model(arch, n_features, n_outcomes);
  Rng rng(seed);
  auto& w = model.weights();
  for (const LayerShape& layer : model.layers()) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (std::size_t k = 0; k < layer.weight_count(); ++k) {
      w[layer.offset + k] = rng.Uniform(-limit, limit);
    }
  }
  return model;
}

namespace internal {

inline double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace internal

// Activations kept for the backward pass. activations[0] is the input,
// activations[l + 1] the output of layer l (post-ReLU for hidden layers, raw
// logits for the last).
struct ForwardCache {
  std::vector<Matrix> activations;
  Matrix probs;  // n x K
};

inline ForwardCache ForwardWithCache(const Classifier& model, const Matrix& x) {
  if (x.cols() != model.n_features()) {
    throw InvalidArgument("feature width " + std::to_string(x.cols()) +
                          " does not match model width " +
                          std::to_string(model.n_features()));
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw DomainError("non-finite feature value");
  }
  const auto& w = model.weights();
  const std::size_t n = x.rows();
  ForwardCache cache;
  cache.activations.push_back(x);
  const auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerShape& L = layers[l];
    const Matrix& a = cache.activations.back();
    Matrix z(n, L.out);
    const bool hidden = l + 1 < layers.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto in = a.row(i);
      for (std::size_t o = 0; o < L.out; ++o) {
        const double* wr = w.data() + L.offset + o * L.in;
        double acc = w[L.bias_offset() + o];
        for (std::size_t k = 0; k < L.in; ++k) acc += wr[k] * in[k];
        z(i, o) = hidden ? std::max(acc, 0.0) : acc;
      }
    }
    cache.activations.push_back(std::move(z));
  }

  const Matrix& logits = cache.activations.back();
  const std::size_t K = model.n_outcomes();
  cache.probs = Matrix(n, K);
  for (std::size_t i = 0; i < n; ++i) {
    if (K == 2) {
      cache.probs(i, 1) = internal::Sigmoid(logits(i, 0));
      cache.probs(i, 0) = internal::Sigmoid(-logits(i, 0));
    } else {
      auto zr = logits.row(i);
      const double m = *std::max_element(zr.begin(), zr.end());
      double sum = 0.0;
      for (std::size_t y = 0; y < K; ++y) {
        cache.probs(i, y) = std::exp(zr[y] - m);
        sum += cache.probs(i, y);
      }
      for (std::size_t y = 0; y < K; ++y) cache.probs(i, y) /= sum;
    }
  }
  return cache;
}

// P(y|x) for every row of x.
inline Matrix Forward(const Classifier& model, const Matrix& x) {
  return ForwardWithCache(model, x).probs;
}

// Gradient of a scalar loss with respect to the weights, given the loss
// gradient with respect to every predicted probability (n x K).
inline std::vector<double> Backward(const Classifier& model,
                                    const ForwardCache& cache,
                                    const Matrix& dloss_dprobs) {
  const std::size_t n = cache.probs.rows();
  const std::size_t K = model.n_outcomes();
  const auto& layers = model.layers();
  const auto& w = model.weights();
  std::vector<double> grad(w.size(), 0.0);

  // delta = dLoss / dlogits
  Matrix delta(n, model.output_units());
  for (std::size_t i = 0; i < n; ++i) {
    if (K == 2) {
      const double p1 = cache.probs(i, 1);
      const double p0 = cache.probs(i, 0);
      delta(i, 0) = (dloss_dprobs(i, 1) - dloss_dprobs(i, 0)) * p1 * p0;
    } else {
      double dot = 0.0;
      for (std::size_t y = 0; y < K; ++y) dot += dloss_dprobs(i, y) * cache.probs(i, y);
      for (std::size_t y = 0; y < K; ++y) {
        delta(i, y) = cache.probs(i, y) * (dloss_dprobs(i, y) - dot);
      }
    }
  }

  for (std::size_t l = layers.size(); l-- > 0;) {
    const LayerShape& L = layers[l];
    const Matrix& a = cache.activations[l];
    for (std::size_t i = 0; i < n; ++i) {
      auto in = a.row(i);
      for (std::size_t o = 0; o < L.out; ++o) {
        const double d = delta(i, o);
        if (d == 0.0) continue;
        double* gr = grad.data() + L.offset + o * L.in;
        for (std::size_t k = 0; k < L.in; ++k) gr[k] += d * in[k];
        grad[L.bias_offset() + o] += d;
      }
    }
    if (l == 0) break;
    Matrix prev(n, L.in);
    for (std::size_t i = 0; i < n; ++i) {
      auto in = a.row(i);
      for (std::size_t o = 0; o < L.out; ++o) {
        const double d = delta(i, o);
        if (d == 0.0) continue;
        const double* wr = w.data() + L.offset + o * L.in;
        for (std::size_t k = 0; k < L.in; ++k) prev(i, k) += d * wr[k];
      }
      // ReLU: activation is zero exactly where the unit was inactive.
      for (std::size_t k = 0; k < L.in; ++k) {
        if (!(in[k] > 0.0)) prev(i, k) = 0.0;
      }
    }
    delta = std::move(prev);
  }
  return grad;
}

// argmax per row, ties to the lowest class index.
inline std::vector<int> PredictClasses(const Matrix& probs) {
  std::vector<int> out(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    auto r = probs.row(i);
    out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

inline double Accuracy(const Matrix& probs, std::span<const int> labels) {
  if (labels.empty()) return NAN;
  const std::vector<int> pred = PredictClasses(probs);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hit += pred[i] == labels[i];
  return static_cast<double>(hit) / static_cast<double>(labels.size());
}

}  // namespace dfair
