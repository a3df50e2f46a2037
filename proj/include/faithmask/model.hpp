/*
 * Copyright 2026 The faithmask Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAITHMASK_MODEL_HPP_
#define FAITHMASK_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "faithmask/core.hpp"
#include "faithmask/dataset.hpp"

namespace faithmask {

// Fully connected layer over the row-major flattened input; weight is
// out x in, output is an out x 1 column.
struct DenseLayer {
  Signal weight;
  Vector bias;
};

// Valid 1-D convolution, stride 1, over the time axis of a channels x time
// input. weight is filters x (in_channels * kernel), indexed [f, c * kernel + k].
struct Conv1dLayer {
  Index in_channels = 0;
  Index kernel = 0;
  Signal weight;
  Vector bias;
};

struct ReluLayer {};
struct TanhLayer {};
// Averages every row over its columns.
struct MeanPoolLayer {};

using Layer =
    std::variant<DenseLayer, Conv1dLayer, ReluLayer, TanhLayer, MeanPoolLayer>;

struct LayerGradient {
  Signal weight;
  Vector bias;
};
using ParameterGradients = std::vector<LayerGradient>;

// Sequential classifier with a softmax head. Immutable after training:
// every evaluation routine below is a pure function of (model, input).
class Model {
 public:
  Model(Index input_rows, Index input_cols, std::vector<Layer> layers);

  Index input_rows() const { return input_rows_; }
  Index input_cols() const { return input_cols_; }
  Index num_classes() const { return num_classes_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  // Set by train().
  std::optional<double> train_accuracy;

 private:
  Index input_rows_;
  Index input_cols_;
  Index num_classes_;
  std::vector<Layer> layers_;
};

Vector forward(const Model& model, const Signal& x);
Vector softmax(const Vector& logits);
// -log softmax(logits)[y], computed with log-sum-exp.
double cross_entropy(const Vector& logits, Index y);
double loss(const Model& model, const Signal& x, Index y);

// Vector-Jacobian product of the logits with `logit_cotangent`, returned in
// the shape of x. Accumulates parameter gradients when `param_grads` is set.
Signal backpropagate(const Model& model, const Signal& x,
                     const Vector& logit_cotangent,
                     ParameterGradients* param_grads = nullptr);

// d loss / d x.
Signal input_gradient(const Model& model, const Signal& x, Index y);
// d logit_c / d x.
Signal class_gradient(const Model& model, const Signal& x, Index c);

ParameterGradients zero_gradients(const Model& model);

// Argmax; ties go to the lowest class index.
Index predict(const Model& model, const Signal& x);
double accuracy(const Model& model, const Dataset& data);

enum class Optimizer { kSgd, kMomentum };

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 40;
  int batch_size = 32;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kMomentum;
  double momentum = 0.9;
  // L2 penalty (weight_decay / 2) * |W|^2 on weights, not biases.
  double weight_decay = 0.0;
};

// Minibatch training on mean cross-entropy. Zero epochs returns the model
// unchanged. Throws TrainingError when the loss becomes non-finite.
Model train(Model model, const Dataset& data, const TrainConfig& cfg);

// flatten -> dense(h1) -> relu -> dense(h2) -> relu -> dense(classes)
Model make_mlp(Index rows, Index cols, Index hidden1, Index hidden2,
               Index classes, std::uint64_t seed);
// conv1d(filters, kernel) -> relu -> mean pool -> dense(classes)
Model make_conv1d(Index channels, Index time, Index filters, Index kernel,
                  Index classes, std::uint64_t seed);
// Single dense layer logits = W vec(x), no bias.
Model make_linear(const Signal& weight, Index rows, Index cols);

}  // namespace faithmask

#endif  // FAITHMASK_MODEL_HPP_
