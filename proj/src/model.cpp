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

#include "faithmask/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace faithmask {
namespace {

std::string shape_str(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

// im2col: row c * kernel + k, column l holds x[c, l + k].
Signal patches(const Signal& x, Index kernel) {
  const Index out_len = x.cols() - kernel + 1;
  Signal p(x.rows() * kernel, out_len);
  for (Index c = 0; c < x.rows(); ++c) {
    for (Index k = 0; k < kernel; ++k) {
      p.row(c * kernel + k) = x.row(c).segment(k, out_len);
    }
  }
  return p;
}

Signal layer_forward(const Layer& layer, const Signal& in) {
  return std::visit(
      Overloaded{
          [&](const DenseLayer& l) -> Signal {
            const Eigen::Map<const Vector> flat(in.data(), in.size());
            Signal out = l.weight * flat;
            out.col(0) += l.bias;
            return out;
          },
          [&](const Conv1dLayer& l) -> Signal {
            Signal out = l.weight * patches(in, l.kernel);
            out.colwise() += l.bias;
            return out;
          },
          [&](const ReluLayer&) -> Signal { return in.cwiseMax(0.0); },
          [&](const TanhLayer&) -> Signal { return in.array().tanh().matrix(); },
          [&](const MeanPoolLayer&) -> Signal { return in.rowwise().mean(); },
      },
      layer);
}

// Returns d/d(in) given d/d(out); accumulates parameter gradients into `pg`.
Signal layer_backward(const Layer& layer, const Signal& in, const Signal& out,
                      const Signal& grad_out, LayerGradient* pg) {
  return std::visit(
      Overloaded{
          [&](const DenseLayer& l) -> Signal {
            const Eigen::Map<const Vector> flat(in.data(), in.size());
            if (pg != nullptr) {
              pg->weight.noalias() += grad_out.col(0) * flat.transpose();
              pg->bias += grad_out.col(0);
            }
            Vector g = l.weight.transpose() * grad_out.col(0);
            return Eigen::Map<const Signal>(g.data(), in.rows(), in.cols());
          },
          [&](const Conv1dLayer& l) -> Signal {
            if (pg != nullptr) {
              pg->weight.noalias() +=
                  grad_out * patches(in, l.kernel).transpose();
              pg->bias += grad_out.rowwise().sum();
            }
            const Signal dp = l.weight.transpose() * grad_out;
            Signal g = Signal::Zero(in.rows(), in.cols());
            const Index out_len = grad_out.cols();
            for (Index c = 0; c < in.rows(); ++c) {
              for (Index k = 0; k < l.kernel; ++k) {
                g.row(c).segment(k, out_len) += dp.row(c * l.kernel + k);
              }
            }
            return g;
          },
          [&](const ReluLayer&) -> Signal {
            return Signal((in.array() > 0.0).select(grad_out.array(), 0.0));
          },
          [&](const TanhLayer&) -> Signal {
            return (grad_out.array() * (1.0 - out.array().square())).matrix();
          },
          [&](const MeanPoolLayer&) -> Signal {
            const double inv = 1.0 / static_cast<double>(in.cols());
            return (grad_out.col(0) * inv).replicate(1, in.cols());
          },
      },
      layer);
}

std::vector<Signal> forward_tape(const Model& model, const Signal& x) {
  if (x.rows() != model.input_rows() || x.cols() != model.input_cols()) {
    throw ShapeError("input shape " + shape_str(x.rows(), x.cols()) +
                     " does not match model input " +
                     shape_str(model.input_rows(), model.input_cols()));
  }
  std::vector<Signal> tape;
  tape.reserve(model.layers().size() + 1);
  tape.push_back(x);
  for (const Layer& layer : model.layers()) {
    tape.push_back(layer_forward(layer, tape.back()));
  }
  return tape;
}

void check_class(const Model& model, Index c) {
  if (c < 0 || c >= model.num_classes()) {
    throw InvalidArgument("class index " + std::to_string(c) +
                          " outside [0, " +
                          std::to_string(model.num_classes()) + ")");
  }
}

Signal glorot(Index rows, Index cols, Index fan_in, Index fan_out, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Signal w(rows, cols);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
  return w;
}

DenseLayer dense(Index in, Index out, Rng& rng) {
  return DenseLayer{glorot(out, in, in, out, rng), Vector::Zero(out)};
}

}  // namespace

Model::Model(Index input_rows, Index input_cols, std::vector<Layer> layers)
    : input_rows_(input_rows), input_cols_(input_cols), layers_(std::move(layers)) {
  if (input_rows <= 0 || input_cols <= 0) {
    throw ShapeError("model input dimensions must be positive");
  }
  Index r = input_rows, c = input_cols;
  for (const Layer& layer : layers_) {
    std::visit(
        Overloaded{
            [&](const DenseLayer& l) {
              if (l.weight.cols() != r * c || l.bias.size() != l.weight.rows()) {
                throw ShapeError("dense layer expects " +
                                 std::to_string(l.weight.cols()) +
                                 " inputs, got " + shape_str(r, c));
              }
              r = l.weight.rows();
              c = 1;
            },
            [&](const Conv1dLayer& l) {
              if (l.in_channels != r || l.kernel < 1 || l.kernel > c ||
                  l.weight.cols() != l.in_channels * l.kernel ||
                  l.bias.size() != l.weight.rows()) {
                throw ShapeError("conv1d layer incompatible with input " +
                                 shape_str(r, c));
              }
              r = l.weight.rows();
              c = c - l.kernel + 1;
            },
            [&](const MeanPoolLayer&) { c = 1; },
            [](const auto&) {},
        },
        layer);
  }
  if (c != 1 || r < 2) {
    throw ShapeError("model must end in a column of at least two logits, got " +
                     shape_str(r, c));
  }
  num_classes_ = r;
}

Vector forward(const Model& model, const Signal& x) {
  return forward_tape(model, x).back().col(0);
}

Vector softmax(const Vector& logits) {
  const Vector e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

double cross_entropy(const Vector& logits, Index y) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return lse - logits(y);
}

double loss(const Model& model, const Signal& x, Index y) {
  check_class(model, y);
  return cross_entropy(forward(model, x), y);
}

Signal backpropagate(const Model& model, const Signal& x,
                     const Vector& logit_cotangent,
                     ParameterGradients* param_grads) {
  const std::vector<Signal> tape = forward_tape(model, x);
  if (logit_cotangent.size() != model.num_classes()) {
    throw ShapeError("cotangent length does not match the number of classes");
  }
  Signal grad = logit_cotangent;
  const auto& layers = model.layers();
  for (std::size_t i = layers.size(); i-- > 0;) {
    LayerGradient* pg = param_grads != nullptr ? &(*param_grads)[i] : nullptr;
    grad = layer_backward(layers[i], tape[i], tape[i + 1], grad, pg);
  }
  return grad;
}

Signal input_gradient(const Model& model, const Signal& x, Index y) {
  check_class(model, y);
  Vector cot = softmax(forward(model, x));
  cot(y) -= 1.0;
  return backpropagate(model, x, cot);
}

Signal class_gradient(const Model& model, const Signal& x, Index c) {
  check_class(model, c);
  Vector cot = Vector::Zero(model.num_classes());
  cot(c) = 1.0;
  return backpropagate(model, x, cot);
}

ParameterGradients zero_gradients(const Model& model) {
  ParameterGradients g;
  g.reserve(model.layers().size());
  for (const Layer& layer : model.layers()) {
    std::visit(Overloaded{
                   [&](const DenseLayer& l) {
                     g.push_back({Signal::Zero(l.weight.rows(), l.weight.cols()),
                                  Vector::Zero(l.bias.size())});
                   },
                   [&](const Conv1dLayer& l) {
                     g.push_back({Signal::Zero(l.weight.rows(), l.weight.cols()),
                                  Vector::Zero(l.bias.size())});
                   },
                   [&](const auto&) { g.push_back({}); },
               },
               layer);
  }
  return g;
}

Index predict(const Model& model, const Signal& x) {
  const Vector logits = forward(model, x);
  Index best = 0;
  for (Index i = 1; i < logits.size(); ++i) {
    if (logits(i) > logits(best)) best = i;
  }
  return best;
}

double accuracy(const Model& model, const Dataset& data) {
  if (data.empty()) throw InvalidArgument("accuracy of an empty dataset");
  Index correct = 0;
  for (const Sample& s : data.samples) {
    if (predict(model, s.x) == s.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

Model train(Model model, const Dataset& data, const TrainConfig& cfg) {
  if (data.empty()) throw TrainingError("cannot train on an empty dataset");
  if (!(cfg.learning_rate > 0.0)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (cfg.weight_decay < 0.0) throw InvalidArgument("weight decay must be >= 0");
  if (cfg.epochs < 0 || cfg.batch_size < 1) {
    throw InvalidArgument("epochs must be >= 0 and batch size >= 1");
  }
  for (const Sample& s : data.samples) {
    if (s.x.rows() != model.input_rows() || s.x.cols() != model.input_cols()) {
      throw ShapeError("dataset sample shape does not match the model input");
    }
    check_class(model, s.y);
  }
  if (cfg.epochs == 0) return model;

  Rng rng(cfg.seed);
  std::vector<Index> order(data.samples.size());
  std::iota(order.begin(), order.end(), Index{0});
  ParameterGradients velocity = zero_gradients(model);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      ParameterGradients grads = zero_gradients(model);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const Sample& s = data.samples[static_cast<std::size_t>(order[i])];
        const Vector logits = forward(model, s.x);
        batch_loss += cross_entropy(logits, s.y);
        Vector cot = softmax(logits);
        cot(s.y) -= 1.0;
        backpropagate(model, s.x, cot, &grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw TrainingError("training diverged at epoch " +
                            std::to_string(epoch) + ": loss is not finite");
      }
      const double scale = cfg.learning_rate / static_cast<double>(end - start);
      auto& layers = model.mutable_layers();
      for (std::size_t li = 0; li < layers.size(); ++li) {
        auto step = [&](Signal& w, Vector& b) {
          if (cfg.weight_decay > 0.0) {
            grads[li].weight += (cfg.weight_decay * static_cast<double>(end - start)) * w;
          }
          if (cfg.optimizer == Optimizer::kMomentum) {
            velocity[li].weight = cfg.momentum * velocity[li].weight - scale * grads[li].weight;
            velocity[li].bias = cfg.momentum * velocity[li].bias - scale * grads[li].bias;
            w += velocity[li].weight;
            b += velocity[li].bias;
          } else {
            w -= scale * grads[li].weight;
            b -= scale * grads[li].bias;
          }
        };
        std::visit(Overloaded{
                       [&](DenseLayer& l) { step(l.weight, l.bias); },
                       [&](Conv1dLayer& l) { step(l.weight, l.bias); },
                       [](auto&) {},
                   },
                   layers[li]);
      }
    }
  }
  model.train_accuracy = accuracy(model, data);
  return model;
}

Model make_mlp(Index rows, Index cols, Index hidden1, Index hidden2,
               Index classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Layer> layers;
  layers.emplace_back(dense(rows * cols, hidden1, rng));
  layers.emplace_back(ReluLayer{});
  layers.emplace_back(dense(hidden1, hidden2, rng));
  layers.emplace_back(ReluLayer{});
  layers.emplace_back(dense(hidden2, classes, rng));
  return Model(rows, cols, std::move(layers));
}

Model make_conv1d(Index channels, Index time, Index filters, Index kernel,
                  Index classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Layer> layers;
  layers.emplace_back(Conv1dLayer{
      channels, kernel,
      glorot(filters, channels * kernel, channels * kernel, filters, rng),
      Vector::Zero(filters)});
  layers.emplace_back(ReluLayer{});
  layers.emplace_back(MeanPoolLayer{});
  layers.emplace_back(dense(filters, classes, rng));
  return Model(channels, time, std::move(layers));
}

Model make_linear(const Signal& weight, Index rows, Index cols) {
  std::vector<Layer> layers;
  layers.emplace_back(DenseLayer{weight, Vector::Zero(weight.rows())});
  return Model(rows, cols, std::move(layers));
}

}  // namespace faithmask
