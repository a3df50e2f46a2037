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

#include "faithmask/attribution.hpp"

#include <array>
#include <utility>
#include <vector>

namespace faithmask {
namespace {

constexpr std::array<std::pair<Method, const char*>, 7> kMethodTags{{
    {Method::kGradient, "GD"},
    {Method::kGradientInput, "GI"},
    {Method::kSmoothGrad, "SG"},
    {Method::kSmoothGradSquared, "SS"},
    {Method::kVarGrad, "VG"},
    {Method::kIntegratedGradients, "IG"},
    {Method::kRandom, "RANDOM"},
}};

void check_ensemble(const AttributionConfig& cfg) {
  if (cfg.noise_fraction < 0.0) throw InvalidArgument("noise std must be >= 0");
  if (cfg.n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
}

}  // namespace

std::string method_name(Method method, bool absolute) {
  for (const auto& [m, tag] : kMethodTags) {
    if (m == method) return std::string(tag) + (absolute ? "A" : "");
  }
  return "?";
}

AttributionConfig parse_method(const std::string& tag) {
  AttributionConfig cfg;
  for (const auto& [m, name] : kMethodTags) {
    if (tag == name) {
      cfg.method = m;
      return cfg;
    }
  }
  // Absolute variants: GDA, GIA, SGA, IGA (and SSA/VGA, which are already
  // nonnegative but accepted for symmetry).
  if (tag.size() == 3 && tag.back() == 'A') {
    cfg = parse_method(tag.substr(0, 2));
    cfg.absolute = true;
    return cfg;
  }
  throw InvalidArgument("unknown attribution method '" + tag + "'");
}

Signal target_gradient(const Model& model, const Signal& x, Index y, Target target) {
  if (target == Target::kLogit) return class_gradient(model, x, y);
  return -input_gradient(model, x, y);
}

SaliencyMap attribute_gd(const Model& model, const Signal& x, Index y, Target target) {
  return {target_gradient(model, x, y, target), Method::kGradient, false};
}

SaliencyMap attribute_gi(const Model& model, const Signal& x, Index y, Target target) {
  return {x.cwiseProduct(target_gradient(model, x, y, target)),
          Method::kGradientInput, false};
}

NoiseEnsemble noise_ensemble(const Model& model, const Signal& x, Index y,
                             const AttributionConfig& cfg) {
  check_ensemble(cfg);
  const double sigma = cfg.noise_fraction * population_std(x);
  Rng rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Signal> grads;
  grads.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (int j = 0; j < cfg.n_samples; ++j) {
    Signal noisy = x;
    for (Index i = 0; i < noisy.size(); ++i) noisy.data()[i] += sigma * normal(rng);
    grads.push_back(target_gradient(model, noisy, y, cfg.target));
  }
  const double n = static_cast<double>(cfg.n_samples);
  NoiseEnsemble e{Signal::Zero(x.rows(), x.cols()), Signal::Zero(x.rows(), x.cols()),
                  Signal::Zero(x.rows(), x.cols())};
  for (const Signal& g : grads) {
    e.mean += g;
    e.mean_square += g.cwiseAbs2();
  }
  e.mean /= n;
  e.mean_square /= n;
  for (const Signal& g : grads) e.variance += (g - e.mean).cwiseAbs2();
  e.variance /= n;
  return e;
}

SaliencyMap attribute_sg(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg) {
  return {noise_ensemble(model, x, y, cfg).mean, Method::kSmoothGrad, false};
}

SaliencyMap attribute_ss(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg) {
  return {noise_ensemble(model, x, y, cfg).mean_square, Method::kSmoothGradSquared,
          false};
}

SaliencyMap attribute_vg(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg) {
  return {noise_ensemble(model, x, y, cfg).variance, Method::kVarGrad, false};
}

SaliencyMap attribute_ig(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg) {
  if (cfg.ig_steps < 1) throw InvalidArgument("ig_steps must be >= 1");
  const Signal baseline =
      cfg.ig_baseline ? *cfg.ig_baseline : Signal::Zero(x.rows(), x.cols());
  if (baseline.rows() != x.rows() || baseline.cols() != x.cols()) {
    throw ShapeError("integrated-gradients baseline shape differs from input");
  }
  const Signal delta = x - baseline;
  Signal sum = Signal::Zero(x.rows(), x.cols());
  const double m = static_cast<double>(cfg.ig_steps);
  // Midpoint rule over the straight path.
  for (int j = 1; j <= cfg.ig_steps; ++j) {
    const double alpha = (static_cast<double>(j) - 0.5) / m;
    sum += target_gradient(model, baseline + alpha * delta, y, cfg.target);
  }
  return {delta.cwiseProduct(sum / m), Method::kIntegratedGradients, false};
}

SaliencyMap attribute_random(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw ShapeError("random saliency needs a nonempty shape");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Signal s(rows, cols);
  for (Index i = 0; i < s.size(); ++i) {
    double v = u(rng);
    while (v <= 0.0) v = u(rng);
    s.data()[i] = v;
  }
  return {std::move(s), Method::kRandom, false};
}

SaliencyMap to_absolute(const SaliencyMap& s) {
  return {s.values.cwiseAbs(), s.method, true};
}

SaliencyMap attribute(const Model& model, const Signal& x, Index y,
                      const AttributionConfig& cfg) {
  SaliencyMap s;
  switch (cfg.method) {
    case Method::kGradient: s = attribute_gd(model, x, y, cfg.target); break;
    case Method::kGradientInput: s = attribute_gi(model, x, y, cfg.target); break;
    case Method::kSmoothGrad: s = attribute_sg(model, x, y, cfg); break;
    case Method::kSmoothGradSquared: s = attribute_ss(model, x, y, cfg); break;
    case Method::kVarGrad: s = attribute_vg(model, x, y, cfg); break;
    case Method::kIntegratedGradients: s = attribute_ig(model, x, y, cfg); break;
    case Method::kRandom: s = attribute_random(x.rows(), x.cols(), cfg.seed); break;
  }
  return cfg.absolute ? to_absolute(s) : s;
}

}  // namespace faithmask
