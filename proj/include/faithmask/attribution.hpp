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

#ifndef FAITHMASK_ATTRIBUTION_HPP_
#define FAITHMASK_ATTRIBUTION_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "faithmask/core.hpp"
#include "faithmask/model.hpp"

namespace faithmask {

enum class Method { kGradient, kGradientInput, kSmoothGrad, kSmoothGradSquared,
                    kVarGrad, kIntegratedGradients, kRandom };

// Scalar that gradient saliency differentiates. PGD always uses the loss.
enum class Target { kLogit, kLogProbability };

struct AttributionConfig {
  Method method = Method::kGradient;
  // SG/SS/VG noise std as a fraction of the input's std.
  double noise_fraction = 0.1;
  int n_samples = 32;
  int ig_steps = 64;
  // Zero tensor when unset.
  std::optional<Signal> ig_baseline;
  bool absolute = false;
  std::uint64_t seed = 0;
  Target target = Target::kLogit;
};

struct SaliencyMap {
  Signal values;
  Method method = Method::kGradient;
  bool absolute = false;
};

// "GD", "GI", "SG", "SS", "VG", "IG", "RANDOM"; absolute variants append "A".
std::string method_name(Method method, bool absolute);
// Inverse of method_name. Throws InvalidArgument for unknown tags.
AttributionConfig parse_method(const std::string& tag);

Signal target_gradient(const Model& model, const Signal& x, Index y, Target target);

SaliencyMap attribute_gd(const Model& model, const Signal& x, Index y,
                         Target target = Target::kLogit);
SaliencyMap attribute_gi(const Model& model, const Signal& x, Index y,
                         Target target = Target::kLogit);
SaliencyMap attribute_sg(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg);
SaliencyMap attribute_ss(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg);
SaliencyMap attribute_vg(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg);
SaliencyMap attribute_ig(const Model& model, const Signal& x, Index y,
                         const AttributionConfig& cfg);
// i.i.d. Uniform(0, 1) scores, exclusive of both ends.
SaliencyMap attribute_random(Index rows, Index cols, std::uint64_t seed);
SaliencyMap to_absolute(const SaliencyMap& s);

// Dispatches on cfg.method and applies cfg.absolute.
SaliencyMap attribute(const Model& model, const Signal& x, Index y,
                      const AttributionConfig& cfg);

// Gradients at x + noise for the shared SG/SS/VG ensemble.
struct NoiseEnsemble {
  Signal mean;         // SG
  Signal mean_square;  // SS
  Signal variance;     // VG, population convention
};
NoiseEnsemble noise_ensemble(const Model& model, const Signal& x, Index y,
                             const AttributionConfig& cfg);

}  // namespace faithmask

#endif  // FAITHMASK_ATTRIBUTION_HPP_
