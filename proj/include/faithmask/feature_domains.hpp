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

#ifndef FAITHMASK_FEATURE_DOMAINS_HPP_
#define FAITHMASK_FEATURE_DOMAINS_HPP_

#include <string>
#include <vector>

#include "faithmask/core.hpp"
#include "faithmask/model.hpp"

namespace faithmask {

enum class Domain { kSpatial, kTemporal, kSpectral, kGrid };
enum class Order { kMorf, kLerf };

std::string domain_name(Domain d);  // "spatial", "temporal", ...
Domain parse_domain(const std::string& name);
std::string order_name(Order o);  // "morf", "lerf"

// Selected features for one ratio and order. `indices` is sorted ascending
// and holds channels (spatial), time steps (temporal), DFT bins (spectral)
// or row-major pixel indices (grid). Temporal and spectral subsets are
// contiguous runs.
struct FeatureSubset {
  Domain domain = Domain::kSpatial;
  std::vector<Index> indices;
  double ratio = 0.0;

  bool empty() const { return indices.empty(); }
  Index size() const { return static_cast<Index>(indices.size()); }
};

// Per-channel sum of a channels x time saliency map.
Vector aggregate_spatial(const Signal& saliency);
// ceil(k * C) channels with the highest (MoRF) or lowest (LeRF) score;
// lower channel index wins ties.
FeatureSubset select_spatial(const Vector& scores, double ratio, Order order);
// Window of ceil(k * T) steps maximizing (MoRF) or minimizing (LeRF) the
// summed saliency over channels and window; earliest window wins ties.
FeatureSubset select_temporal(const Signal& saliency, double ratio, Order order);
// ceil(k * H * W) pixels by score; row-major order breaks ties.
FeatureSubset select_grid(const Signal& saliency, double ratio, Order order);

enum class SpectralScoreMode {
  // Projection of the saliency map onto d x / d amplitude of each bin of x.
  // Applied to the logit gradient this is the exact amplitude gradient.
  kChainRule,
  // Channel-summed DFT magnitude of the saliency map.
  kMagnitude,
};

// Per-bin scores for bins 0 .. T/2 of a time-domain saliency map.
Vector project_spectral(const Signal& saliency, const Signal& x,
                        SpectralScoreMode mode = SpectralScoreMode::kChainRule);
// d logit_y / d A_{c,f} summed over channels, one entry per bin.
Vector spectral_saliency(const Model& model, const Signal& x, Index y);

struct Band {
  Index lo = 0;  // inclusive
  Index hi = 0;  // inclusive
  Index size() const { return hi - lo + 1; }
};

// Band search over entries 0 .. F-1. For every start the shortest band whose
// power reaches ratio * total is a candidate; candidates overshooting the
// target by more than `tolerance` (relative) are discarded. The remaining
// candidate with the highest (MoRF) or lowest (LeRF) mean importance wins,
// shorter then earlier bands breaking ties. When every candidate overshoots,
// the one closest in power to the target is used. ratio >= 1 selects all.
Band select_band(const Vector& importance, const Vector& power, double ratio,
                 Order order, double tolerance = 0.1);

// Spectral subset over bins 1 .. T/2 (the DC bin is never a feature).
// `bin_scores` and `bin_power` cover every bin including DC.
FeatureSubset select_spectral(const Vector& bin_scores, const Vector& bin_power,
                              double ratio, Order order, double tolerance = 0.1);

}  // namespace faithmask

#endif  // FAITHMASK_FEATURE_DOMAINS_HPP_
