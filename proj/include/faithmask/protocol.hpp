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

#ifndef FAITHMASK_PROTOCOL_HPP_
#define FAITHMASK_PROTOCOL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "faithmask/attribution.hpp"
#include "faithmask/core.hpp"
#include "faithmask/dataset.hpp"
#include "faithmask/feature_domains.hpp"
#include "faithmask/masking.hpp"
#include "faithmask/metrics.hpp"
#include "faithmask/model.hpp"
#include "faithmask/tasks.hpp"

namespace faithmask {

// A saliency method, or a fixed indicator map used as one.
using MethodSpec = std::variant<AttributionConfig, OracleAttribution>;
std::string method_label(const MethodSpec& method);  // "GD", ..., "ORACLE"

// 0.05, 0.10, ..., 0.50.
std::vector<double> default_ratios();
// Non-empty, strictly ascending, within (0, 1].
void validate_ratios(const std::vector<double>& ratios);

// Saliency of one sample expressed in the features of `domain`: the map
// itself for time-domain and grid domains, per-bin scores and power for the
// spectral domain.
struct DomainScores {
  Domain domain = Domain::kSpatial;
  Signal map;
  Vector bin_scores;
  Vector bin_power;
};
DomainScores domain_scores(const Model& model, const Signal& x, Index y,
                           const MethodSpec& method, Domain domain, std::uint64_t seed,
                           SpectralScoreMode mode = SpectralScoreMode::kChainRule);
FeatureSubset select_subset(const DomainScores& scores, double ratio, Order order,
                            double band_tolerance = 0.1);

// Everything about an operator that does not depend on the saliency method:
// the calibrated adversarial budget, one cached counterpart per sample, and
// the curve endpoints acc0 and acc_full.
struct PreparedOperator {
  OperatorConfig op;
  Domain domain = Domain::kSpatial;
  MaskingContext ctx;
  std::uint64_t seed = 0;
  std::optional<CalibrationResult> calibration;
  std::vector<Signal> x_adv;
  double acc0 = 0.0;
  double acc_full = 0.0;
};
// Throws InvalidArgument when the operator cannot mask `domain` on `data`.
PreparedOperator prepare_operator(const Model& model, const Dataset& data,
                                  const OperatorConfig& op, Domain domain, std::uint64_t seed);

struct CurveOptions {
  SpectralScoreMode spectral_mode = SpectralScoreMode::kChainRule;
};

// Saliency seeds derive from `seed` and the sample index. Operator noise
// derives from the prepared operator's seed, so methods evaluated against
// the same preparation share it.
DegradationCurve run_curve(const Model& model, const Dataset& data, const MethodSpec& method,
                           const PreparedOperator& prepared, const std::vector<double>& ratios,
                           std::uint64_t seed, const CurveOptions& options = {});
DegradationCurve run_curve(const Model& model, const Dataset& data, const MethodSpec& method,
                           Domain domain, const OperatorConfig& op,
                           const std::vector<double>& ratios, std::uint64_t seed);

// ABC of n_perm independent random saliency maps.
RandomBias random_bias(const Model& model, const Dataset& data, const PreparedOperator& prepared,
                       const std::vector<double>& ratios, Index n_perm, std::uint64_t seed);

}  // namespace faithmask

#endif  // FAITHMASK_PROTOCOL_HPP_
