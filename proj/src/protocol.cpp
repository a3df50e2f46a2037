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

#include "faithmask/protocol.hpp"

#include <cmath>
#include <sstream>

#include "faithmask/spectrum.hpp"

namespace faithmask {
namespace {

constexpr std::uint64_t kSaliencyTag = 0x5a11;
constexpr std::uint64_t kAdversarialTag = 0xad7;
constexpr std::uint64_t kEndpointTag = 0xf011;

Signal saliency_map(const Model& model, const Signal& x, Index y, const MethodSpec& method,
                    std::uint64_t seed) {
  if (const auto* cfg = std::get_if<AttributionConfig>(&method)) {
    AttributionConfig c = *cfg;
    c.seed = seed;
    return attribute(model, x, y, c).values;
  }
  return std::get<OracleAttribution>(method).indicator;
}

}  // namespace

std::string method_label(const MethodSpec& method) {
  if (const auto* cfg = std::get_if<AttributionConfig>(&method)) {
    return method_name(cfg->method, cfg->absolute);
  }
  return "ORACLE";
}

std::vector<double> default_ratios() {
  std::vector<double> r;
  for (int i = 1; i <= 10; ++i) r.push_back(i / 20.0);
  return r;
}

void validate_ratios(const std::vector<double>& ratios) {
  if (ratios.empty()) throw InvalidArgument("ratio list is empty");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0 && ratios[i] <= 1.0)) throw InvalidArgument("ratios must lie in (0, 1]");
    if (i > 0 && !(ratios[i] > ratios[i - 1])) throw InvalidArgument("ratios must be strictly ascending");
  }
}

DomainScores domain_scores(const Model& model, const Signal& x, Index y, const MethodSpec& method,
                           Domain domain, std::uint64_t seed, SpectralScoreMode mode) {
  DomainScores s;
  s.domain = domain;
  const auto* oracle = std::get_if<OracleAttribution>(&method);
  if (domain == Domain::kSpectral) {
    s.bin_power = Spectrum::of(x, 1.0).power();
    if (oracle) {
      if (oracle->domain != Domain::kSpectral || oracle->indicator.size() != s.bin_power.size()) {
        throw InvalidArgument("spectral evaluation needs a per-bin indicator");
      }
      s.bin_scores = oracle->indicator.reshaped<Eigen::RowMajor>();
    } else {
      s.bin_scores = project_spectral(saliency_map(model, x, y, method, seed), x, mode);
    }
    return s;
  }
  if (oracle && (oracle->indicator.rows() != x.rows() || oracle->indicator.cols() != x.cols())) {
    throw InvalidArgument("indicator shape differs from the input shape");
  }
  s.map = saliency_map(model, x, y, method, seed);
  return s;
}

FeatureSubset select_subset(const DomainScores& scores, double ratio, Order order,
                            double band_tolerance) {
  switch (scores.domain) {
    case Domain::kSpatial: return select_spatial(aggregate_spatial(scores.map), ratio, order);
    case Domain::kTemporal: return select_temporal(scores.map, ratio, order);
    case Domain::kGrid: return select_grid(scores.map, ratio, order);
    case Domain::kSpectral:
      return select_spectral(scores.bin_scores, scores.bin_power, ratio, order, band_tolerance);
  }
  return {};
}

PreparedOperator prepare_operator(const Model& model, const Dataset& data, const OperatorConfig& op,
                                  Domain domain, std::uint64_t seed) {
  if (data.empty()) throw InvalidArgument("cannot evaluate on an empty dataset");
  PreparedOperator p;
  p.op = op;
  p.domain = domain;
  p.ctx = MaskingContext::of(data);
  p.seed = seed;
  if (const std::string why = incompatibility(op.kind, domain, p.ctx); !why.empty()) {
    throw InvalidArgument(operator_name(op.kind) + " cannot mask the " + domain_name(domain) +
                          " domain: " + why);
  }
  p.acc0 = accuracy(model, data);
  if (op.kind == OperatorKind::kAim) {
    p.op.adversarial.seed = derive_seed(seed, {kAdversarialTag});
    if (op.calibrate) {
      p.calibration = calibrate_epsilon(model, data, p.op.adversarial, op.epsilon_grid,
                                        op.calibration_tolerance);
      p.op.adversarial.epsilon = p.calibration->epsilon;
    }
    p.x_adv.reserve(static_cast<std::size_t>(data.size()));
    for (Index i = 0; i < data.size(); ++i) {
      AdversarialConfig cfg = p.op.adversarial;
      cfg.seed = derive_seed(p.op.adversarial.seed, {static_cast<std::uint64_t>(i)});
      const Sample& s = data.samples[static_cast<std::size_t>(i)];
      p.x_adv.push_back(pgd(model, s.x, s.y, cfg).x_adv);
    }
  }
  Index correct = 0;
  for (Index i = 0; i < data.size(); ++i) {
    const Sample& s = data.samples[static_cast<std::size_t>(i)];
    const FeatureSubset all = full_subset(domain, s.x.rows(), s.x.cols());
    const Signal* adv = p.x_adv.empty() ? nullptr : &p.x_adv[static_cast<std::size_t>(i)];
    const Signal masked = apply_operator(p.op, p.ctx, s.x, adv, all,
                                         derive_seed(seed, {kEndpointTag, static_cast<std::uint64_t>(i)}), true);
    if (predict(model, masked) == s.y) ++correct;
  }
  p.acc_full = static_cast<double>(correct) / static_cast<double>(data.size());
  return p;
}

DegradationCurve run_curve(const Model& model, const Dataset& data, const MethodSpec& method,
                           const PreparedOperator& prepared, const std::vector<double>& ratios,
                           std::uint64_t seed, const CurveOptions& options) {
  validate_ratios(ratios);
  if (data.empty()) throw InvalidArgument("cannot evaluate on an empty dataset");
  const std::size_t K = ratios.size();
  std::vector<Index> morf_correct(K, 0), lerf_correct(K, 0);
  for (Index i = 0; i < data.size(); ++i) {
    const auto ui = static_cast<std::uint64_t>(i);
    const Sample& s = data.samples[static_cast<std::size_t>(i)];
    const DomainScores scores = domain_scores(model, s.x, s.y, method, prepared.domain,
                                              derive_seed(seed, {kSaliencyTag, ui}), options.spectral_mode);
    const Signal* adv = prepared.x_adv.empty() ? nullptr : &prepared.x_adv[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < K; ++k) {
      // Ratio 1 is the all-masked endpoint; it reuses the acc_full input.
      if (ratios[k] >= 1.0) {
        const Signal masked = apply_operator(prepared.op, prepared.ctx, s.x, adv,
                                             full_subset(prepared.domain, s.x.rows(), s.x.cols()),
                                             derive_seed(prepared.seed, {kEndpointTag, ui}), true);
        if (predict(model, masked) == s.y) {
          ++morf_correct[k];
          ++lerf_correct[k];
        }
        continue;
      }
      for (Order order : {Order::kMorf, Order::kLerf}) {
        const FeatureSubset subset = select_subset(scores, ratios[k], order, prepared.op.band_tolerance);
        const std::uint64_t op_seed =
            derive_seed(prepared.seed, {ui, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(order)});
        const Signal masked = apply_operator(prepared.op, prepared.ctx, s.x, adv, subset, op_seed);
        if (predict(model, masked) == s.y) ++(order == Order::kMorf ? morf_correct : lerf_correct)[k];
      }
    }
  }
  DegradationCurve c;
  c.ratios = ratios;
  const double n = static_cast<double>(data.size());
  for (std::size_t k = 0; k < K; ++k) {
    c.acc_morf.push_back(static_cast<double>(morf_correct[k]) / n);
    c.acc_lerf.push_back(static_cast<double>(lerf_correct[k]) / n);
  }
  c.acc0 = prepared.acc0;
  c.acc_full = prepared.acc_full;
  c.meta.method = method_label(method);
  c.meta.op = operator_name(prepared.op.kind);
  c.meta.domain = domain_name(prepared.domain);
  c.meta.seed = seed;
  return c;
}

DegradationCurve run_curve(const Model& model, const Dataset& data, const MethodSpec& method,
                           Domain domain, const OperatorConfig& op,
                           const std::vector<double>& ratios, std::uint64_t seed) {
  validate_ratios(ratios);
  return run_curve(model, data, method, prepare_operator(model, data, op, domain, seed), ratios, seed);
}

RandomBias random_bias(const Model& model, const Dataset& data, const PreparedOperator& prepared,
                       const std::vector<double>& ratios, Index n_perm, std::uint64_t seed) {
  if (n_perm < 1) throw InvalidArgument("n_perm must be >= 1");
  AttributionConfig random;
  random.method = Method::kRandom;
  std::vector<double> abc;
  abc.reserve(static_cast<std::size_t>(n_perm));
  for (Index p = 0; p < n_perm; ++p) {
    const DegradationCurve c =
        run_curve(model, data, random, prepared, ratios, derive_seed(seed, {static_cast<std::uint64_t>(p)}));
    abc.push_back(area_metrics(c).abc);
  }
  return summarize_bias(std::move(abc));
}

}  // namespace faithmask
