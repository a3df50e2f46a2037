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

#include "faithmask/feature_domains.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "faithmask/spectrum.hpp"

namespace faithmask {
namespace {

std::vector<Index> rank_select(const Vector& scores, Index count, Order order) {
  std::vector<Index> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return order == Order::kMorf ? scores(a) > scores(b) : scores(a) < scores(b);
  });
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Index> run(Index lo, Index len) {
  std::vector<Index> v(static_cast<std::size_t>(len));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

}  // namespace

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::kSpatial: return "spatial";
    case Domain::kTemporal: return "temporal";
    case Domain::kSpectral: return "spectral";
    case Domain::kGrid: return "grid";
  }
  return "?";
}

Domain parse_domain(const std::string& name) {
  for (Domain d : {Domain::kSpatial, Domain::kTemporal, Domain::kSpectral, Domain::kGrid}) {
    if (domain_name(d) == name) return d;
  }
  throw InvalidArgument("unknown feature domain '" + name + "'");
}

std::string order_name(Order o) { return o == Order::kMorf ? "morf" : "lerf"; }

Vector aggregate_spatial(const Signal& saliency) { return saliency.rowwise().sum(); }

FeatureSubset select_spatial(const Vector& scores, double ratio, Order order) {
  if (scores.size() == 0) throw InvalidArgument("no channels to select from");
  const Index n = count_for_ratio(ratio, scores.size());
  return {Domain::kSpatial, rank_select(scores, n, order), ratio};
}

FeatureSubset select_temporal(const Signal& saliency, double ratio, Order order) {
  const Index t_len = saliency.cols();
  if (t_len == 0) throw InvalidArgument("no time steps to select from");
  const Index len = count_for_ratio(ratio, t_len);
  if (len > t_len) throw InvalidArgument("window longer than the signal");
  const Vector per_step = saliency.colwise().sum().transpose();
  Index best = 0;
  double best_sum = per_step.segment(0, len).sum();
  for (Index start = 1; start + len <= t_len; ++start) {
    const double s = per_step.segment(start, len).sum();
    // Summation order perturbs equal windows in the last bits; treat those as ties.
    const double tol = 1e-12 * std::max(1.0, std::abs(best_sum));
    if (order == Order::kMorf ? s > best_sum + tol : s < best_sum - tol) {
      best = start;
      best_sum = s;
    }
  }
  return {Domain::kTemporal, run(best, len), ratio};
}

FeatureSubset select_grid(const Signal& saliency, double ratio, Order order) {
  if (saliency.size() == 0) throw InvalidArgument("empty grid");
  const Eigen::Map<const Vector> flat(saliency.data(), saliency.size());
  const Index n = count_for_ratio(ratio, flat.size());
  return {Domain::kGrid, rank_select(flat, n, order), ratio};
}

Vector project_spectral(const Signal& saliency, const Signal& x, SpectralScoreMode mode) {
  if (saliency.rows() != x.rows() || saliency.cols() != x.cols()) {
    throw ShapeError("saliency map and input differ in shape");
  }
  const ComplexSignal g = rfft_rows(saliency);
  Vector scores = Vector::Zero(g.cols());
  if (mode == SpectralScoreMode::kMagnitude) {
    return g.cwiseAbs().colwise().sum().transpose();
  }
  const ComplexSignal spec = rfft_rows(x);
  const Index n = x.cols();
  for (Index c = 0; c < g.rows(); ++c) {
    for (Index f = 0; f < g.cols(); ++f) {
      const Complex rot = std::polar(1.0, std::arg(spec(c, f)));
      scores(f) += bin_multiplicity(f, n) / static_cast<double>(n) *
                   (rot * std::conj(g(c, f))).real();
    }
  }
  return scores;
}

Vector spectral_saliency(const Model& model, const Signal& x, Index y) {
  return project_spectral(class_gradient(model, x, y), x, SpectralScoreMode::kChainRule);
}

Band select_band(const Vector& importance, const Vector& power, double ratio,
                 Order order, double tolerance) {
  const Index n = power.size();
  if (n == 0) throw InvalidArgument("empty spectrum");
  if (importance.size() != n) throw ShapeError("importance and power differ in length");
  if (!(ratio > 0.0)) throw InvalidArgument("masking ratio must be positive");
  if (ratio >= 1.0 - 1e-12) return {0, n - 1};
  if ((power.array() < 0.0).any()) throw InvalidArgument("negative power");

  // Flat power when the spectrum carries none, so the search is still defined.
  const Vector p = power.sum() > 0.0 ? power : Vector::Ones(n);
  Vector prefix_p(n + 1), prefix_i(n + 1);
  prefix_p(0) = prefix_i(0) = 0.0;
  for (Index i = 0; i < n; ++i) {
    prefix_p(i + 1) = prefix_p(i) + p(i);
    prefix_i(i + 1) = prefix_i(i) + importance(i);
  }
  const double target = ratio * prefix_p(n);
  const double reach = target * (1.0 - 1e-12);

  struct Candidate {
    Band band;
    double power;
    double mean;
  };
  std::vector<Candidate> candidates;
  Index hi = 0;
  for (Index lo = 0; lo < n; ++lo) {
    hi = std::max(hi, lo);
    while (hi < n && prefix_p(hi + 1) - prefix_p(lo) < reach) ++hi;
    if (hi == n) break;
    const double bp = prefix_p(hi + 1) - prefix_p(lo);
    const double mean = (prefix_i(hi + 1) - prefix_i(lo)) / static_cast<double>(hi - lo + 1);
    candidates.push_back({{lo, hi}, bp, mean});
  }

  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (c.power > target * (1.0 + tolerance)) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    const bool better = order == Order::kMorf ? c.mean > best->mean : c.mean < best->mean;
    const bool tie_shorter = c.mean == best->mean && c.band.size() < best->band.size();
    if (better || tie_shorter) best = &c;
  }
  if (best != nullptr) return best->band;

  for (const Candidate& c : candidates) {
    if (best == nullptr) {
      best = &c;
      continue;
    }
    const double d = std::abs(c.power - target);
    const double bd = std::abs(best->power - target);
    if (d < bd || (d == bd && c.band.size() < best->band.size())) best = &c;
  }
  return best->band;
}

FeatureSubset select_spectral(const Vector& bin_scores, const Vector& bin_power,
                              double ratio, Order order, double tolerance) {
  if (bin_scores.size() != bin_power.size()) {
    throw ShapeError("scores and power spectrum differ in length");
  }
  if (bin_scores.size() < 2) throw InvalidArgument("empty spectrum");
  const Index f = bin_scores.size() - 1;
  const Band b = select_band(bin_scores.tail(f), bin_power.tail(f), ratio, order, tolerance);
  return {Domain::kSpectral, run(b.lo + 1, b.size()), ratio};
}

}  // namespace faithmask
