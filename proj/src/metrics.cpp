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

#include "faithmask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace faithmask {

void DegradationCurve::validate() const {
  if (ratios.empty()) throw InvalidArgument("curve has no ratios");
  if (acc_morf.size() != ratios.size() || acc_lerf.size() != ratios.size()) {
    throw InvalidArgument("curve accuracies and ratios differ in length");
  }
  auto in_unit = [](double a) { return std::isfinite(a) && a >= 0.0 && a <= 1.0; };
  if (!in_unit(acc0) || !in_unit(acc_full) || !std::all_of(acc_morf.begin(), acc_morf.end(), in_unit) ||
      !std::all_of(acc_lerf.begin(), acc_lerf.end(), in_unit)) {
    throw InvalidArgument("curve accuracy outside [0, 1]");
  }
}

AreaMetrics area_metrics(const DegradationCurve& curve) {
  curve.validate();
  const double gap = curve.acc0 - curve.acc_full;
  if (std::abs(gap) < kDegenerateGap) {
    std::ostringstream msg;
    msg << "acc0 (" << curve.acc0 << ") equals the fully masked accuracy (" << curve.acc_full
        << "): operator " << curve.meta.op << " did not remove the information on "
        << curve.meta.domain;
    throw DegenerateError(msg.str());
  }
  AreaMetrics m;
  for (Index k = 0; k < curve.size(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    m.aoc += curve.acc0 - curve.acc_morf[i];
    m.abc += curve.acc_lerf[i] - curve.acc_morf[i];
    m.auc += curve.acc_lerf[i] - curve.acc_full;
  }
  const double scale = 1.0 / (static_cast<double>(curve.size()) * gap);
  m.aoc *= scale;
  m.abc *= scale;
  m.auc *= scale;
  return m;
}

Vector average_ranks(const Vector& values) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) < values(b); });
  Vector ranks(n);
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index t = i; t <= j; ++t) ranks(order[static_cast<std::size_t>(t)]) = r;
    i = j + 1;
  }
  return ranks;
}

SpearmanResult spearman(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InvalidArgument("spearman needs rankings of equal length");
  if (a.size() < 2) throw InvalidArgument("spearman needs at least two items");
  const Vector ra = average_ranks(a);
  const Vector rb = average_ranks(b);
  const Vector da = ra.array() - ra.mean();
  const Vector db = rb.array() - rb.mean();
  const double va = da.squaredNorm();
  const double vb = db.squaredNorm();
  if (va == 0.0 || vb == 0.0) return {0.0, true};
  return {std::clamp(da.dot(db) / std::sqrt(va * vb), -1.0, 1.0), false};
}

ConsistencyResult ranking_consistency(const std::vector<DegradationCurve>& curves, double max_ratio) {
  if (curves.size() < 2) throw InvalidArgument("ranking consistency needs at least two methods");
  for (const auto& c : curves) {
    c.validate();
    if (c.ratios != curves.front().ratios) throw InvalidArgument("curves use different ratios");
  }
  const Index methods = static_cast<Index>(curves.size());
  ConsistencyResult out;
  out.ratios = curves.front().ratios;
  double sum = 0.0;
  for (std::size_t k = 0; k < out.ratios.size(); ++k) {
    Vector morf(methods), lerf(methods);
    for (Index m = 0; m < methods; ++m) {
      const auto& c = curves[static_cast<std::size_t>(m)];
      morf(m) = c.acc0 - c.acc_morf[k];
      lerf(m) = c.acc_lerf[k] - c.acc_full;
    }
    const SpearmanResult s = spearman(morf, lerf);
    out.rho.push_back(s.rho);
    out.degenerate.push_back(s.degenerate);
    out.morf_ranks.push_back(average_ranks(morf));
    out.lerf_ranks.push_back(average_ranks(lerf));
    if (out.ratios[k] <= max_ratio + 1e-12) {
      sum += s.rho;
      ++out.ratios_averaged;
    }
  }
  if (out.ratios_averaged == 0) throw InvalidArgument("no ratio at or below the averaging limit");
  out.mean_rho = sum / static_cast<double>(out.ratios_averaged);
  return out;
}

double stability(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("stability needs at least one configuration");
  return population_std(Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size())));
}

AreaMetrics stability(const std::vector<AreaMetrics>& values) {
  std::vector<double> aoc, abc, auc;
  for (const auto& v : values) {
    aoc.push_back(v.aoc);
    abc.push_back(v.abc);
    auc.push_back(v.auc);
  }
  return {stability(aoc), stability(abc), stability(auc)};
}

bool RandomBias::within_clt_band() const {
  return std::abs(mean) <= 3.0 * std / std::sqrt(static_cast<double>(n_perm()));
}

RandomBias summarize_bias(std::vector<double> abc) {
  if (abc.empty()) throw InvalidArgument("random bias needs at least one permutation");
  RandomBias r;
  r.abc = std::move(abc);
  const Eigen::Map<const Vector> v(r.abc.data(), r.n_perm());
  r.mean = v.mean();
  if (v.size() > 1) r.std = std::sqrt((v.array() - r.mean).square().sum() / static_cast<double>(v.size() - 1));
  return r;
}

}  // namespace faithmask
