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

#ifndef FAITHMASK_METRICS_HPP_
#define FAITHMASK_METRICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "faithmask/core.hpp"

namespace faithmask {

struct CurveMetadata {
  std::string method;
  std::string op;
  std::string domain;
  std::string model;
  std::uint64_t seed = 0;
};

// Accuracy after masking the top (MoRF) or bottom (LeRF) features at each
// ratio, together with the unmasked and fully masked endpoints.
struct DegradationCurve {
  std::vector<double> ratios;
  std::vector<double> acc_morf;
  std::vector<double> acc_lerf;
  double acc0 = 0.0;
  double acc_full = 0.0;
  CurveMetadata meta;

  Index size() const { return static_cast<Index>(ratios.size()); }
  // Throws InvalidArgument on length mismatch, K = 0 or an accuracy
  // outside [0, 1].
  void validate() const;
};

struct AreaMetrics {
  double aoc = 0.0;
  double abc = 0.0;
  double auc = 0.0;
};

// Areas normalized by acc0 - acc_full. Throws DegenerateError when
// |acc0 - acc_full| < kDegenerateGap.
inline constexpr double kDegenerateGap = 1e-6;
AreaMetrics area_metrics(const DegradationCurve& curve);

// Ranks starting at 1, ties sharing the average of their positions.
Vector average_ranks(const Vector& values);

struct SpearmanResult {
  double rho = 0.0;
  // A ranking had zero variance; rho is reported as 0.
  bool degenerate = false;
};
SpearmanResult spearman(const Vector& a, const Vector& b);

struct ConsistencyResult {
  std::vector<double> ratios;
  std::vector<double> rho;
  std::vector<bool> degenerate;
  // Per ratio, the method ranks by MoRF degradation acc0 - acc_morf and by
  // LeRF preservation acc_lerf - acc_full (rank 1 = least faithful).
  std::vector<Vector> morf_ranks;
  std::vector<Vector> lerf_ranks;
  // Mean over ratios <= max_ratio, degenerate ratios counted as 0.
  double mean_rho = 0.0;
  Index ratios_averaged = 0;
};
// One curve per method, all over the same ratios.
ConsistencyResult ranking_consistency(const std::vector<DegradationCurve>& curves,
                                      double max_ratio = 0.5);

// Population standard deviation of each metric over configurations.
AreaMetrics stability(const std::vector<AreaMetrics>& values);
double stability(const std::vector<double>& values);

struct RandomBias {
  double mean = 0.0;
  // Sample standard deviation over permutations (0 for a single one).
  double std = 0.0;
  std::vector<double> abc;
  Index n_perm() const { return static_cast<Index>(abc.size()); }
  // |mean| <= 3 std / sqrt(n_perm).
  bool within_clt_band() const;
};
RandomBias summarize_bias(std::vector<double> abc);

}  // namespace faithmask

#endif  // FAITHMASK_METRICS_HPP_
