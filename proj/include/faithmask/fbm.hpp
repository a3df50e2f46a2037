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

#ifndef FAITHMASK_FBM_HPP_
#define FAITHMASK_FBM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "faithmask/core.hpp"

namespace faithmask {

// <B(t1), B(t2)> for fractional Brownian motion with Hurst index `hurst`.
template <typename Scalar>
Scalar fbm_covariance(Scalar t1, Scalar t2, Scalar hurst) {
  using std::abs;
  using std::pow;
  const Scalar e = Scalar(2) * hurst;
  return Scalar(0.5) * (pow(abs(t1), e) + pow(abs(t2), e) - pow(abs(t1 - t2), e));
}

// Autocovariance of unit-step fractional Gaussian noise at integer `lag`.
template <typename Scalar>
Scalar fgn_autocovariance(Index lag, Scalar hurst) {
  using std::abs;
  using std::pow;
  const Scalar k = abs(static_cast<Scalar>(lag));
  const Scalar e = Scalar(2) * hurst;
  return Scalar(0.5) * (pow(k + 1, e) - Scalar(2) * pow(k, e) + pow(abs(k - 1), e));
}

// Covariance matrix of B at the given times.
template <typename Derived>
MatrixX<typename Derived::Scalar> fbm_covariance_matrix(
    const Eigen::DenseBase<Derived>& times, typename Derived::Scalar hurst) {
  const Index n = times.size();
  MatrixX<typename Derived::Scalar> k(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) k(i, j) = fbm_covariance(times(i), times(j), hurst);
  }
  return k;
}

struct FbmParams {
  double hurst = 0.5;
  Index length = 1;
  std::uint64_t seed = 0;
};

// Circulant eigenvalues below -kNegativeEigenTolerance trigger the dense
// Cholesky fallback; smaller negative values are clamped to zero.
inline constexpr double kNegativeEigenTolerance = 1e-8;

// n unit-variance fGn increments via circulant embedding. Falls back to
// fgn_cholesky when the embedding is not nonnegative definite.
Vector fgn_davies_harte(Index n, double hurst, std::uint64_t seed,
                        bool* used_fallback = nullptr);
// Exact O(n^3) sampler from the dense fGn covariance.
Vector fgn_cholesky(Index n, double hurst, std::uint64_t seed);
// B(0), B(1), ..., B(n) on a unit time step; B(0) = 0.
Vector fbm_path(Index n, double hurst, std::uint64_t seed);

// Conditioning set for a bridge over `length` evenly spaced samples with
// normalized times i / (length - 1) in [0, 1]. `indices` are strictly
// increasing sample positions.
struct BridgeAnchors {
  std::vector<Index> indices;
  Vector values;
};

// Normalized time of sample i in a segment of `length` samples.
inline double bridge_time(Index i, Index length) {
  return length > 1 ? static_cast<double>(i) / static_cast<double>(length - 1) : 0.0;
}

// Anchor covariance sigma_ij = <B(t_i), B(t_j)>.
Signal anchor_covariance(const BridgeAnchors& anchors, Index length, double hurst);

// Multipoint fractional Brownian bridge: scale * B(t) corrected so that it
// passes through every anchor exactly,
//   x(t) = s B(t) - sum_ij (s B(t_i) - G_i) sigma^-1_ij <B(t), B(t_j)>.
// An anchor at t = 0 is handled by offsetting the path by its value.
// Throws ImputationError for an anchor covariance that stays singular
// after +1e-10 I regularization.
Vector mfbb(Index length, const BridgeAnchors& anchors, double hurst,
            std::uint64_t seed, double scale = 1.0);
// Conditional mean of the bridge, <B(t), B(t_j)> sigma^-1_jk G_k (with the
// same t = 0 offset convention as mfbb).
Vector mfbb_mean(Index length, const BridgeAnchors& anchors, double hurst);

}  // namespace faithmask

#endif  // FAITHMASK_FBM_HPP_
