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

#include "faithmask/fbm.hpp"

#include <complex>
#include <string>

#include <unsupported/Eigen/FFT>

namespace faithmask {
namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw InvalidArgument("Hurst index must lie in (0, 1), got " + std::to_string(hurst));
  }
}

void check_anchors(const BridgeAnchors& anchors, Index length) {
  if (length < 1) throw InvalidArgument("bridge length must be >= 1");
  if (anchors.indices.empty()) throw InvalidArgument("bridge needs at least one anchor");
  if (static_cast<Index>(anchors.indices.size()) != anchors.values.size()) {
    throw ShapeError("anchor positions and values differ in count");
  }
  for (std::size_t i = 0; i < anchors.indices.size(); ++i) {
    const Index a = anchors.indices[i];
    if (a < 0 || a >= length) throw InvalidArgument("anchor outside the interval");
    if (i > 0 && a <= anchors.indices[i - 1]) {
      throw InvalidArgument("anchor times must be strictly increasing");
    }
  }
}

// Anchors left to condition on after removing an anchor at t = 0, whose
// value becomes a constant offset (B(0) = 0 is not random).
struct Conditioning {
  double offset = 0.0;
  Vector times;
  Vector targets;
};

Conditioning split_anchors(const BridgeAnchors& anchors, Index length) {
  Conditioning c;
  std::size_t first = 0;
  if (anchors.indices.front() == 0) {
    c.offset = anchors.values(0);
    first = 1;
  }
  const Index m = static_cast<Index>(anchors.indices.size() - first);
  c.times.resize(m);
  c.targets.resize(m);
  for (Index i = 0; i < m; ++i) {
    c.times(i) = bridge_time(anchors.indices[first + static_cast<std::size_t>(i)], length);
    c.targets(i) = anchors.values(static_cast<Index>(first) + i) - c.offset;
  }
  return c;
}

Eigen::LLT<Eigen::MatrixXd> factor_anchor_covariance(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) return llt;
  const Eigen::MatrixXd reg =
      sigma + 1e-10 * Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
  llt.compute(reg);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15)) {
    throw ImputationError("anchor covariance is singular after regularization");
  }
  return llt;
}

// Cross covariance <B(t_i), B(s_j)> for evaluation times t and anchors s.
Eigen::MatrixXd cross_covariance(Index length, const Vector& anchor_times, double hurst) {
  Eigen::MatrixXd k(length, anchor_times.size());
  for (Index i = 0; i < length; ++i) {
    for (Index j = 0; j < anchor_times.size(); ++j) {
      k(i, j) = fbm_covariance(bridge_time(i, length), anchor_times(j), hurst);
    }
  }
  return k;
}

}  // namespace

Vector fgn_cholesky(Index n, double hurst, std::uint64_t seed) {
  check_hurst(hurst);
  if (n < 1) throw InvalidArgument("sample count must be >= 1");
  Eigen::MatrixXd cov(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) cov(i, j) = fgn_autocovariance(i - j, hurst);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success) throw Error("fGn covariance factorization failed");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(n);
  for (Index i = 0; i < n; ++i) z(i) = normal(rng);
  // cov = P^T L D L^T P, so P^T L sqrt(D) z has covariance cov.
  const Vector d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Vector y = ldlt.matrixL() * (d.asDiagonal() * z);
  return ldlt.transpositionsP().transpose() * y;
}

Vector fgn_davies_harte(Index n, double hurst, std::uint64_t seed, bool* used_fallback) {
  check_hurst(hurst);
  if (n < 1) throw InvalidArgument("sample count must be >= 1");
  if (used_fallback != nullptr) *used_fallback = false;
  if (n == 1) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    return Vector::Constant(1, normal(rng));
  }
  const Index m = 2 * n;
  std::vector<double> row(static_cast<std::size_t>(m));
  for (Index j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] = fgn_autocovariance(j, hurst);
  for (Index j = 1; j < n; ++j) row[static_cast<std::size_t>(m - j)] = row[static_cast<std::size_t>(j)];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eig;
  fft.fwd(eig, row);
  std::vector<double> lambda(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    const double l = eig[static_cast<std::size_t>(k)].real();
    if (l < -kNegativeEigenTolerance) {
      if (used_fallback != nullptr) *used_fallback = true;
      return fgn_cholesky(n, hurst, seed);
    }
    lambda[static_cast<std::size_t>(k)] = std::max(l, 0.0);
  }

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double md = static_cast<double>(m);
  std::vector<std::complex<double>> v(static_cast<std::size_t>(m));
  v[0] = std::sqrt(lambda[0] / md) * normal(rng);
  v[static_cast<std::size_t>(n)] = std::sqrt(lambda[static_cast<std::size_t>(n)] / md) * normal(rng);
  for (Index k = 1; k < n; ++k) {
    const double s = std::sqrt(lambda[static_cast<std::size_t>(k)] / (2.0 * md));
    const double re = normal(rng);
    const double im = normal(rng);
    v[static_cast<std::size_t>(k)] = std::complex<double>(s * re, s * im);
    v[static_cast<std::size_t>(m - k)] = std::conj(v[static_cast<std::size_t>(k)]);
  }
  std::vector<std::complex<double>> w;
  fft.fwd(w, v);
  Vector out(n);
  for (Index i = 0; i < n; ++i) out(i) = w[static_cast<std::size_t>(i)].real();
  return out;
}

Vector fbm_path(Index n, double hurst, std::uint64_t seed) {
  const Vector inc = fgn_davies_harte(n, hurst, seed);
  Vector path(n + 1);
  path(0) = 0.0;
  for (Index i = 0; i < n; ++i) path(i + 1) = path(i) + inc(i);
  return path;
}

Signal anchor_covariance(const BridgeAnchors& anchors, Index length, double hurst) {
  check_anchors(anchors, length);
  Vector t(static_cast<Index>(anchors.indices.size()));
  for (Index i = 0; i < t.size(); ++i) {
    t(i) = bridge_time(anchors.indices[static_cast<std::size_t>(i)], length);
  }
  return fbm_covariance_matrix(t, hurst);
}

Vector mfbb(Index length, const BridgeAnchors& anchors, double hurst,
            std::uint64_t seed, double scale) {
  check_hurst(hurst);
  check_anchors(anchors, length);
  Vector path = Vector::Zero(length);
  if (length > 1) {
    path = fbm_path(length - 1, hurst, seed) *
           std::pow(static_cast<double>(length - 1), -hurst) * scale;
  }
  const Conditioning c = split_anchors(anchors, length);
  if (c.times.size() == 0) return path.array() + c.offset;

  const Eigen::MatrixXd sigma = fbm_covariance_matrix(c.times, hurst);
  const auto llt = factor_anchor_covariance(sigma);
  Vector residual(c.times.size());
  std::size_t first = anchors.indices.front() == 0 ? 1 : 0;
  for (Index i = 0; i < residual.size(); ++i) {
    residual(i) = path(anchors.indices[first + static_cast<std::size_t>(i)]) - c.targets(i);
  }
  const Vector w = llt.solve(residual);
  Vector out = path - cross_covariance(length, c.times, hurst) * w;
  out.array() += c.offset;
  return out;
}

Vector mfbb_mean(Index length, const BridgeAnchors& anchors, double hurst) {
  check_hurst(hurst);
  check_anchors(anchors, length);
  const Conditioning c = split_anchors(anchors, length);
  if (c.times.size() == 0) return Vector::Constant(length, c.offset);
  const auto llt = factor_anchor_covariance(fbm_covariance_matrix(c.times, hurst));
  Vector out = cross_covariance(length, c.times, hurst) * llt.solve(c.targets);
  out.array() += c.offset;
  return out;
}

}  // namespace faithmask
