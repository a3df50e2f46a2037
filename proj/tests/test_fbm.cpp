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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "faithmask/fbm.hpp"

namespace faithmask {
namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double lag1_autocorrelation(const Vector& x) {
  const double m = x.mean();
  const Vector c = x.array() - m;
  return c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / c.squaredNorm();
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

TEST(FbmCovariance, HandValues) {
  EXPECT_DOUBLE_EQ(fbm_covariance(0.3, 0.8, 0.5), 0.3);
  EXPECT_DOUBLE_EQ(fbm_covariance(2.0, 1.5, 0.5), 1.5);
  for (double h : {1e-5, 0.2, 0.5, 0.9}) EXPECT_NEAR(fbm_covariance(1.0, 1.0, h), 1.0, 1e-15);
  EXPECT_NEAR(fbm_covariance(1.0, 2.0, 1e-5), 0.5 * std::pow(2.0, 2e-5), 1e-15);
  EXPECT_NEAR(fbm_covariance(1.0, 2.0, 1e-5), 0.5000069, 1e-7);
  EXPECT_NEAR(fgn_autocovariance(1, 1e-5), 0.5 * (std::pow(2.0, 2e-5) - 2.0), 1e-15);
  EXPECT_DOUBLE_EQ(fgn_autocovariance(0, 0.3), 1.0);
  EXPECT_NEAR(fgn_autocovariance(3, 0.5), 0.0, 1e-15);
}

TEST(DaviesHarte, BrownianCaseIsWhite) {
  const Vector x = fgn_davies_harte(100000, 0.5, 1);
  EXPECT_NEAR(lag1_autocorrelation(x), 0.0, 0.01);
}

TEST(DaviesHarte, UnitVarianceForAnyHurst) {
  constexpr Index kN = 100000;
  for (double h : {1e-5, 0.3, 0.5, 0.7}) {
    const Vector x = fgn_davies_harte(kN, h, 2);
    const double var = (x.array() - x.mean()).square().sum() / (kN - 1);
    // Var of the sample variance for Gaussian data is 2 / (n - 1); correlated
    // increments inflate it, so the SE is estimated from 100 block variances.
    std::vector<double> blocks;
    for (Index b = 0; b < 100; ++b) {
      const Vector s = x.segment(b * 1000, 1000);
      blocks.push_back((s.array() - s.mean()).square().sum() / 999.0);
    }
    const double se = std::sqrt(var_of(blocks) / 100.0);
    EXPECT_NEAR(var, 1.0, 3.0 * se) << "H " << h;
  }
}

TEST(DaviesHarte, AntiPersistentLagOne) {
  const Vector x = fgn_davies_harte(100000, 1e-5, 3);
  EXPECT_NEAR(lag1_autocorrelation(x), 0.5 * (std::pow(2.0, 2e-5) - 2.0), 0.02);
}

TEST(DaviesHarte, DeterministicPerSeedAndNoFallbackForFgn) {
  bool fallback = true;
  const Vector a = fgn_davies_harte(257, 0.2, 9, &fallback);
  EXPECT_FALSE(fallback);
  EXPECT_EQ(a, fgn_davies_harte(257, 0.2, 9));
  EXPECT_NE(a, fgn_davies_harte(257, 0.2, 10));
  EXPECT_THROW(fgn_davies_harte(10, 0.0, 1), InvalidArgument);
  EXPECT_THROW(fgn_davies_harte(10, 1.0, 1), InvalidArgument);
}

TEST(DaviesHarte, MatchesCholeskyInDistribution) {
  constexpr int kSamples = 10000;
  constexpr Index kN = 24;
  // Six comparisons share a family-wise alpha of 0.01 (Bonferroni), so each
  // uses c(a) = sqrt(-ln(a / 2) / 2) at a = 0.01 / 6.
  const double c_alpha = std::sqrt(-0.5 * std::log(0.01 / 6.0 / 2.0));
  const double critical = c_alpha * std::sqrt(2.0 / kSamples);
  for (double h : {1e-5, 0.3, 0.8}) {
    std::vector<double> dh_mid, ch_mid, dh_sum, ch_sum;
    for (int s = 0; s < kSamples; ++s) {
      const Vector a = fgn_davies_harte(kN, h, derive_seed(11, {static_cast<std::uint64_t>(s)}));
      const Vector b = fgn_cholesky(kN, h, derive_seed(12, {static_cast<std::uint64_t>(s)}));
      dh_mid.push_back(a(kN / 2));
      ch_mid.push_back(b(kN / 2));
      dh_sum.push_back(a.sum());
      ch_sum.push_back(b.sum());
    }
    EXPECT_LT(ks_statistic(dh_mid, ch_mid), critical) << "H " << h;
    EXPECT_LT(ks_statistic(dh_sum, ch_sum), critical) << "H " << h;
  }
}

TEST(FbmPath, StartsAtZeroAndBrownianVarianceGrowsLinearly) {
  constexpr int kPaths = 10000;
  std::vector<std::vector<double>> at(3);
  const Index ts[] = {4, 10, 20};
  for (int s = 0; s < kPaths; ++s) {
    const Vector b = fbm_path(20, 0.5, derive_seed(21, {static_cast<std::uint64_t>(s)}));
    ASSERT_EQ(b.size(), 21);
    ASSERT_EQ(b(0), 0.0);
    for (int i = 0; i < 3; ++i) at[static_cast<std::size_t>(i)].push_back(b(ts[i]));
  }
  for (int i = 0; i < 3; ++i) {
    const double t = static_cast<double>(ts[i]);
    // SE of a Gaussian sample variance: sigma^2 sqrt(2 / (n - 1)).
    EXPECT_NEAR(var_of(at[static_cast<std::size_t>(i)]), t, 3.0 * t * std::sqrt(2.0 / (kPaths - 1)));
  }
}

TEST(FbmPath, EmpiricalCovarianceMatchesAnalytic) {
  constexpr int kPaths = 10000;
  for (double h : {1e-5, 0.3, 0.75}) {
    double s11 = 0.0, s22 = 0.0, s12 = 0.0;
    for (int s = 0; s < kPaths; ++s) {
      const Vector b = fbm_path(16, h, derive_seed(22, {static_cast<std::uint64_t>(s)}));
      s11 += b(5) * b(5);
      s22 += b(12) * b(12);
      s12 += b(5) * b(12);
    }
    const double c11 = fbm_covariance(5.0, 5.0, h), c22 = fbm_covariance(12.0, 12.0, h);
    const double c12 = fbm_covariance(5.0, 12.0, h);
    // Known zero mean; Var(b1 b2) = c11 c22 + c12^2.
    const double se = std::sqrt((c11 * c22 + c12 * c12) / kPaths);
    EXPECT_NEAR(s12 / kPaths, c12, 3.0 * se) << "H " << h;
  }
}

TEST(Mfbb, PassesThroughAnchorsExactly) {
  for (std::uint64_t run = 0; run < 100; ++run) {
    Rng rng(run);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Index len = 8 + static_cast<Index>(run % 40);
    BridgeAnchors a;
    a.indices = {run % 2 == 0 ? Index{0} : Index{1}, len / 2, len - 1};
    a.values = Vector(3);
    for (Index i = 0; i < 3; ++i) a.values(i) = u(rng);
    const double h = run % 3 == 0 ? 1e-5 : 0.1 + 0.008 * static_cast<double>(run);
    const Vector x = mfbb(len, a, h, run, 1.0 + 0.1 * static_cast<double>(run % 5));
    ASSERT_EQ(x.size(), len);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(x(a.indices[i]), a.values(static_cast<Index>(i)), 1e-9) << "run " << run;
    }
    EXPECT_EQ(x, mfbb(len, a, h, run, 1.0 + 0.1 * static_cast<double>(run % 5)));
  }
}

TEST(Mfbb, SingleZeroAnchorAtOriginIsPlainFbm) {
  BridgeAnchors a{{0}, Vector::Zero(1)};
  const Vector x = mfbb(17, a, 0.4, 5);
  const Vector b = fbm_path(16, 0.4, 5) * std::pow(16.0, -0.4);
  EXPECT_LT((x - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Mfbb, ConditionalMeanMatchesGaussianConditioning) {
  constexpr Index kLen = 21;
  constexpr int kPaths = 10000;
  BridgeAnchors a{{3, 15, 20}, Vector(3)};
  a.values << 0.7, -1.2, 0.4;
  for (double h : {1e-5, 0.5}) {
    // Oracle: dense Gaussian conditioning of B at the normalized grid.
    Vector ta(3);
    for (Index i = 0; i < 3; ++i) ta(i) = static_cast<double>(a.indices[static_cast<std::size_t>(i)]) / (kLen - 1);
    Eigen::MatrixXd kaa(3, 3);
    Vector kta(3);
    const double t = 10.0 / (kLen - 1);
    for (Index i = 0; i < 3; ++i) {
      kta(i) = fbm_covariance(t, ta(i), h);
      for (Index j = 0; j < 3; ++j) kaa(i, j) = fbm_covariance(ta(i), ta(j), h);
    }
    const Vector w = kaa.fullPivLu().solve(kta);
    const double mu = w.dot(a.values);
    const double var = fbm_covariance(t, t, h) - w.dot(kta);
    std::vector<double> mid;
    for (int s = 0; s < kPaths; ++s) mid.push_back(mfbb(kLen, a, h, derive_seed(31, {static_cast<std::uint64_t>(s)}))(10));
    EXPECT_NEAR(mean_of(mid), mu, 3.0 * std::sqrt(var / kPaths)) << "H " << h;
    EXPECT_NEAR(mfbb_mean(kLen, a, h)(10), mu, 1e-9);
  }
}

TEST(Mfbb, RejectsBadAnchors) {
  EXPECT_THROW(mfbb(10, BridgeAnchors{{3, 2}, Vector::Zero(2)}, 0.5, 1), InvalidArgument);
  EXPECT_THROW(mfbb(10, BridgeAnchors{{3, 12}, Vector::Zero(2)}, 0.5, 1), InvalidArgument);
  EXPECT_THROW(mfbb(10, BridgeAnchors{{3}, Vector::Zero(2)}, 0.5, 1), ShapeError);
}

}  // namespace
}  // namespace faithmask
