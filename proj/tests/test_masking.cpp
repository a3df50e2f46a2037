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
#include <numbers>

#include "faithmask/masking.hpp"
#include "faithmask/spectrum.hpp"
#include "test_support.hpp"

namespace faithmask {
namespace {

using testing::random_signal;

FeatureSubset subset(Domain d, std::vector<Index> idx) { return {d, std::move(idx), 0.0}; }

FeatureSubset band(Index lo, Index hi) {
  std::vector<Index> idx;
  for (Index f = lo; f <= hi; ++f) idx.push_back(f);
  return subset(Domain::kSpectral, idx);
}

// Spectrum of a given per-bin power with random phases.
Signal signal_with_power(Index t, const std::function<double(Index)>& power, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  ComplexSignal s = ComplexSignal::Zero(1, t / 2 + 1);
  for (Index f = 1; f < s.cols(); ++f) {
    s(0, f) = std::polar(std::sqrt(power(f)), phase(rng));
    if (2 * f == t) s(0, f) = std::sqrt(power(f));
  }
  return irfft_rows(s, t);
}

TEST(ZeroMask, HandExamples) {
  Signal x(1, 3);
  x << 1, 2, 3;
  Signal want(1, 3);
  want << 1, 0, 3;
  EXPECT_EQ(zero_mask(x, subset(Domain::kTemporal, {1})), want);
  const Signal r = random_signal(3, 8, 1);
  EXPECT_EQ(zero_mask(r, subset(Domain::kSpatial, {})), r);
  EXPECT_EQ(zero_mask(r, full_subset(Domain::kSpatial, 3, 8)), Signal::Zero(3, 8));
  EXPECT_EQ(zero_mask(r, full_subset(Domain::kTemporal, 3, 8)), Signal::Zero(3, 8));
  EXPECT_EQ(zero_mask(r, full_subset(Domain::kGrid, 3, 8)), Signal::Zero(3, 8));
  // Full spectral mask keeps only DC.
  const Signal dc = zero_mask(r, full_subset(Domain::kSpectral, 3, 8));
  for (Index c = 0; c < 3; ++c) EXPECT_LT((dc.row(c).array() - r.row(c).mean()).abs().maxCoeff(), 1e-12);
}

TEST(SubsetToMask, ShapesAndCounts) {
  EXPECT_EQ(subset_to_mask(subset(Domain::kSpatial, {}), 3, 4).popcount(), 0);
  const BinaryMask m = subset_to_mask(subset(Domain::kSpatial, {1}), 3, 4);
  EXPECT_EQ(m.popcount(), 4);
  EXPECT_EQ(m.values.row(1).sum(), 4.0);
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    const Index rows = 2 + static_cast<Index>(trial % 5), cols = 8 + static_cast<Index>(trial % 9);
    const Signal s = random_signal(rows, cols, trial);
    const double k = 0.1 + 0.02 * static_cast<double>(trial);
    const auto sp = select_spatial(aggregate_spatial(s), k, Order::kMorf);
    EXPECT_EQ(subset_to_mask(sp, rows, cols).popcount(), sp.size() * cols);
    const auto tm = select_temporal(s, k, Order::kLerf);
    EXPECT_EQ(subset_to_mask(tm, rows, cols).popcount(), tm.size() * rows);
    const auto gr = select_grid(s, k, Order::kMorf);
    EXPECT_EQ(subset_to_mask(gr, rows, cols).popcount(), gr.size());
    const auto bd = band(1, 1 + static_cast<Index>(trial % 3));
    const BinaryMask spec = subset_to_mask(bd, rows, cols);
    EXPECT_EQ(spec.values.cols(), cols / 2 + 1);
    EXPECT_EQ(spec.popcount(), bd.size() * rows);
    for (const BinaryMask& b : {spec, subset_to_mask(gr, rows, cols)}) {
      EXPECT_TRUE((b.values.array() == 0.0 || b.values.array() == 1.0).all());
    }
  }
}

TEST(NeighborGraph, WeightsSumToOne) {
  EXPECT_DOUBLE_EQ(4 * NeighborGraph::kDirectWeight + 4 * NeighborGraph::kDiagonalWeight, 1.0);
  const NeighborGraph g = NeighborGraph::lattice(4, 5);
  EXPECT_EQ(g.direct(6).size(), 4u);
  EXPECT_EQ(g.diagonal(6).size(), 4u);
  EXPECT_EQ(g.direct(0).size(), 2u);
  EXPECT_EQ(g.diagonal(0).size(), 1u);
  const auto w = g.weights();
  for (Index r = 0; r < w.rows(); ++r) EXPECT_NEAR(w.row(r).sum(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(w.coeff(6, 7), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(w.coeff(6, 12), 1.0 / 12.0);
}

TEST(LaplacianImpute, ConstantNeighbourhoodIsExact) {
  const NeighborGraph g = NeighborGraph::lattice(3, 3);
  Signal x = Signal::Constant(9, 5, 2.5);
  x.row(4).setConstant(-7.0);
  const Signal out = laplacian_impute(x, {4}, g, 0.0, 1);
  EXPECT_LT((out.row(4).array() - 2.5).abs().maxCoeff(), 1e-12);
}

// Dense oracle: W rebuilt from the 8-neighbourhood rule, masked block solved
// with a full-pivot LU.
Signal laplacian_oracle(const Signal& x, const std::vector<Index>& masked, Index rows, Index cols) {
  const Index n = rows * cols;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      for (Index dr = -1; dr <= 1; ++dr) {
        for (Index dc = -1; dc <= 1; ++dc) {
          const Index rr = r + dr, cc = c + dc;
          if ((dr == 0 && dc == 0) || rr < 0 || cc < 0 || rr >= rows || cc >= cols) continue;
          w(r * cols + c, rr * cols + cc) = (dr == 0 || dc == 0) ? 1.0 / 6.0 : 1.0 / 12.0;
        }
      }
      w.row(r * cols + c) /= w.row(r * cols + c).sum();
    }
  }
  std::vector<Index> known;
  for (Index i = 0; i < n; ++i) {
    if (std::find(masked.begin(), masked.end(), i) == masked.end()) known.push_back(i);
  }
  const Index m = static_cast<Index>(masked.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, x.cols());
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) a(i, j) -= w(masked[i], masked[j]);
    for (Index k : known) b.row(i) += w(masked[i], k) * x.row(k);
  }
  const Eigen::MatrixXd sol = a.fullPivLu().solve(b);
  Signal out = x;
  for (Index i = 0; i < m; ++i) out.row(masked[i]) = sol.row(i);
  return out;
}

TEST(LaplacianImpute, MatchesDenseSolve) {
  const Signal x = random_signal(9, 6, 3);
  const Signal got = laplacian_impute(x, {4, 5}, NeighborGraph::lattice(3, 3), 0.0, 1);
  EXPECT_LT((got - laplacian_oracle(x, {4, 5}, 3, 3)).cwiseAbs().maxCoeff(), 1e-9);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Signal y = random_signal(20, 4, 100 + trial);
    std::vector<Index> masked;
    for (Index i = 0; i < 20; ++i) {
      if ((i * 7 + static_cast<Index>(trial)) % 3 == 0) masked.push_back(i);
    }
    const Signal out = laplacian_impute(y, masked, NeighborGraph::lattice(4, 5), 0.0, trial);
    EXPECT_LT((out - laplacian_oracle(y, masked, 4, 5)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(LaplacianImpute, NoiseLeavesUnmaskedRowsAndIsolatedComponentThrows) {
  const Signal x = random_signal(9, 6, 4);
  const Signal out = laplacian_impute(x, {0, 8}, NeighborGraph::lattice(3, 3), 0.5, 7);
  for (Index r = 1; r < 8; ++r) EXPECT_EQ(out.row(r), x.row(r));
  EXPECT_EQ(out, laplacian_impute(x, {0, 8}, NeighborGraph::lattice(3, 3), 0.5, 7));
  std::vector<Index> all(9);
  std::iota(all.begin(), all.end(), Index{0});
  EXPECT_THROW(laplacian_impute(x, all, NeighborGraph::lattice(3, 3), 0.0, 1), ImputationError);
  EXPECT_NO_THROW(laplacian_impute(x, all, NeighborGraph::lattice(3, 3), 0.0, 1, true));
}

TEST(SpectralFit, RecoversExactPolynomial) {
  Vector f = Vector::LinSpaced(30, 1.0, 30.0);
  Vector p = (2.0 + 3.0 / f.array() + 0.5 / f.array().square() + 4.0 / f.array().cube()).matrix();
  const SpectralFit fit = SpectralFit::fit(f, p);
  EXPECT_LT((fit.coefficients - Eigen::Vector4d(2.0, 3.0, 0.5, 4.0)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(SpectralFit::fit(f.head(3), p.head(3)), FitError);
  EXPECT_EQ(SpectralFit::fit(f.head(2), p.head(2), 2).coefficients(3), 0.0);
}

TEST(SpectralImpute, PreservesPhaseAndOutOfBandBins) {
  const Signal x = random_signal(2, 64, 5);
  const Signal out = spectral_impute(x, band(10, 14), 64.0);
  const ComplexSignal a = rfft_rows(x), b = rfft_rows(out);
  for (Index c = 0; c < 2; ++c) {
    for (Index f = 0; f < a.cols(); ++f) {
      if (f >= 10 && f <= 14) {
        EXPECT_NEAR(std::remainder(std::arg(a(c, f)) - std::arg(b(c, f)), 2 * std::numbers::pi), 0.0, 1e-9);
      } else {
        EXPECT_LT(std::abs(a(c, f) - b(c, f)), 1e-9);
      }
    }
  }
  EXPECT_THROW(spectral_impute(x, band(0, 3), 64.0), InvalidArgument);
}

TEST(SpectralImpute, ExactOneOverFPowerUnchanged) {
  const auto p = [](Index f) { return 1.0 + 5.0 / f + 2.0 / (f * f) + 8.0 / (f * f * f); };
  const Signal x = signal_with_power(128, p, 6);
  const Signal out = spectral_impute(x, band(20, 30), 128.0);
  const ComplexSignal a = rfft_rows(x), b = rfft_rows(out);
  for (Index f = 20; f <= 30; ++f) EXPECT_NEAR(std::abs(b(0, f)) / std::abs(a(0, f)), 1.0, 1e-6);
}

TEST(SpectralImpute, RemovesANarrowPeak) {
  const auto p = [](Index f) { return 4.0 / f; };
  Signal x = signal_with_power(256, p, 7);
  for (Index t = 0; t < 256; ++t) x(0, t) += 3.0 * std::sin(2 * std::numbers::pi * 40.0 * t / 256.0);
  const Signal out = spectral_impute(x, band(38, 42), 256.0);
  const ComplexSignal a = rfft_rows(x), b = rfft_rows(out);
  const double before = a.block(0, 38, 1, 5).cwiseAbs2().sum();
  const double after = b.block(0, 38, 1, 5).cwiseAbs2().sum();
  EXPECT_GT(10.0 * std::log10(before / after), 20.0);
}

TEST(SpectralImpute, UnderdeterminedFitFallbacks) {
  const Signal x = random_signal(1, 16, 8);
  EXPECT_THROW(spectral_impute(x, band(1, 6), 16.0), FitError);
  SpectralImputeOptions reduced;
  reduced.reduce_degree_when_underdetermined = true;
  EXPECT_NO_THROW(spectral_impute(x, band(1, 6), 16.0, reduced));
  SpectralImputeOptions all;
  all.fit_all_when_underdetermined = true;
  EXPECT_NO_THROW(spectral_impute(x, band(1, 8), 16.0, all));
}

TEST(TemporalImpute, AnchorsKeptAndShortWindowUnchanged) {
  const Signal x = random_signal(3, 40, 9);
  const FeatureSubset w = subset(Domain::kTemporal, {10, 11, 12, 13, 14, 15, 16, 17, 18});
  const Signal out = temporal_impute(x, w, kDefaultHurst, 3);
  for (Index c = 0; c < 3; ++c) {
    for (Index t : {10, 14, 18}) EXPECT_NEAR(out(c, t), x(c, t), 1e-9);
    for (Index t = 0; t < 40; ++t) {
      if (t < 10 || t > 18) {
        EXPECT_EQ(out(c, t), x(c, t));
      }
    }
  }
  const Signal three = temporal_impute(x, subset(Domain::kTemporal, {5, 6, 7}), kDefaultHurst, 3);
  EXPECT_LT((three - x).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TemporalImpute, SuppressesBurstPower) {
  constexpr Index kT = 256, kLo = 96, kLen = 64;
  std::vector<Index> win(kLen);
  std::iota(win.begin(), win.end(), kLo);
  std::vector<double> drops;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Signal x = random_signal(1, kT, 1000 + seed, 0.2);
    // 10 Hz at fs = 64 is 10 cycles per 64-sample window.
    for (Index t = kLo; t < kLo + kLen; ++t) x(0, t) += 2.0 * std::sin(2 * std::numbers::pi * 10.0 * t / 64.0);
    const Signal out = temporal_impute(x, subset(Domain::kTemporal, win), kDefaultHurst, seed);
    const auto power = [&](const Signal& s) { return std::norm(rfft_rows(Signal(s.block(0, kLo, 1, kLen)))(0, 10)); };
    drops.push_back(10.0 * std::log10(power(x) / power(out)));
  }
  std::nth_element(drops.begin(), drops.begin() + 50, drops.end());
  EXPECT_GE(drops[50], 10.0);
}

TEST(Pgd, BallConstraintAndDeterminism) {
  const Model m = make_mlp(2, 16, 8, 4, 3, 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Signal x = random_signal(2, 16, 200 + s);
    for (Norm norm : {Norm::kLinf, Norm::kL2}) {
      AdversarialConfig cfg;
      cfg.epsilon = 0.05 + 0.02 * static_cast<double>(s);
      cfg.norm = norm;
      cfg.seed = s;
      const AdversarialCounterpart adv = pgd(m, x, static_cast<Index>(s % 3), cfg);
      const Signal d = adv.x_adv - x;
      const double size = norm == Norm::kLinf ? d.cwiseAbs().maxCoeff() : d.norm();
      EXPECT_LE(size, cfg.epsilon + 1e-9);
      EXPECT_EQ(adv.x_adv, pgd(m, x, static_cast<Index>(s % 3), cfg).x_adv);
    }
  }
}

TEST(Pgd, ZeroGradientStaysAtStart) {
  std::vector<Layer> layers;
  layers.emplace_back(DenseLayer{Signal::Zero(2, 8), Vector::Zero(2)});
  const Model zero(1, 8, std::move(layers));
  const Signal x = random_signal(1, 8, 10);
  AdversarialConfig cfg;
  cfg.epsilon = 0.3;
  cfg.seed = 4;
  const AdversarialCounterpart adv = pgd(zero, x, 0, cfg);
  EXPECT_LT((adv.x_adv - project_ball(x + adv.initial_perturbation, x, 0.3, Norm::kLinf)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(loss(zero, adv.x_adv, 0), loss(zero, x, 0), 1e-12);
}

TEST(Pgd, LinearModelPinsToTheBallCorner) {
  Signal w(2, 6);
  w << 1, -2, 0.5, 3, -1, 2, -1, 1, 1, -2, 2, 0.5;
  const Model m = make_linear(w, 1, 6);
  const Signal x = random_signal(1, 6, 11);
  AdversarialConfig cfg;
  cfg.epsilon = 0.2;
  cfg.iterations = 20;
  const Signal adv = pgd(m, x, 0, cfg).x_adv;
  // d loss / dx = (1 - p_0)(w_1 - w_0) for class 0, constant in sign.
  const Signal want = x.array() + 0.2 * (w.row(1) - w.row(0)).array().sign();
  EXPECT_LT((adv - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pgd, RaisesLossOnTrainedSpectralModel) {
  const TrainedExperiment& e = testing::trained(TaskKind::kSpectral);
  double before = 0.0, after = 0.0;
  AdversarialConfig cfg;
  cfg.epsilon = 0.05;
  for (Index i = 0; i < e.split.test.size(); ++i) {
    const Sample& s = e.split.test.samples[static_cast<std::size_t>(i)];
    cfg.seed = static_cast<std::uint64_t>(i);
    before += loss(e.model, s.x, s.y);
    after += loss(e.model, pgd(e.model, s.x, s.y, cfg).x_adv, s.y);
  }
  EXPECT_GT(after, before);
}

TEST(CalibrateEpsilon, ChanceModelTakesTheSmallestEpsilon) {
  std::vector<Layer> layers;
  layers.emplace_back(DenseLayer{Signal::Zero(4, 8), Vector::Zero(4)});
  const Model zero(1, 8, std::move(layers));
  Dataset d;
  d.num_classes = 4;
  for (Index i = 0; i < 16; ++i) d.samples.push_back({random_signal(1, 8, 300 + i), i % 4});
  const CalibrationResult r = calibrate_epsilon(zero, d, AdversarialConfig{}, EpsilonGrid{0.02, 2.0, 5});
  EXPECT_DOUBLE_EQ(r.chance, 0.25);
  EXPECT_DOUBLE_EQ(r.epsilon, 0.02);
  EXPECT_EQ(r.epsilons.size(), 5u);
}

TEST(CalibrateEpsilon, TraceIsMonotoneOnTheSpectralTask) {
  const TrainedExperiment& e = testing::trained(TaskKind::kSpectral);
  const CalibrationResult r = calibrate_epsilon(e.model, e.split.test, AdversarialConfig{}, EpsilonGrid{});
  EXPECT_LE(r.accuracies.back(), r.chance + 0.05);
  // Isotonic check: no point rises more than 0.03 above the running minimum.
  double running = 1.0;
  for (double a : r.accuracies) {
    EXPECT_LE(a, running + 0.03);
    running = std::min(running, a);
  }
}

TEST(CalibrateEpsilon, UnreachableTargetReportsTheTrace) {
  const TrainedExperiment& e = testing::trained(TaskKind::kSpectral);
  try {
    calibrate_epsilon(e.model, e.split.test, AdversarialConfig{}, EpsilonGrid{1e-6, 1.1, 2});
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& err) {
    EXPECT_EQ(err.trace().accuracies.size(), 2u);
  }
}

TEST(AimMask, BlendsExactlyPerBit) {
  const Signal x = random_signal(3, 5, 12), adv = random_signal(3, 5, 13);
  EXPECT_EQ(aim_mask(x, adv, subset_to_mask(subset(Domain::kGrid, {}), 3, 5)), x);
  EXPECT_EQ(aim_mask(x, adv, subset_to_mask(full_subset(Domain::kGrid, 3, 5), 3, 5)), adv);
  const BinaryMask m = subset_to_mask(subset(Domain::kGrid, {0, 4, 7, 14}), 3, 5);
  const Signal out = aim_mask(x, adv, m);
  for (Index i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.data()[i], m.values.data()[i] == 1.0 ? adv.data()[i] : x.data()[i]);
  }
}

TEST(AimSpectral, ReplacesBandCoefficients) {
  const Signal x = random_signal(2, 32, 14), adv = random_signal(2, 32, 15);
  const ComplexSignal a = rfft_rows(x), b = rfft_rows(adv);
  const ComplexSignal out = rfft_rows(aim_spectral(x, adv, band(3, 6)));
  for (Index c = 0; c < 2; ++c) {
    for (Index f = 0; f < a.cols(); ++f) {
      EXPECT_LT(std::abs(out(c, f) - (f >= 3 && f <= 6 ? b(c, f) : a(c, f))), 1e-9);
    }
  }
  const ComplexSignal amp = rfft_rows(aim_spectral(x, adv, band(3, 6), true));
  EXPECT_NEAR(std::abs(amp(0, 4)), std::abs(b(0, 4)), 1e-9);
  EXPECT_NEAR(std::arg(amp(0, 4)), std::arg(a(0, 4)), 1e-9);
}

TEST(HalfFrequency, OnlyHalfBinsChangeAndDisjointBandsCommute) {
  const Signal x = random_signal(1, 128, 16), adv = random_signal(1, 128, 17);
  EXPECT_LT((half_freq_correction(x, adv, subset(Domain::kSpectral, {})).x - x).cwiseAbs().maxCoeff(), 1e-12);
  // At fs = T the bin index is the frequency in Hz: the 20 Hz band maps to 10 Hz.
  const HalfFrequencyResult r = half_freq_correction(x, adv, band(19, 21));
  const ComplexSignal a = rfft_rows(x), b = rfft_rows(adv), out = rfft_rows(r.x);
  for (Index f = 0; f < a.cols(); ++f) {
    const bool replaced = std::find(r.replaced_bins.begin(), r.replaced_bins.end(), f) != r.replaced_bins.end();
    if (replaced) {
      EXPECT_GE(f, 9);
      EXPECT_LE(f, 11);
    }
    EXPECT_LT(std::abs(out(0, f) - (replaced ? b(0, f) : a(0, f))), 1e-9);
  }
  EXPECT_FALSE(r.clamped);
  EXPECT_TRUE(half_freq_correction(x, adv, band(1, 1)).clamped);

  const Signal ab = half_freq_correction(aim_spectral(x, adv, band(40, 44)), adv, band(19, 21)).x;
  const Signal ba = aim_spectral(half_freq_correction(x, adv, band(19, 21)).x, adv, band(40, 44));
  EXPECT_LT((ab - ba).cwiseAbs().maxCoeff(), 1e-9);
}

class OperatorTest : public ::testing::TestWithParam<OperatorKind> {};

TEST_P(OperatorTest, EmptySubsetIsIdentityAndOutsideIsUntouched) {
  OperatorConfig op;
  op.kind = GetParam();
  op.laplacian_noise_fraction = 0.0;
  MaskingContext ctx;
  ctx.sampling_rate = 32.0;
  ctx.montage = NeighborGraph::lattice(2, 3);
  const Signal x = random_signal(6, 32, 18), adv = random_signal(6, 32, 19);
  for (Domain d : {Domain::kSpatial, Domain::kTemporal, Domain::kSpectral}) {
    if (!incompatibility(op.kind, d, ctx).empty()) continue;
    EXPECT_LT((apply_operator(op, ctx, x, &adv, subset(d, {}), 1) - x).cwiseAbs().maxCoeff(), 1e-12);
  }
  const Signal sp = apply_operator(op, ctx, x, &adv, subset(Domain::kSpatial, {1, 4}), 2);
  for (Index c : {0, 2, 3, 5}) EXPECT_EQ(sp.row(c), x.row(c));
  const Signal tm = apply_operator(op, ctx, x, &adv, subset(Domain::kTemporal, {8, 9, 10, 11, 12}), 3);
  EXPECT_EQ(tm.leftCols(8), x.leftCols(8));
  EXPECT_EQ(tm.rightCols(19), x.rightCols(19));
}

INSTANTIATE_TEST_SUITE_P(AllOperators, OperatorTest,
                         ::testing::Values(OperatorKind::kZeroing, OperatorKind::kMdRoad,
                                           OperatorKind::kAim, OperatorKind::kIdentity));

TEST(Operators, CompatibilityRules) {
  MaskingContext grid;
  grid.layout = Layout::kGrid;
  EXPECT_FALSE(incompatibility(OperatorKind::kZeroing, Domain::kSpatial, grid).empty());
  EXPECT_TRUE(incompatibility(OperatorKind::kMdRoad, Domain::kGrid, grid).empty());
  MaskingContext eeg;
  EXPECT_FALSE(incompatibility(OperatorKind::kMdRoad, Domain::kSpatial, eeg).empty());
  eeg.montage = NeighborGraph::lattice(2, 2);
  EXPECT_TRUE(incompatibility(OperatorKind::kMdRoad, Domain::kSpatial, eeg).empty());
  EXPECT_FALSE(incompatibility(OperatorKind::kAim, Domain::kGrid, eeg).empty());
  EXPECT_EQ(parse_operator(operator_name(OperatorKind::kMdRoad)), OperatorKind::kMdRoad);
  EXPECT_THROW(parse_operator("BLUR"), InvalidArgument);
}

}  // namespace
}  // namespace faithmask
