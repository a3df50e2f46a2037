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
#include <numeric>

#include "faithmask/feature_domains.hpp"
#include "faithmask/spectrum.hpp"
#include "test_support.hpp"

namespace faithmask {
namespace {

using testing::random_signal;

std::vector<Index> iota_vec(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

// Full sort on (score, index) keys, independent of the library's stable sort.
std::vector<Index> sort_oracle(const Vector& s, Index k, Order order) {
  std::vector<std::pair<double, Index>> keyed;
  for (Index i = 0; i < s.size(); ++i) keyed.emplace_back(order == Order::kMorf ? -s(i) : s(i), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Index> out;
  for (Index i = 0; i < k; ++i) out.push_back(keyed[static_cast<std::size_t>(i)].second);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(AggregateSpatial, HandValues) {
  Signal s(2, 2);
  s << 1, -1, 2, 3;
  const Vector a = aggregate_spatial(s);
  EXPECT_EQ(a(0), 0.0);
  EXPECT_EQ(a(1), 5.0);
  Signal impulse = Signal::Zero(4, 6);
  impulse(2, 3) = 1.5;
  const Vector b = aggregate_spatial(impulse);
  EXPECT_EQ(b.cwiseAbs().sum(), 1.5);
  EXPECT_EQ(b(2), 1.5);
  EXPECT_GE(aggregate_spatial(random_signal(5, 7, 1).cwiseAbs()).minCoeff(), 0.0);
}

TEST(SelectSpatial, HandExamples) {
  Vector s(3);
  s << 3, 1, 2;
  EXPECT_EQ(select_spatial(s, 0.3, Order::kMorf).indices, std::vector<Index>{0});
  EXPECT_EQ(select_spatial(s, 0.3, Order::kLerf).indices, std::vector<Index>{1});
  EXPECT_EQ(select_spatial(s, 1.0, Order::kMorf).indices, iota_vec(3));
  EXPECT_EQ(select_spatial(s, 1.0, Order::kLerf).indices, iota_vec(3));
  EXPECT_EQ(select_spatial(Vector::Ones(4), 0.5, Order::kMorf).indices, (std::vector<Index>{0, 1}));
  EXPECT_EQ(select_spatial(Vector::Ones(4), 0.5, Order::kLerf).indices, (std::vector<Index>{0, 1}));
  EXPECT_THROW(select_spatial(s, 0.0, Order::kMorf), InvalidArgument);
  EXPECT_THROW(select_spatial(s, 1.5, Order::kMorf), InvalidArgument);
}

TEST(SelectSpatial, AgreesWithSortOracle) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(trial % 15);
    Vector s = Vector(random_signal(n, 1, trial));
    if (trial % 3 == 0) s = s.array().round();  // force ties
    const double k = 0.05 + 0.09 * static_cast<double>(trial % 11);
    const Index count = count_for_ratio(k, n);
    for (Order o : {Order::kMorf, Order::kLerf}) {
      EXPECT_EQ(select_spatial(s, k, o).indices, sort_oracle(s, count, o)) << "trial " << trial;
    }
  }
}

TEST(SelectSpatial, MaximizesSumOverAllSubsets) {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Vector s = Vector(random_signal(7, 1, 50 + trial));
    const FeatureSubset sub = select_spatial(s, 3.0 / 7.0, Order::kMorf);
    double chosen = 0.0;
    for (Index i : sub.indices) chosen += s(i);
    std::vector<bool> pick(7, false);
    std::fill(pick.begin(), pick.begin() + 3, true);
    do {
      double sum = 0.0;
      for (Index i = 0; i < 7; ++i) sum += pick[static_cast<std::size_t>(i)] ? s(i) : 0.0;
      EXPECT_LE(sum, chosen + 1e-12);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
}

TEST(SelectSpatial, NestedAndDisjointProperties) {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const Vector s = Vector(random_signal(20, 1, 100 + trial));
    std::vector<Index> prev;
    for (double k : {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0}) {
      const auto morf = select_spatial(s, k, Order::kMorf).indices;
      const auto lerf = select_spatial(s, k, Order::kLerf).indices;
      EXPECT_TRUE(std::includes(morf.begin(), morf.end(), prev.begin(), prev.end()));
      prev = morf;
      if (2 * count_for_ratio(k, 20) <= 20) {
        std::vector<Index> both;
        std::set_intersection(morf.begin(), morf.end(), lerf.begin(), lerf.end(), std::back_inserter(both));
        EXPECT_TRUE(both.empty());
      }
    }
  }
}

TEST(SelectGrid, AgreesWithSortOracleAndHandCases) {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const Signal s = random_signal(5, 6, 200 + trial);
    const Vector flat = Eigen::Map<const Vector>(s.data(), s.size());
    for (double k : {0.05, 0.3, 0.5}) {
      for (Order o : {Order::kMorf, Order::kLerf}) {
        EXPECT_EQ(select_grid(s, k, o).indices, sort_oracle(flat, count_for_ratio(k, 30), o));
      }
    }
  }
  Signal hot = Signal::Zero(4, 4);
  hot(2, 1) = 9.0;
  EXPECT_EQ(select_grid(hot, 0.01, Order::kMorf).indices, std::vector<Index>{9});
  EXPECT_EQ(select_grid(hot, 1.0, Order::kMorf).indices, iota_vec(16));
  EXPECT_EQ(select_grid(hot, 1.0, Order::kLerf).indices, iota_vec(16));
}

TEST(SelectTemporal, AgreesWithExhaustiveWindows) {
  for (std::uint64_t trial = 0; trial < 60; ++trial) {
    const Index T = 4 + static_cast<Index>(trial % 61);
    Signal s = random_signal(3, T, 300 + trial);
    if (trial % 4 == 0) s = s.array().round();
    const double k = 0.05 + 0.1 * static_cast<double>(trial % 9);
    const Index L = count_for_ratio(k, T);
    for (Order o : {Order::kMorf, Order::kLerf}) {
      Index best = 0;
      double best_sum = 0.0;
      for (Index start = 0; start + L <= T; ++start) {
        double sum = 0.0;
        for (Index c = 0; c < 3; ++c) {
          for (Index t = start; t < start + L; ++t) sum += s(c, t);
        }
        const double tol = 1e-12 * std::max(1.0, std::abs(best_sum));
        const bool better = o == Order::kMorf ? sum > best_sum + tol : sum < best_sum - tol;
        if (start == 0 || better) {
          best = start;
          best_sum = sum;
        }
      }
      std::vector<Index> expected(static_cast<std::size_t>(L));
      std::iota(expected.begin(), expected.end(), best);
      EXPECT_EQ(select_temporal(s, k, o).indices, expected) << "trial " << trial;
    }
  }
}

TEST(SelectTemporal, ImpulseAndConstantMaps) {
  Signal impulse = Signal::Zero(2, 40);
  impulse(1, 27) = 4.0;
  const auto w = select_temporal(impulse, 0.1, Order::kMorf).indices;
  EXPECT_TRUE(std::find(w.begin(), w.end(), 27) != w.end());
  const Signal flat = Signal::Constant(2, 40, 0.3);
  EXPECT_EQ(select_temporal(flat, 0.25, Order::kMorf).indices.front(), 0);
  EXPECT_EQ(select_temporal(flat, 0.25, Order::kLerf).indices.front(), 0);
  EXPECT_EQ(select_temporal(flat, 0.25, Order::kLerf).size(), 10);
}

// Reference band search written from the rule statement.
Band band_oracle(const Vector& imp, const Vector& pow, double k, Order order, double tol) {
  const Index F = imp.size();
  if (k >= 1.0) return {0, F - 1};
  double total = pow.sum();
  Vector p = pow;
  if (total <= 0.0) {
    p = Vector::Ones(F);
    total = static_cast<double>(F);
  }
  const double target = k * total;
  struct Cand {
    Index lo, hi;
    double power, mean;
  };
  std::vector<Cand> cands;
  for (Index lo = 0; lo < F; ++lo) {
    for (Index hi = lo; hi < F; ++hi) {
      const double pw = p.segment(lo, hi - lo + 1).sum();
      if (pw >= target * (1.0 - 1e-12)) {
        cands.push_back({lo, hi, pw, imp.segment(lo, hi - lo + 1).mean()});
        break;
      }
    }
  }
  const Cand* best = nullptr;
  for (const Cand& c : cands) {
    if (c.power > target * (1.0 + tol)) continue;
    if (!best) {
      best = &c;
      continue;
    }
    const bool better = order == Order::kMorf ? c.mean > best->mean : c.mean < best->mean;
    const bool tie = c.mean == best->mean;
    if (better || (tie && (c.hi - c.lo < best->hi - best->lo))) best = &c;
  }
  if (!best) {
    for (const Cand& c : cands) {
      if (!best) {
        best = &c;
        continue;
      }
      const double d = std::abs(c.power - target), bd = std::abs(best->power - target);
      if (d < bd || (d == bd && c.hi - c.lo < best->hi - best->lo)) best = &c;
    }
  }
  return {best->lo, best->hi};
}

TEST(SelectBand, AgreesWithBruteForce) {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const Index F = 3 + static_cast<Index>(trial % 30);
    Rng rng(400 + trial);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector imp(F), pow(F);
    for (Index i = 0; i < F; ++i) {
      imp(i) = trial % 5 == 0 ? std::round(3 * u(rng)) : u(rng) - 0.5;
      pow(i) = trial % 7 == 0 ? 1.0 : std::pow(u(rng), 3) / static_cast<double>(i + 1);
    }
    for (double k : {0.05, 0.1, 0.25, 0.5}) {
      for (Order o : {Order::kMorf, Order::kLerf}) {
        const Band got = select_band(imp, pow, k, o);
        const Band want = band_oracle(imp, pow, k, o, 0.1);
        EXPECT_EQ(got.lo, want.lo) << "trial " << trial << " k " << k;
        EXPECT_EQ(got.hi, want.hi) << "trial " << trial << " k " << k;
      }
    }
  }
}

TEST(SelectBand, HandExamples) {
  Vector pow = Vector::Constant(10, 1e-6);
  pow(4) = 100.0;
  const Vector imp = Vector::LinSpaced(10, 0.0, 1.0);
  const Band single = select_band(imp, pow, 0.5, Order::kMorf);
  EXPECT_EQ(single.lo, 4);
  EXPECT_EQ(single.hi, 4);
  const Band uniform = select_band(Vector::Ones(20), Vector::Ones(20), 0.25, Order::kMorf);
  EXPECT_EQ(uniform.lo, 0);
  EXPECT_EQ(uniform.size(), 5);
  const Band all = select_band(imp, pow, 1.0, Order::kLerf);
  EXPECT_EQ(all.lo, 0);
  EXPECT_EQ(all.hi, 9);
  EXPECT_THROW(select_band(Vector(), Vector(), 0.5, Order::kMorf), InvalidArgument);
}

TEST(SelectSpectral, ExcludesTheDcBin) {
  Vector pow = Vector::Ones(9);
  pow(0) = 1000.0;
  const Vector scores = Vector::LinSpaced(9, 9.0, 1.0);
  const FeatureSubset s = select_spectral(scores, pow, 0.25, Order::kMorf);
  EXPECT_EQ(s.indices.front(), 1);
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(select_spectral(scores, pow, 1.0, Order::kMorf).size(), 8);
}

TEST(AffineInvariance, SelectionsIgnorePositiveRescaling) {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Signal s = random_signal(4, 16, 500 + trial);
    const Signal t = (3.5 * s.array() + 2.0).matrix();
    const Vector pow = Vector(random_signal(9, 1, 600 + trial).cwiseAbs());
    const Vector imp = Vector(random_signal(9, 1, 700 + trial));
    for (Order o : {Order::kMorf, Order::kLerf}) {
      EXPECT_EQ(select_spatial(aggregate_spatial(s), 0.3, o).indices, select_spatial(aggregate_spatial(t), 0.3, o).indices);
      EXPECT_EQ(select_temporal(s, 0.3, o).indices, select_temporal(t, 0.3, o).indices);
      EXPECT_EQ(select_grid(s, 0.3, o).indices, select_grid(t, 0.3, o).indices);
      EXPECT_EQ(select_spectral(imp, pow, 0.3, o).indices,
                select_spectral(Vector(3.5 * imp.array() + 2.0), pow, 0.3, o).indices);
    }
  }
}

TEST(Spectrum, RoundTripAndSymmetry) {
  for (Index n : {7, 8, 33, 64}) {
    const Signal x = random_signal(3, n, 800 + n);
    const Spectrum s = Spectrum::of(x, 100.0);
    EXPECT_EQ(s.bins.cols(), n / 2 + 1);
    EXPECT_LT((s.to_signal() - x).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(std::abs(s.bins(0, 0).imag()), 1e-9);
  }
}

// Amplitude of bin f of channel c replaced by A + h, phase kept.
Signal with_amplitude(const Signal& x, Index c, Index f, double h) {
  Spectrum s = Spectrum::of(x, 1.0);
  const Complex z = s.bins(c, f);
  s.bins(c, f) = std::polar(std::abs(z) + h, std::arg(z));
  return s.to_signal();
}

TEST(SpectralSaliency, MatchesAmplitudeFiniteDifferences) {
  const Model m = make_conv1d(2, 32, 3, 5, 3, 21);
  for (std::uint64_t probe = 0; probe < 5; ++probe) {
    const Signal x = random_signal(2, 32, 900 + probe);
    const Index y = static_cast<Index>(probe % 3);
    const Vector s = spectral_saliency(m, x, y);
    Vector fd = Vector::Zero(s.size());
    const double h = 1e-5;
    for (Index f = 0; f < s.size(); ++f) {
      for (Index c = 0; c < 2; ++c) {
        fd(f) += (forward(m, with_amplitude(x, c, f, h))(y) - forward(m, with_amplitude(x, c, f, -h))(y)) / (2 * h);
      }
    }
    EXPECT_LT((s - fd).norm() / fd.norm(), 1e-3) << "probe " << probe;
  }
}

TEST(SpectralSaliency, ZeroModelAndBandLimitedModel) {
  std::vector<Layer> zero;
  zero.emplace_back(DenseLayer{Signal::Zero(2, 64), Vector::Zero(2)});
  const Model z(1, 64, std::move(zero));
  const Signal x = random_signal(1, 64, 31);
  EXPECT_EQ(spectral_saliency(z, x, 0).cwiseAbs().maxCoeff(), 0.0);

  // Logit 0 reads out bins 5..7 through a band-limited linear filter.
  Signal w = Signal::Zero(2, 64);
  for (Index f = 5; f <= 7; ++f) {
    for (Index t = 0; t < 64; ++t) w(0, t) += std::cos(2 * std::numbers::pi * f * t / 64.0 + 0.3 * f);
  }
  const Vector s = spectral_saliency(make_linear(w, 1, 64), x, 0).cwiseAbs();
  const double in_band = s.segment(5, 3).minCoeff();
  double out_band = 0.0;
  for (Index f = 0; f < s.size(); ++f) {
    if (f < 5 || f > 7) out_band = std::max(out_band, s(f));
  }
  EXPECT_GT(in_band, 10.0 * out_band);
}

TEST(ProjectSpectral, MagnitudeModeIsChannelSummedDftMagnitude) {
  const Signal s = random_signal(2, 16, 41);
  const Vector m = project_spectral(s, random_signal(2, 16, 42), SpectralScoreMode::kMagnitude);
  const ComplexSignal S = rfft_rows(s);
  EXPECT_LT((m - Vector(S.cwiseAbs().colwise().sum().transpose())).norm(), 1e-12);
}

}  // namespace
}  // namespace faithmask
