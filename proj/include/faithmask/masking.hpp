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

#ifndef FAITHMASK_MASKING_HPP_
#define FAITHMASK_MASKING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "faithmask/core.hpp"
#include "faithmask/dataset.hpp"
#include "faithmask/feature_domains.hpp"
#include "faithmask/model.hpp"

namespace faithmask {

// Indicator of the features in a subset. Time-domain and grid masks have
// the input's shape; spectral masks have shape channels x (T/2 + 1).
struct BinaryMask {
  Signal values;
  Domain domain = Domain::kSpatial;

  Index popcount() const { return static_cast<Index>(values.sum()); }
};

BinaryMask subset_to_mask(const FeatureSubset& subset, Index rows, Index cols);
// Every feature of `domain` for a rows x cols input (all non-DC bins for
// the spectral domain).
FeatureSubset full_subset(Domain domain, Index rows, Index cols);

// Sets the selected features to zero. Spectral bands are zeroed in the
// frequency domain and transformed back.
Signal zero_mask(const Signal& x, const FeatureSubset& subset);

// ---------------------------------------------------------------------------
// Laplacian interpolation.

// 8-neighbourhood on a rows x cols lattice (electrode montage or pixels),
// nodes numbered row-major.
class NeighborGraph {
 public:
  static constexpr double kDirectWeight = 1.0 / 6.0;
  static constexpr double kDiagonalWeight = 1.0 / 12.0;

  static NeighborGraph lattice(Index rows, Index cols);

  Index size() const { return rows_ * cols_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<Index>& direct(Index node) const { return direct_[static_cast<std::size_t>(node)]; }
  const std::vector<Index>& diagonal(Index node) const { return diagonal_[static_cast<std::size_t>(node)]; }

  // Row-stochastic W with w_d and w_id per neighbour. Boundary nodes miss
  // part of their neighbourhood; their row is rescaled to sum to one.
  Eigen::SparseMatrix<double, Eigen::RowMajor> weights() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::vector<Index>> direct_;
  std::vector<std::vector<Index>> diagonal_;
};

// Rows of `values` are graph nodes, columns independent observations (time
// steps). Masked nodes satisfy x_c = sum_c' W_cc' x_c' jointly, then get
// N(0, noise_std^2) added. A connected masked component with no unmasked
// neighbour throws ImputationError, unless `allow_isolated` is set, in which
// case it takes the minimum-norm solution (zero) plus noise.
Signal laplacian_impute(const Signal& values, const std::vector<Index>& masked,
                        const NeighborGraph& graph, double noise_std,
                        std::uint64_t seed, bool allow_isolated = false);

// ---------------------------------------------------------------------------
// 1/f spectral imputation.

// P(f) = a0 + a1 / f + a2 / f^2 + a3 / f^3, least squares on f > 0. A fit
// with fewer terms keeps the leading ones and zeroes the rest.
struct SpectralFit {
  Eigen::Vector4d coefficients = Eigen::Vector4d::Zero();
  double f_min = 0.0;
  double f_max = 0.0;

  double operator()(double f) const;
  static SpectralFit fit(const Vector& frequencies, const Vector& power, int terms = 4);
};

enum class AmplitudeRule {
  // P is a power fit; amplitude sqrt(max(P, 0)).
  kSqrtPower,
  // Amplitude set to max(P, 0) directly.
  kLiteral,
};

struct SpectralImputeOptions {
  AmplitudeRule amplitude = AmplitudeRule::kSqrtPower;
  // With one to three unmasked bins, fit that many leading terms instead of
  // throwing FitError.
  bool reduce_degree_when_underdetermined = false;
  // With no unmasked bin, fit every non-DC bin. Used for the fully masked
  // endpoint.
  bool fit_all_when_underdetermined = false;
};

// Replaces the amplitude of every bin in `band` with the fitted 1/f value,
// keeping phases. The band may not contain the DC bin.
Signal spectral_impute(const Signal& x, const FeatureSubset& band, double sampling_rate,
                       const SpectralImputeOptions& options = {});

// ---------------------------------------------------------------------------
// Fractional Brownian bridge imputation.

inline constexpr double kDefaultHurst = 1e-5;

// Per channel, the window is replaced by an MFBB through the original values
// at its first, middle and last samples. The bridge is scaled so its
// increment std matches the increments of the unmasked samples within one
// window length on either side.
Signal temporal_impute(const Signal& x, const FeatureSubset& window,
                       double hurst, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adversarial replacement.

enum class Norm { kLinf, kL2 };

struct AdversarialConfig {
  double epsilon = 0.1;
  // Defaults to 2.5 * epsilon / iterations when unset.
  std::optional<double> step_size;
  int iterations = 10;
  Norm norm = Norm::kLinf;
  std::uint64_t seed = 0;

  double step() const {
    return step_size ? *step_size : 2.5 * epsilon / static_cast<double>(iterations);
  }
};

struct AdversarialCounterpart {
  Signal x_adv;
  Index sample_index = -1;
  AdversarialConfig config;
  Signal initial_perturbation;
};

Signal project_ball(const Signal& candidate, const Signal& center, double epsilon, Norm norm);

// Untargeted sign-gradient ascent on the cross-entropy, projected onto the
// epsilon ball after every step, from x + U(-eps, eps) noise.
AdversarialCounterpart pgd(const Model& model, const Signal& x, Index y,
                           const AdversarialConfig& cfg);

struct EpsilonGrid {
  double start = 0.01;
  double factor = 1.2;
  int count = 40;

  std::vector<double> values() const;
};

struct CalibrationResult {
  double epsilon = 0.0;
  double chance = 0.0;
  std::vector<double> epsilons;
  std::vector<double> accuracies;
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, CalibrationResult trace)
      : Error(what), trace_(std::move(trace)) {}
  const CalibrationResult& trace() const { return trace_; }

 private:
  CalibrationResult trace_;
};

// Accuracy on the adversarial counterparts of every sample (full replacement).
double full_replacement_accuracy(const Model& model, const Dataset& data,
                                 const AdversarialConfig& cfg);

// Smallest grid epsilon whose full-replacement accuracy is at most
// 1 / num_classes + tolerance. The whole trace is evaluated and returned.
CalibrationResult calibrate_epsilon(const Model& model, const Dataset& data,
                                    const AdversarialConfig& base,
                                    const EpsilonGrid& grid, double tolerance = 0.05);

// (1 - M) x + M x_adv for time-domain and grid masks.
Signal aim_mask(const Signal& x, const Signal& x_adv, const BinaryMask& mask);
// Band coefficients of x replaced by those of x_adv (or only their
// amplitudes), then transformed back.
Signal aim_spectral(const Signal& x, const Signal& x_adv, const FeatureSubset& band,
                    bool amplitude_only = false);

struct HalfFrequencyResult {
  Signal x;
  std::vector<Index> replaced_bins;
  // Some f / 2 fell below the frequency resolution and bin 1 was used.
  bool clamped = false;
};

// For every bin f of the band, the bin nearest f / 2 takes x_adv's coefficient.
HalfFrequencyResult half_freq_correction(const Signal& x, const Signal& x_adv,
                                         const FeatureSubset& band);

// ---------------------------------------------------------------------------
// Operator dispatch.

enum class OperatorKind { kZeroing, kMdRoad, kAim, kIdentity };

std::string operator_name(OperatorKind kind);  // "ZEROING", "MDROAD", "AIM", "IDENTITY"
OperatorKind parse_operator(const std::string& name);

struct OperatorConfig {
  OperatorKind kind = OperatorKind::kZeroing;
  // Laplacian noise std as a fraction of the input's std.
  double laplacian_noise_fraction = 0.01;
  double hurst = kDefaultHurst;
  AmplitudeRule amplitude = AmplitudeRule::kSqrtPower;
  double band_tolerance = 0.1;
  AdversarialConfig adversarial;
  // Calibrate adversarial.epsilon on the evaluation set before use.
  bool calibrate = true;
  EpsilonGrid epsilon_grid;
  double calibration_tolerance = 0.05;
  bool aim_amplitude_only = false;
  bool half_frequency = false;
};

// Geometry an operator needs beyond the sample itself.
struct MaskingContext {
  Layout layout = Layout::kChannelsTime;
  double sampling_rate = 1.0;
  std::optional<NeighborGraph> montage;

  static MaskingContext of(const Dataset& data);
};

// Empty string when `kind` can mask `domain` on data with this context,
// otherwise the reason it cannot.
std::string incompatibility(OperatorKind kind, Domain domain, const MaskingContext& ctx);

// T(x, subset). `x_adv` is required for AIM. `full_mask` marks the all-masked
// endpoint, where imputation falls back as documented above. The identity
// operator (test hook) returns x, except for the endpoint, which is zero.
Signal apply_operator(const OperatorConfig& op, const MaskingContext& ctx,
                      const Signal& x, const Signal* x_adv, const FeatureSubset& subset,
                      std::uint64_t seed, bool full_mask = false);

}  // namespace faithmask

#endif  // FAITHMASK_MASKING_HPP_
