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

#include "faithmask/masking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include <Eigen/SparseLU>

#include "faithmask/fbm.hpp"
#include "faithmask/spectrum.hpp"

namespace faithmask {
namespace {

void check_shape(const Signal& a, const Signal& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shapes differ");
  }
}

void check_spectral_band(const FeatureSubset& band, Index bins) {
  if (band.domain != Domain::kSpectral) throw InvalidArgument("expected a spectral subset");
  for (Index f : band.indices) {
    if (f <= 0 || f >= bins) {
      throw InvalidArgument("spectral band bins must lie in [1, " + std::to_string(bins - 1) + "]");
    }
  }
}

void check_indices(const FeatureSubset& s, Index bound) {
  for (Index i : s.indices) {
    if (i < 0 || i >= bound) throw InvalidArgument("feature index out of bounds");
  }
}

// Masked nodes grouped into connected components of the graph.
std::vector<std::vector<Index>> masked_components(const std::vector<bool>& is_masked,
                                                  const NeighborGraph& g) {
  std::vector<bool> seen(is_masked.size(), false);
  std::vector<std::vector<Index>> out;
  for (Index start = 0; start < g.size(); ++start) {
    if (!is_masked[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)]) continue;
    std::vector<Index> comp;
    std::queue<Index> q;
    q.push(start);
    seen[static_cast<std::size_t>(start)] = true;
    while (!q.empty()) {
      const Index n = q.front();
      q.pop();
      comp.push_back(n);
      for (const auto* list : {&g.direct(n), &g.diagonal(n)}) {
        for (Index m : *list) {
          if (is_masked[static_cast<std::size_t>(m)] && !seen[static_cast<std::size_t>(m)]) {
            seen[static_cast<std::size_t>(m)] = true;
            q.push(m);
          }
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

BinaryMask subset_to_mask(const FeatureSubset& subset, Index rows, Index cols) {
  BinaryMask m;
  m.domain = subset.domain;
  switch (subset.domain) {
    case Domain::kSpatial:
      check_indices(subset, rows);
      m.values = Signal::Zero(rows, cols);
      for (Index c : subset.indices) m.values.row(c).setOnes();
      break;
    case Domain::kTemporal:
      check_indices(subset, cols);
      m.values = Signal::Zero(rows, cols);
      for (Index t : subset.indices) m.values.col(t).setOnes();
      break;
    case Domain::kSpectral:
      m.values = Signal::Zero(rows, num_bins(cols));
      check_indices(subset, m.values.cols());
      for (Index f : subset.indices) m.values.col(f).setOnes();
      break;
    case Domain::kGrid:
      check_indices(subset, rows * cols);
      m.values = Signal::Zero(rows, cols);
      for (Index p : subset.indices) m.values.data()[p] = 1.0;
      break;
  }
  return m;
}

FeatureSubset full_subset(Domain domain, Index rows, Index cols) {
  FeatureSubset s;
  s.domain = domain;
  s.ratio = 1.0;
  Index lo = 0, n = 0;
  switch (domain) {
    case Domain::kSpatial: n = rows; break;
    case Domain::kTemporal: n = cols; break;
    case Domain::kSpectral: lo = 1; n = num_bins(cols) - 1; break;
    case Domain::kGrid: n = rows * cols; break;
  }
  s.indices.resize(static_cast<std::size_t>(n));
  std::iota(s.indices.begin(), s.indices.end(), lo);
  return s;
}

Signal zero_mask(const Signal& x, const FeatureSubset& subset) {
  if (subset.empty()) return x;
  if (subset.domain == Domain::kSpectral) {
    ComplexSignal spec = rfft_rows(x);
    check_spectral_band(subset, spec.cols());
    for (Index f : subset.indices) spec.col(f).setZero();
    return irfft_rows(spec, x.cols());
  }
  const BinaryMask m = subset_to_mask(subset, x.rows(), x.cols());
  return Signal((m.values.array() > 0.5).select(0.0, x.array()));
}

// ---------------------------------------------------------------------------

NeighborGraph NeighborGraph::lattice(Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("lattice dimensions must be positive");
  NeighborGraph g;
  g.rows_ = rows;
  g.cols_ = cols;
  g.direct_.resize(static_cast<std::size_t>(rows * cols));
  g.diagonal_.resize(static_cast<std::size_t>(rows * cols));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const auto node = static_cast<std::size_t>(r * cols + c);
      for (Index dr = -1; dr <= 1; ++dr) {
        for (Index dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const Index rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
          auto& list = (dr == 0 || dc == 0) ? g.direct_[node] : g.diagonal_[node];
          list.push_back(rr * cols + cc);
        }
      }
    }
  }
  return g;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> NeighborGraph::weights() const {
  std::vector<Eigen::Triplet<double>> trips;
  for (Index n = 0; n < size(); ++n) {
    const double total = kDirectWeight * static_cast<double>(direct(n).size()) +
                         kDiagonalWeight * static_cast<double>(diagonal(n).size());
    if (total <= 0.0) continue;
    for (Index m : direct(n)) trips.emplace_back(n, m, kDirectWeight / total);
    for (Index m : diagonal(n)) trips.emplace_back(n, m, kDiagonalWeight / total);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> w(size(), size());
  w.setFromTriplets(trips.begin(), trips.end());
  return w;
}

Signal laplacian_impute(const Signal& values, const std::vector<Index>& masked,
                        const NeighborGraph& graph, double noise_std,
                        std::uint64_t seed, bool allow_isolated) {
  if (values.rows() != graph.size()) {
    throw ShapeError("graph has " + std::to_string(graph.size()) + " nodes but data has " +
                     std::to_string(values.rows()) + " rows");
  }
  if (noise_std < 0.0) throw InvalidArgument("noise std must be >= 0");
  if (masked.empty()) return values;

  std::vector<bool> is_masked(static_cast<std::size_t>(graph.size()), false);
  for (Index m : masked) {
    if (m < 0 || m >= graph.size()) throw InvalidArgument("masked node out of bounds");
    is_masked[static_cast<std::size_t>(m)] = true;
  }

  // Nodes in components without any unmasked neighbour carry no information.
  std::vector<bool> isolated(is_masked.size(), false);
  for (const auto& comp : masked_components(is_masked, graph)) {
    bool anchored = false;
    for (Index n : comp) {
      for (const auto* list : {&graph.direct(n), &graph.diagonal(n)}) {
        for (Index m : *list) anchored = anchored || !is_masked[static_cast<std::size_t>(m)];
      }
    }
    if (anchored) continue;
    if (!allow_isolated) {
      throw ImputationError("masked channels form a component with no unmasked neighbour");
    }
    for (Index n : comp) isolated[static_cast<std::size_t>(n)] = true;
  }

  std::vector<Index> unknown;
  std::vector<Index> position(is_masked.size(), -1);
  for (Index n = 0; n < graph.size(); ++n) {
    if (is_masked[static_cast<std::size_t>(n)] && !isolated[static_cast<std::size_t>(n)]) {
      position[static_cast<std::size_t>(n)] = static_cast<Index>(unknown.size());
      unknown.push_back(n);
    }
  }

  Signal out = values;
  for (Index n = 0; n < graph.size(); ++n) {
    if (isolated[static_cast<std::size_t>(n)]) out.row(n).setZero();
  }

  if (!unknown.empty()) {
    const auto w = graph.weights();
    const Index m = static_cast<Index>(unknown.size());
    std::vector<Eigen::Triplet<double>> trips;
    Signal rhs = Signal::Zero(m, values.cols());
    for (Index i = 0; i < m; ++i) {
      const Index node = unknown[static_cast<std::size_t>(i)];
      trips.emplace_back(i, i, 1.0);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(w, node); it; ++it) {
        const Index nb = it.col();
        if (!is_masked[static_cast<std::size_t>(nb)]) {
          rhs.row(i) += it.value() * values.row(nb);
        } else if (!isolated[static_cast<std::size_t>(nb)]) {
          trips.emplace_back(i, position[static_cast<std::size_t>(nb)], -it.value());
        }
      }
    }
    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ImputationError("Laplacian system is singular");
    const Eigen::MatrixXd sol = lu.solve(Eigen::MatrixXd(rhs));
    for (Index i = 0; i < m; ++i) out.row(unknown[static_cast<std::size_t>(i)]) = sol.row(i);
  }

  if (noise_std > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, noise_std);
    for (Index n : masked) {
      for (Index t = 0; t < out.cols(); ++t) out(n, t) += normal(rng);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double SpectralFit::operator()(double f) const {
  const double inv = 1.0 / f;
  return coefficients(0) + inv * (coefficients(1) + inv * (coefficients(2) + inv * coefficients(3)));
}

SpectralFit SpectralFit::fit(const Vector& frequencies, const Vector& power, int terms) {
  if (frequencies.size() != power.size()) throw ShapeError("frequency and power lengths differ");
  if (terms < 1 || terms > 4) throw InvalidArgument("1/f fit uses 1 to 4 terms");
  if (frequencies.size() < terms) {
    throw FitError("1/f fit with " + std::to_string(terms) + " terms needs as many bins, got " +
                   std::to_string(frequencies.size()));
  }
  if ((frequencies.array() <= 0.0).any()) throw FitError("1/f fit requires f > 0");
  Eigen::MatrixXd design(frequencies.size(), terms);
  for (Index i = 0; i < frequencies.size(); ++i) {
    double v = 1.0;
    for (int j = 0; j < terms; ++j, v /= frequencies(i)) design(i, j) = v;
  }
  SpectralFit fit;
  fit.coefficients.head(terms) = design.colPivHouseholderQr().solve(power);
  fit.f_min = frequencies.minCoeff();
  fit.f_max = frequencies.maxCoeff();
  if (!all_finite(fit.coefficients)) throw FitError("1/f fit produced non-finite coefficients");
  return fit;
}

Signal spectral_impute(const Signal& x, const FeatureSubset& band, double sampling_rate,
                       const SpectralImputeOptions& options) {
  if (band.empty()) return x;
  Spectrum spec = Spectrum::of(x, sampling_rate);
  const Index bins = spec.bins.cols();
  check_spectral_band(band, bins);
  std::vector<bool> in_band(static_cast<std::size_t>(bins), false);
  for (Index f : band.indices) in_band[static_cast<std::size_t>(f)] = true;

  std::vector<Index> fit_bins;
  for (Index f = 1; f < bins; ++f) {
    if (!in_band[static_cast<std::size_t>(f)]) fit_bins.push_back(f);
  }
  int terms = 4;
  if (fit_bins.size() < 4 && !fit_bins.empty() && options.reduce_degree_when_underdetermined) {
    terms = static_cast<int>(fit_bins.size());
  }
  if (fit_bins.size() < 4 && fit_bins.empty() && options.fit_all_when_underdetermined) {
    fit_bins.resize(static_cast<std::size_t>(bins - 1));
    std::iota(fit_bins.begin(), fit_bins.end(), Index{1});
  }
  Vector freqs(static_cast<Index>(fit_bins.size()));
  for (Index i = 0; i < freqs.size(); ++i) freqs(i) = spec.frequency(fit_bins[static_cast<std::size_t>(i)]);

  for (Index c = 0; c < x.rows(); ++c) {
    Vector power(freqs.size());
    for (Index i = 0; i < freqs.size(); ++i) power(i) = std::norm(spec.bins(c, fit_bins[static_cast<std::size_t>(i)]));
    const SpectralFit fit = SpectralFit::fit(freqs, power, terms);
    for (Index f : band.indices) {
      const double p = std::max(fit(spec.frequency(f)), 0.0);
      const double amp = options.amplitude == AmplitudeRule::kSqrtPower ? std::sqrt(p) : p;
      spec.bins(c, f) = std::polar(amp, std::arg(spec.bins(c, f)));
    }
  }
  return spec.to_signal();
}

// ---------------------------------------------------------------------------

namespace {

// Increments of x(c, .) inside [lo, hi).
void append_increments(const Signal& x, Index c, Index lo, Index hi, std::vector<double>& out) {
  for (Index t = std::max<Index>(lo, 0) + 1; t < std::min(hi, x.cols()); ++t) {
    out.push_back(x(c, t) - x(c, t - 1));
  }
}

double increment_std(const std::vector<double>& d) {
  if (d.empty()) return 0.0;
  return population_std(Eigen::Map<const Vector>(d.data(), static_cast<Index>(d.size())));
}

}  // namespace

Signal temporal_impute(const Signal& x, const FeatureSubset& window, double hurst,
                       std::uint64_t seed) {
  if (window.empty()) return x;
  if (window.domain != Domain::kTemporal) throw InvalidArgument("expected a temporal subset");
  check_indices(window, x.cols());
  const Index start = window.indices.front();
  const Index len = window.size();
  if (window.indices.back() != start + len - 1) {
    throw InvalidArgument("temporal subset must be contiguous");
  }

  BridgeAnchors anchors;
  anchors.indices = {0, (len - 1) / 2, len - 1};
  anchors.indices.erase(std::unique(anchors.indices.begin(), anchors.indices.end()),
                        anchors.indices.end());
  anchors.values.resize(static_cast<Index>(anchors.indices.size()));

  Signal out = x;
  for (Index c = 0; c < x.rows(); ++c) {
    for (std::size_t i = 0; i < anchors.indices.size(); ++i) {
      anchors.values(static_cast<Index>(i)) = x(c, start + anchors.indices[i]);
    }
    std::vector<double> inc;
    append_increments(x, c, start - len, start, inc);
    append_increments(x, c, start + len, start + 2 * len, inc);
    if (inc.size() < 2) {
      inc.clear();
      append_increments(x, c, 0, x.cols(), inc);
    }
    const double dt_pow = len > 1 ? std::pow(static_cast<double>(len - 1), hurst) : 1.0;
    const double scale = increment_std(inc) * dt_pow;
    out.row(c).segment(start, len) =
        mfbb(len, anchors, hurst, derive_seed(seed, {static_cast<std::uint64_t>(c)}), scale)
            .transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------

Signal project_ball(const Signal& candidate, const Signal& center, double epsilon, Norm norm) {
  check_shape(candidate, center, "projection");
  Signal d = candidate - center;
  if (norm == Norm::kLinf) {
    d = d.cwiseMax(-epsilon).cwiseMin(epsilon);
  } else {
    const double n = d.norm();
    if (n > epsilon) d *= epsilon / n;
  }
  return center + d;
}

AdversarialCounterpart pgd(const Model& model, const Signal& x, Index y,
                           const AdversarialConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(cfg.step() > 0.0)) throw InvalidArgument("step size must be positive");
  if (cfg.iterations < 1) throw InvalidArgument("PGD needs at least one iteration");

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> u(-cfg.epsilon, cfg.epsilon);
  Signal delta(x.rows(), x.cols());
  for (Index i = 0; i < delta.size(); ++i) delta.data()[i] = u(rng);

  AdversarialCounterpart out;
  out.config = cfg;
  out.x_adv = project_ball(x + delta, x, cfg.epsilon, cfg.norm);
  out.initial_perturbation = out.x_adv - x;
  const double alpha = cfg.step();
  for (int t = 0; t < cfg.iterations; ++t) {
    if (!std::isfinite(loss(model, out.x_adv, y))) {
      throw AttackError("loss became non-finite during PGD");
    }
    const Signal g = input_gradient(model, out.x_adv, y);
    const Signal step = g.unaryExpr([](double v) { return double((v > 0.0) - (v < 0.0)); });
    out.x_adv = project_ball(out.x_adv + alpha * step, x, cfg.epsilon, cfg.norm);
  }
  return out;
}

std::vector<double> EpsilonGrid::values() const {
  if (!(start > 0.0) || !(factor > 1.0) || count < 1) {
    throw InvalidArgument("epsilon grid needs start > 0, factor > 1 and count >= 1");
  }
  std::vector<double> v;
  double e = start;
  for (int i = 0; i < count; ++i, e *= factor) v.push_back(e);
  return v;
}

double full_replacement_accuracy(const Model& model, const Dataset& data,
                                 const AdversarialConfig& cfg) {
  if (data.empty()) throw InvalidArgument("accuracy of an empty dataset");
  Index correct = 0;
  for (Index i = 0; i < data.size(); ++i) {
    const Sample& s = data.samples[static_cast<std::size_t>(i)];
    AdversarialConfig c = cfg;
    c.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(i)});
    if (predict(model, pgd(model, s.x, s.y, c).x_adv) == s.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

CalibrationResult calibrate_epsilon(const Model& model, const Dataset& data,
                                    const AdversarialConfig& base, const EpsilonGrid& grid,
                                    double tolerance) {
  CalibrationResult r;
  r.chance = 1.0 / static_cast<double>(model.num_classes());
  r.epsilon = -1.0;
  for (double eps : grid.values()) {
    AdversarialConfig c = base;
    c.epsilon = eps;
    const double acc = full_replacement_accuracy(model, data, c);
    r.epsilons.push_back(eps);
    r.accuracies.push_back(acc);
    if (r.epsilon < 0.0 && acc <= r.chance + tolerance) r.epsilon = eps;
  }
  if (r.epsilon < 0.0) {
    throw CalibrationError("no epsilon in the grid brings full-replacement accuracy to chance",
                           r);
  }
  return r;
}

Signal aim_mask(const Signal& x, const Signal& x_adv, const BinaryMask& mask) {
  check_shape(x, x_adv, "aim_mask");
  check_shape(x, mask.values, "aim_mask");
  return Signal((mask.values.array() > 0.5).select(x_adv.array(), x.array()));
}

Signal aim_spectral(const Signal& x, const Signal& x_adv, const FeatureSubset& band,
                    bool amplitude_only) {
  check_shape(x, x_adv, "aim_spectral");
  if (band.empty()) return x;
  ComplexSignal spec = rfft_rows(x);
  const ComplexSignal adv = rfft_rows(x_adv);
  check_spectral_band(band, spec.cols());
  for (Index f : band.indices) {
    for (Index c = 0; c < spec.rows(); ++c) {
      spec(c, f) = amplitude_only ? std::polar(std::abs(adv(c, f)), std::arg(spec(c, f)))
                                  : adv(c, f);
    }
  }
  return irfft_rows(spec, x.cols());
}

HalfFrequencyResult half_freq_correction(const Signal& x, const Signal& x_adv,
                                         const FeatureSubset& band) {
  check_shape(x, x_adv, "half_freq_correction");
  HalfFrequencyResult r;
  if (band.empty()) {
    r.x = x;
    return r;
  }
  ComplexSignal spec = rfft_rows(x);
  const ComplexSignal adv = rfft_rows(x_adv);
  check_spectral_band(band, spec.cols());
  for (Index f : band.indices) {
    const double half = static_cast<double>(f) / 2.0;
    Index h = static_cast<Index>(std::lround(half));
    if (half < 1.0) {
      h = 1;
      r.clamped = true;
    }
    if (std::find(r.replaced_bins.begin(), r.replaced_bins.end(), h) == r.replaced_bins.end()) {
      r.replaced_bins.push_back(h);
    }
    spec.col(h) = adv.col(h);
  }
  std::sort(r.replaced_bins.begin(), r.replaced_bins.end());
  r.x = irfft_rows(spec, x.cols());
  return r;
}

// ---------------------------------------------------------------------------

std::string operator_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kZeroing: return "ZEROING";
    case OperatorKind::kMdRoad: return "MDROAD";
    case OperatorKind::kAim: return "AIM";
    case OperatorKind::kIdentity: return "IDENTITY";
  }
  return "?";
}

OperatorKind parse_operator(const std::string& name) {
  for (OperatorKind k : {OperatorKind::kZeroing, OperatorKind::kMdRoad, OperatorKind::kAim,
                         OperatorKind::kIdentity}) {
    if (operator_name(k) == name) return k;
  }
  throw InvalidArgument("unknown masking operator '" + name + "'");
}

MaskingContext MaskingContext::of(const Dataset& data) {
  MaskingContext ctx;
  ctx.layout = data.layout;
  ctx.sampling_rate = data.sampling_rate;
  if (data.has_montage()) ctx.montage = NeighborGraph::lattice(data.montage_rows, data.montage_cols);
  return ctx;
}

std::string incompatibility(OperatorKind kind, Domain domain, const MaskingContext& ctx) {
  const bool grid_data = ctx.layout == Layout::kGrid;
  if (grid_data != (domain == Domain::kGrid)) {
    return grid_data ? "grid data only supports the grid domain"
                     : "the grid domain needs grid data";
  }
  if (kind == OperatorKind::kMdRoad && domain == Domain::kSpatial && !ctx.montage) {
    return "spatial mdROAD needs a channel montage";
  }
  return "";
}

Signal apply_operator(const OperatorConfig& op, const MaskingContext& ctx, const Signal& x,
                      const Signal* x_adv, const FeatureSubset& subset, std::uint64_t seed,
                      bool full_mask) {
  switch (op.kind) {
    case OperatorKind::kIdentity:
      return full_mask ? Signal(Signal::Zero(x.rows(), x.cols())) : x;
    case OperatorKind::kZeroing:
      return zero_mask(x, subset);
    case OperatorKind::kAim: {
      if (x_adv == nullptr) throw InvalidArgument("AIM needs an adversarial counterpart");
      if (subset.domain == Domain::kSpectral) {
        if (op.half_frequency) return half_freq_correction(x, *x_adv, subset).x;
        return aim_spectral(x, *x_adv, subset, op.aim_amplitude_only);
      }
      return aim_mask(x, *x_adv, subset_to_mask(subset, x.rows(), x.cols()));
    }
    case OperatorKind::kMdRoad:
      break;
  }
  if (subset.empty()) return x;
  const double noise = op.laplacian_noise_fraction * population_std(x);
  switch (subset.domain) {
    case Domain::kSpatial:
      if (!ctx.montage) throw InvalidArgument("spatial mdROAD needs a channel montage");
      return laplacian_impute(x, subset.indices, *ctx.montage, noise, seed, full_mask);
    case Domain::kGrid: {
      const NeighborGraph g = NeighborGraph::lattice(x.rows(), x.cols());
      const Signal flat = Eigen::Map<const Signal>(x.data(), x.size(), 1);
      const Signal filled = laplacian_impute(flat, subset.indices, g, noise, seed, full_mask);
      return Eigen::Map<const Signal>(filled.data(), x.rows(), x.cols());
    }
    case Domain::kTemporal:
      return temporal_impute(x, subset, op.hurst, seed);
    case Domain::kSpectral: {
      SpectralImputeOptions opts;
      opts.amplitude = op.amplitude;
      opts.reduce_degree_when_underdetermined = true;
      opts.fit_all_when_underdetermined = full_mask;
      return spectral_impute(x, subset, ctx.sampling_rate, opts);
    }
  }
  return x;
}

}  // namespace faithmask
