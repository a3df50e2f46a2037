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

#include "faithmask/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "faithmask/spectrum.hpp"

namespace faithmask {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Dataset empty_dataset(const TaskSpec& spec) {
  Dataset d;
  d.num_classes = spec.classes;
  d.layout = spec.kind == TaskKind::kGrid ? Layout::kGrid : Layout::kChannelsTime;
  d.sampling_rate = spec.sampling_rate;
  if (d.layout == Layout::kChannelsTime) {
    d.montage_rows = spec.montage_rows;
    d.montage_cols = spec.montage_cols;
  }
  d.samples.reserve(static_cast<std::size_t>(spec.classes * spec.samples_per_class));
  return d;
}

Signal gaussian(Index rows, Index cols, double std, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std);
  Signal s(rows, cols);
  for (Index i = 0; i < s.size(); ++i) s.data()[i] = normal(rng);
  return s;
}

// Samples are emitted class-interleaved so any prefix stays near balanced.
template <typename MakeSample>
Dataset build(const TaskSpec& spec, MakeSample make) {
  spec.validate();
  Dataset d = empty_dataset(spec);
  Rng rng(spec.seed);
  for (Index i = 0; i < spec.samples_per_class; ++i) {
    for (Index c = 0; c < spec.classes; ++c) d.samples.push_back({make(c, rng), c});
  }
  return d;
}

void require_kind(const TaskSpec& spec, TaskKind kind) {
  if (spec.kind != kind) throw InvalidArgument("task spec is for the " + task_name(spec.kind) + " task");
}

}  // namespace

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kSpatial: return "spatial";
    case TaskKind::kTemporal: return "temporal";
    case TaskKind::kSpectral: return "spectral";
    case TaskKind::kGrid: return "grid";
  }
  return "?";
}

TaskKind parse_task(const std::string& name) {
  for (TaskKind k : {TaskKind::kSpatial, TaskKind::kTemporal, TaskKind::kSpectral, TaskKind::kGrid}) {
    if (task_name(k) == name) return k;
  }
  throw InvalidArgument("unknown task '" + name + "'");
}

Domain matching_domain(TaskKind kind) {
  switch (kind) {
    case TaskKind::kSpatial: return Domain::kSpatial;
    case TaskKind::kTemporal: return Domain::kTemporal;
    case TaskKind::kSpectral: return Domain::kSpectral;
    case TaskKind::kGrid: return Domain::kGrid;
  }
  return Domain::kSpatial;
}

void TaskSpec::validate() const {
  if (classes < 2) throw InvalidArgument("a task needs at least two classes");
  if (channels < 1 || time < 1) throw InvalidArgument("task dimensions must be positive");
  if (samples_per_class < 1) throw InvalidArgument("samples_per_class must be >= 1");
  if (noise_std < 0.0) throw InvalidArgument("noise std must be >= 0");
  switch (kind) {
    case TaskKind::kSpatial:
      if (informative_channels.empty()) throw InvalidArgument("informative channel set is empty");
      for (Index c : informative_channels) {
        if (c < 0 || c >= channels) throw InvalidArgument("informative channel out of bounds");
      }
      break;
    case TaskKind::kTemporal:
      if (window_begin < 0 || window_end > time || window_end - window_begin < 2) {
        throw InvalidArgument("burst window out of bounds or shorter than two samples");
      }
      [[fallthrough]];
    case TaskKind::kSpectral: {
      if (static_cast<Index>(class_frequencies.size()) != classes) {
        throw InvalidArgument("need one frequency per class");
      }
      std::set<double> uniq(class_frequencies.begin(), class_frequencies.end());
      if (static_cast<Index>(uniq.size()) != classes) {
        throw InvalidArgument("duplicate class frequencies");
      }
      if (kind == TaskKind::kSpectral) {
        std::set<Index> bins;
        for (Index c = 0; c < classes; ++c) bins.insert(class_bin(*this, c));
        if (static_cast<Index>(bins.size()) != classes) {
          throw InvalidArgument("class frequencies share a DFT bin");
        }
        for (Index b : bins) {
          if (b < 1 || b >= num_bins(time)) throw InvalidArgument("class frequency outside (0, Nyquist)");
        }
      }
      break;
    }
    case TaskKind::kGrid:
      if (patch_size < 1) throw InvalidArgument("patch size must be >= 1");
      for (Index c = 0; c < classes; ++c) {
        const auto [r, col] = patch_origin(*this, c);
        if (r + patch_size > channels || col + patch_size > time) {
          throw InvalidArgument("class patch does not fit on the grid");
        }
      }
      break;
  }
}

std::pair<Index, Index> patch_origin(const TaskSpec& spec, Index c) {
  // Classes tile the grid in a near-square layout; each patch is centred in
  // its cell.
  const Index per_row = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(spec.classes))));
  const Index cell_rows = (spec.classes + per_row - 1) / per_row;
  const Index cell_h = spec.channels / cell_rows;
  const Index cell_w = spec.time / per_row;
  const Index r = (c / per_row) * cell_h + (cell_h - spec.patch_size) / 2;
  const Index col = (c % per_row) * cell_w + (cell_w - spec.patch_size) / 2;
  return {r, col};
}

Index class_bin(const TaskSpec& spec, Index c) {
  return static_cast<Index>(std::lround(spec.class_frequencies[static_cast<std::size_t>(c)] *
                                        static_cast<double>(spec.time) / spec.sampling_rate));
}

Dataset gen_spatial(const TaskSpec& spec) {
  require_kind(spec, TaskKind::kSpatial);
  return build(spec, [&](Index c, Rng& rng) {
    Signal x = gaussian(spec.channels, spec.time, spec.noise_std, rng);
    std::uniform_real_distribution<double> gain(0.8, 1.2);
    for (Index ch : spec.informative_channels) {
      const double g = gain(rng) * spec.signal_amplitude;
      for (Index t = 0; t < spec.time; ++t) {
        x(ch, t) += g * std::sin(kTwoPi * static_cast<double>((c + 1) * t) / static_cast<double>(spec.time));
      }
    }
    return x;
  });
}

Dataset gen_temporal(const TaskSpec& spec) {
  require_kind(spec, TaskKind::kTemporal);
  const Index len = spec.window_end - spec.window_begin;
  return build(spec, [&](Index c, Rng& rng) {
    Signal x = gaussian(spec.channels, spec.time, spec.noise_std, rng);
    std::uniform_real_distribution<double> gain(0.8, 1.2);
    const double f = spec.class_frequencies[static_cast<std::size_t>(c)];
    for (Index ch = 0; ch < spec.channels; ++ch) {
      const double g = gain(rng) * spec.signal_amplitude;
      for (Index i = 0; i < len; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(len - 1));
        x(ch, spec.window_begin + i) +=
            g * hann * std::sin(kTwoPi * f * static_cast<double>(i) / spec.sampling_rate);
      }
    }
    return x;
  });
}

Dataset gen_spectral(const TaskSpec& spec) {
  require_kind(spec, TaskKind::kSpectral);
  const Index bins = num_bins(spec.time);
  const double half = static_cast<double>(spec.time) / 2.0;
  return build(spec, [&](Index c, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    // 1/f amplitude profile with complex Gaussian coefficients; the time
    // domain noise std is close to noise_std * sqrt(sum 1/f^2) / sqrt(2).
    ComplexSignal spec_bins = ComplexSignal::Zero(spec.channels, bins);
    for (Index ch = 0; ch < spec.channels; ++ch) {
      for (Index f = 1; f < bins; ++f) {
        const double a = spec.noise_std * half / static_cast<double>(f) / std::sqrt(2.0);
        spec_bins(ch, f) = Complex(a * normal(rng), a * normal(rng));
      }
    }
    Signal x = irfft_rows(spec_bins, spec.time);
    const double f = spec.class_frequencies[static_cast<std::size_t>(c)];
    for (Index ch = 0; ch < spec.channels; ++ch) {
      const double ph = phase(rng);
      for (Index t = 0; t < spec.time; ++t) {
        x(ch, t) += spec.signal_amplitude *
                    std::sin(kTwoPi * f * static_cast<double>(t) / spec.sampling_rate + ph);
      }
    }
    return x;
  });
}

Dataset gen_grid(const TaskSpec& spec) {
  require_kind(spec, TaskKind::kGrid);
  return build(spec, [&](Index c, Rng& rng) {
    Signal x = gaussian(spec.channels, spec.time, spec.noise_std, rng);
    std::uniform_real_distribution<double> gain(0.8, 1.2);
    const auto [r, col] = patch_origin(spec, c);
    x.block(r, col, spec.patch_size, spec.patch_size).array() += gain(rng) * spec.signal_amplitude;
    return x;
  });
}

Dataset generate(const TaskSpec& spec) {
  switch (spec.kind) {
    case TaskKind::kSpatial: return gen_spatial(spec);
    case TaskKind::kTemporal: return gen_temporal(spec);
    case TaskKind::kSpectral: return gen_spectral(spec);
    case TaskKind::kGrid: return gen_grid(spec);
  }
  return {};
}

TaskSpec shipped_task(TaskKind kind) {
  TaskSpec s;
  s.kind = kind;
  switch (kind) {
    case TaskKind::kSpatial:
      s.channels = 16;
      s.time = 24;
      s.montage_rows = 4;
      s.montage_cols = 4;
      s.informative_channels = {5};
      s.sampling_rate = 24.0;
      s.signal_amplitude = 1.0;
      s.noise_std = 0.5;
      s.seed = 11;
      break;
    case TaskKind::kTemporal:
      s.channels = 2;
      s.time = 64;
      s.montage_rows = 1;
      s.montage_cols = 2;
      s.window_begin = 36;
      s.window_end = 52;
      s.class_frequencies = {4.0, 6.0, 8.0, 10.0};
      s.sampling_rate = 64.0;
      s.signal_amplitude = 1.0;
      s.noise_std = 0.3;
      s.seed = 12;
      break;
    case TaskKind::kSpectral:
      s.channels = 2;
      s.time = 128;
      s.montage_rows = 1;
      s.montage_cols = 2;
      s.class_frequencies = {12.0, 20.0, 28.0, 36.0};
      s.sampling_rate = 128.0;
      s.signal_amplitude = 0.3;
      s.noise_std = 1.0;
      s.seed = 13;
      break;
    case TaskKind::kGrid:
      s.channels = 8;
      s.time = 8;
      s.montage_rows = 0;
      s.montage_cols = 0;
      s.patch_size = 2;
      s.signal_amplitude = 1.0;
      s.noise_std = 0.5;
      s.seed = 14;
      break;
  }
  return s;
}

TaskSplit make_split(const TaskSpec& spec, Index test_per_class) {
  TaskSpec test = spec;
  test.samples_per_class = test_per_class;
  test.seed = derive_seed(spec.seed, {0x7e57});
  return {generate(spec), generate(test)};
}

OracleAttribution oracle_attribution(const TaskSpec& spec) {
  spec.validate();
  OracleAttribution o;
  o.domain = matching_domain(spec.kind);
  switch (spec.kind) {
    case TaskKind::kSpatial:
      o.indicator = Signal::Zero(spec.channels, spec.time);
      for (Index c : spec.informative_channels) o.indicator.row(c).setOnes();
      break;
    case TaskKind::kTemporal:
      o.indicator = Signal::Zero(spec.channels, spec.time);
      o.indicator.middleCols(spec.window_begin, spec.window_end - spec.window_begin).setOnes();
      break;
    case TaskKind::kSpectral:
      o.indicator = Signal::Zero(1, num_bins(spec.time));
      for (Index c = 0; c < spec.classes; ++c) o.indicator(0, class_bin(spec, c)) = 1.0;
      break;
    case TaskKind::kGrid:
      o.indicator = Signal::Zero(spec.channels, spec.time);
      for (Index c = 0; c < spec.classes; ++c) {
        const auto [r, col] = patch_origin(spec, c);
        o.indicator.block(r, col, spec.patch_size, spec.patch_size).setOnes();
      }
      break;
  }
  return o;
}

}  // namespace faithmask
