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

#ifndef FAITHMASK_TASKS_HPP_
#define FAITHMASK_TASKS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "faithmask/core.hpp"
#include "faithmask/dataset.hpp"
#include "faithmask/feature_domains.hpp"

namespace faithmask {

enum class TaskKind { kSpatial, kTemporal, kSpectral, kGrid };

std::string task_name(TaskKind kind);  // "spatial", "temporal", ...
TaskKind parse_task(const std::string& name);
// Feature domain in which a task's planted features live.
Domain matching_domain(TaskKind kind);

// Synthetic classification task with planted discriminative features.
//  spatial:  class template on `informative_channels`, noise elsewhere.
//  temporal: class-dependent Hann-windowed tone in [window_begin, window_end).
//  spectral: tone at class_frequencies[y] with random phase over 1/f noise.
//  grid:     bright patch at a class-specific location (channels x time
//            read as height x width).
struct TaskSpec {
  TaskKind kind = TaskKind::kSpatial;
  Index channels = 16;
  Index time = 24;
  Index montage_rows = 4;
  Index montage_cols = 4;
  Index classes = 4;
  std::vector<Index> informative_channels;
  Index window_begin = 0;
  Index window_end = 0;
  std::vector<double> class_frequencies;
  Index patch_size = 2;
  double sampling_rate = 1.0;
  double signal_amplitude = 1.0;
  double noise_std = 0.5;
  Index samples_per_class = 128;
  std::uint64_t seed = 1;

  // Throws InvalidArgument when the planted features are out of bounds,
  // absent, or ambiguous.
  void validate() const;
};

Dataset gen_spatial(const TaskSpec& spec);
Dataset gen_temporal(const TaskSpec& spec);
Dataset gen_spectral(const TaskSpec& spec);
Dataset gen_grid(const TaskSpec& spec);
Dataset generate(const TaskSpec& spec);

// Default desk-scale configurations, one per task kind.
TaskSpec shipped_task(TaskKind kind);

struct TaskSplit {
  Dataset train;
  Dataset test;
};
// Train set from spec.seed, test set from a derived seed.
TaskSplit make_split(const TaskSpec& spec, Index test_per_class);

// Top-left corner of the patch of class c on the grid task.
std::pair<Index, Index> patch_origin(const TaskSpec& spec, Index c);
// DFT bin carrying the tone of class c on the spectral task.
Index class_bin(const TaskSpec& spec, Index c);

// Indicator of the planted features. Time-domain domains use the input's
// shape; the spectral oracle is 1 x (T/2 + 1) over DFT bins.
struct OracleAttribution {
  Domain domain = Domain::kSpatial;
  Signal indicator;
};
OracleAttribution oracle_attribution(const TaskSpec& spec);

}  // namespace faithmask

#endif  // FAITHMASK_TASKS_HPP_
