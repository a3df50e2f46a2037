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

#ifndef FAITHMASK_DATASET_HPP_
#define FAITHMASK_DATASET_HPP_

#include <vector>

#include "faithmask/core.hpp"

namespace faithmask {

enum class Layout { kChannelsTime, kGrid };

struct Sample {
  Signal x;
  Index y = 0;
};

// Labelled samples of one shape. For channels x time data, channels sit on
// a montage_rows x montage_cols electrode grid used by spatial imputation.
struct Dataset {
  std::vector<Sample> samples;
  Index num_classes = 2;
  Layout layout = Layout::kChannelsTime;
  double sampling_rate = 1.0;
  Index montage_rows = 0;
  Index montage_cols = 0;

  bool empty() const { return samples.empty(); }
  Index size() const { return static_cast<Index>(samples.size()); }
  Index rows() const { return samples.empty() ? 0 : samples.front().x.rows(); }
  Index cols() const { return samples.empty() ? 0 : samples.front().x.cols(); }
  bool has_montage() const {
    return layout == Layout::kChannelsTime && montage_rows * montage_cols == rows() &&
           rows() > 0;
  }
};

}  // namespace faithmask

#endif  // FAITHMASK_DATASET_HPP_
