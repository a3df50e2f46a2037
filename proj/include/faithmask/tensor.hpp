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

#ifndef FAITHMASK_TENSOR_HPP_
#define FAITHMASK_TENSOR_HPP_

#include <vector>

#include "faithmask/core.hpp"

namespace faithmask {

// Dense row-major array with an explicit shape. Used at persistence
// boundaries; computation works on Signal/Vector directly.
struct Tensor {
  std::vector<Index> shape;
  Vector data;

  Tensor() = default;
  Tensor(std::vector<Index> shape, Vector data);

  Index size() const { return data.size(); }

  static Tensor from_signal(const Signal& s);
  static Tensor from_vector(const Vector& v);
  // Requires a 2-D shape (a 1-D shape maps to a single row).
  Signal to_signal() const;
};

}  // namespace faithmask

#endif  // FAITHMASK_TENSOR_HPP_
