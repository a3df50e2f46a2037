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

#include "faithmask/tensor.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace faithmask {

Tensor::Tensor(std::vector<Index> s, Vector d)
    : shape(std::move(s)), data(std::move(d)) {
  Index n = 1;
  for (Index dim : shape) {
    if (dim <= 0) throw ShapeError("tensor dimensions must be positive");
    n *= dim;
  }
  if (n != data.size()) {
    throw ShapeError("tensor shape product " + std::to_string(n) +
                     " does not match data length " +
                     std::to_string(data.size()));
  }
  if (!all_finite(data)) throw InvalidArgument("tensor holds non-finite values");
}

Tensor Tensor::from_signal(const Signal& s) {
  return Tensor({s.rows(), s.cols()},
                Eigen::Map<const Vector>(s.data(), s.size()));
}

Tensor Tensor::from_vector(const Vector& v) { return Tensor({v.size()}, v); }

Signal Tensor::to_signal() const {
  if (shape.size() == 1) {
    return Eigen::Map<const Signal>(data.data(), 1, shape[0]);
  }
  if (shape.size() != 2) throw ShapeError("expected a 1-D or 2-D tensor");
  return Eigen::Map<const Signal>(data.data(), shape[0], shape[1]);
}

}  // namespace faithmask
