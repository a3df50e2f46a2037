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

#ifndef FAITHMASK_SIGN_DISTORTION_HPP_
#define FAITHMASK_SIGN_DISTORTION_HPP_

#include "faithmask/core.hpp"

namespace faithmask {

// A sinusoidal saliency trace next to its rectified version |s(t)|, and
// their one-sided amplitude spectra.
struct SignDistortion {
  double frequency = 10.0;
  double sampling_rate = 1000.0;
  Vector time;
  Vector signed_trace;
  Vector absolute_trace;
  Vector frequencies;
  Vector signed_amplitude;
  Vector absolute_amplitude;
  // Frequencies of the largest non-DC component.
  double signed_peak_hz = 0.0;
  double absolute_peak_hz = 0.0;
};

SignDistortion sign_distortion(double frequency = 10.0, double sampling_rate = 1000.0,
                               Index resolution = 1000);

}  // namespace faithmask

#endif  // FAITHMASK_SIGN_DISTORTION_HPP_
