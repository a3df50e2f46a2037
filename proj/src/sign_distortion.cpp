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

#include "faithmask/sign_distortion.hpp"

#include <numbers>

#include "faithmask/spectrum.hpp"

namespace faithmask {
namespace {

double peak_frequency(const Vector& amplitude, double resolution) {
  Index best = 1;
  amplitude.tail(amplitude.size() - 1).maxCoeff(&best);
  return static_cast<double>(best + 1) * resolution;
}

}  // namespace

SignDistortion sign_distortion(double frequency, double sampling_rate, Index resolution) {
  if (resolution < 4) throw InvalidArgument("resolution must be >= 4 samples");
  if (!(sampling_rate > 0.0) || !(frequency > 0.0) || frequency >= sampling_rate / 2.0) {
    throw InvalidArgument("need 0 < frequency < sampling_rate / 2");
  }
  SignDistortion d;
  d.frequency = frequency;
  d.sampling_rate = sampling_rate;
  d.time = Vector::LinSpaced(resolution, 0.0, static_cast<double>(resolution - 1) / sampling_rate);
  d.signed_trace = (2.0 * std::numbers::pi * frequency * d.time.array()).sin();
  d.absolute_trace = d.signed_trace.cwiseAbs();

  Signal both(2, resolution);
  both.row(0) = d.signed_trace.transpose();
  both.row(1) = d.absolute_trace.transpose();
  const Spectrum spec = Spectrum::of(both, sampling_rate);
  const Index bins = spec.bins.cols();
  d.frequencies.resize(bins);
  d.signed_amplitude.resize(bins);
  d.absolute_amplitude.resize(bins);
  const double n = static_cast<double>(resolution);
  for (Index f = 0; f < bins; ++f) {
    const double scale = static_cast<double>(bin_multiplicity(f, resolution)) / n;
    d.frequencies(f) = spec.frequency(f);
    d.signed_amplitude(f) = scale * std::abs(spec.bins(0, f));
    d.absolute_amplitude(f) = scale * std::abs(spec.bins(1, f));
  }
  d.signed_peak_hz = peak_frequency(d.signed_amplitude, spec.resolution());
  d.absolute_peak_hz = peak_frequency(d.absolute_amplitude, spec.resolution());
  return d;
}

}  // namespace faithmask
