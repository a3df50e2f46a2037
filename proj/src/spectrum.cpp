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

#include "faithmask/spectrum.hpp"

#include <vector>

#include <unsupported/Eigen/FFT>

namespace faithmask {

ComplexSignal rfft_rows(const Signal& x) {
  const Index n = x.cols();
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  ComplexSignal out(x.rows(), num_bins(n));
  std::vector<double> in(static_cast<std::size_t>(n));
  std::vector<Complex> bins;
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index t = 0; t < n; ++t) in[static_cast<std::size_t>(t)] = x(r, t);
    fft.fwd(bins, in);
    for (Index f = 0; f < out.cols(); ++f) out(r, f) = bins[static_cast<std::size_t>(f)];
  }
  return out;
}

Signal irfft_rows(const ComplexSignal& spectrum, Index n) {
  if (spectrum.cols() != num_bins(n)) {
    throw ShapeError("spectrum has " + std::to_string(spectrum.cols()) +
                     " bins, expected " + std::to_string(num_bins(n)));
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  Signal out(spectrum.rows(), n);
  std::vector<Complex> bins(static_cast<std::size_t>(spectrum.cols()));
  std::vector<double> time;
  for (Index r = 0; r < spectrum.rows(); ++r) {
    for (Index f = 0; f < spectrum.cols(); ++f) bins[static_cast<std::size_t>(f)] = spectrum(r, f);
    bins.front() = Complex(bins.front().real(), 0.0);
    if (n % 2 == 0) bins.back() = Complex(bins.back().real(), 0.0);
    fft.inv(time, bins, n);
    for (Index t = 0; t < n; ++t) out(r, t) = time[static_cast<std::size_t>(t)];
  }
  return out;
}

Spectrum Spectrum::of(const Signal& x, double sampling_rate) {
  return Spectrum{rfft_rows(x), x.cols(), sampling_rate};
}

}  // namespace faithmask
