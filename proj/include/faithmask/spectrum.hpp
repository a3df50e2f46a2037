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

#ifndef FAITHMASK_SPECTRUM_HPP_
#define FAITHMASK_SPECTRUM_HPP_

#include <complex>

#include "faithmask/core.hpp"

namespace faithmask {

using Complex = std::complex<double>;
using ComplexSignal = MatrixX<Complex>;

// One-sided DFT of every row: bins 0 .. n/2, unnormalized forward transform.
ComplexSignal rfft_rows(const Signal& x);
// Inverse of rfft_rows for rows of length n. The imaginary parts of the DC
// bin (and of the Nyquist bin for even n) are dropped so the result is the
// real signal with a conjugate-symmetric spectrum.
Signal irfft_rows(const ComplexSignal& spectrum, Index n);

inline Index num_bins(Index n) { return n / 2 + 1; }

// Per-channel spectrum of a real channels x time signal.
struct Spectrum {
  ComplexSignal bins;
  Index length = 0;
  double sampling_rate = 1.0;

  static Spectrum of(const Signal& x, double sampling_rate);
  Signal to_signal() const { return irfft_rows(bins, length); }

  double resolution() const { return sampling_rate / static_cast<double>(length); }
  double frequency(Index bin) const { return static_cast<double>(bin) * resolution(); }
  Signal amplitude() const { return bins.cwiseAbs(); }
  Signal phase() const { return bins.unaryExpr([](const Complex& z) { return std::arg(z); }); }
  // |X_{c,f}|^2 summed over channels.
  Vector power() const { return bins.cwiseAbs2().colwise().sum().transpose(); }
};

// Weight of a one-sided bin in the two-sided sum: 1 for DC and the Nyquist
// bin of even lengths, 2 otherwise.
inline double bin_multiplicity(Index bin, Index n) {
  return (bin == 0 || (n % 2 == 0 && bin == n / 2)) ? 1.0 : 2.0;
}

}  // namespace faithmask

#endif  // FAITHMASK_SPECTRUM_HPP_
