// Copyright 2026 the tsfew authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSFEW_CORE_FFT_HPP
#define TSFEW_CORE_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace tsfew {

using cdouble = std::complex<double>;

bool is_power_of_two(size_t n);
size_t next_power_of_two(size_t n);

// Radix-2 Cooley-Tukey DFT, X[k] = sum_n x[n] e^{-2*pi*i*k*n/N}.
// Input length must be a nonzero power of two.
std::vector<cdouble> fft(const std::vector<cdouble>& x);

// Inverse transform with 1/N scaling; ifft(fft(x)) == x up to rounding.
std::vector<cdouble> ifft(const std::vector<cdouble>& x);

// Exact N-point DFT for arbitrary N: radix-2 when N is a power of two,
// Bluestein's chirp-z algorithm (built on the radix-2 core) otherwise.
// Construct once per length, then transform many frames.
class DftPlan {
 public:
  explicit DftPlan(size_t n);
  size_t size() const { return n_; }
  std::vector<cdouble> transform(const std::vector<cdouble>& x) const;

 private:
  size_t n_;
  bool pow2_;
  size_t m_ = 0;                 // convolution length, power of two >= 2n-1
  std::vector<cdouble> chirp_;   // e^{-i*pi*k^2/n}
  std::vector<cdouble> bfft_;    // fft of the chirp filter
};

}  // namespace tsfew

#endif  // TSFEW_CORE_FFT_HPP
