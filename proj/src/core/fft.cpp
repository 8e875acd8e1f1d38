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

#include "core/fft.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace tsfew {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// In-place iterative radix-2, sign = -1 forward, +1 inverse (unscaled).
void fft_inplace(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cdouble wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cdouble u = a[i + k];
        cdouble v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_power_of_two(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<cdouble> fft(const std::vector<cdouble>& x) {
  if (x.empty()) raise(ErrorCode::kInvalidArgument, "fft: empty input");
  if (!is_power_of_two(x.size()))
    raise(ErrorCode::kInvalidArgument,
          "fft: length " + std::to_string(x.size()) + " is not a power of two");
  std::vector<cdouble> a = x;
  fft_inplace(a, -1);
  return a;
}

std::vector<cdouble> ifft(const std::vector<cdouble>& x) {
  if (x.empty()) raise(ErrorCode::kInvalidArgument, "ifft: empty input");
  if (!is_power_of_two(x.size()))
    raise(ErrorCode::kInvalidArgument,
          "ifft: length " + std::to_string(x.size()) + " is not a power of two");
  std::vector<cdouble> a = x;
  fft_inplace(a, +1);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= inv;
  return a;
}

DftPlan::DftPlan(size_t n) : n_(n), pow2_(is_power_of_two(n)) {
  if (n == 0) raise(ErrorCode::kInvalidArgument, "DftPlan: zero length");
  if (pow2_) return;
  m_ = next_power_of_two(2 * n - 1);
  chirp_.resize(n);
  const uint64_t two_n = 2 * static_cast<uint64_t>(n);
  for (size_t k = 0; k < n; ++k) {
    // k^2 reduced mod 2n keeps the phase argument small and exact
    uint64_t q = (static_cast<uint64_t>(k) * k) % two_n;
    double ang = -kPi * static_cast<double>(q) / static_cast<double>(n);
    chirp_[k] = cdouble(std::cos(ang), std::sin(ang));
  }
  std::vector<cdouble> b(m_, cdouble(0.0, 0.0));
  b[0] = cdouble(1.0, 0.0);
  for (size_t k = 1; k < n; ++k) {
    cdouble c = std::conj(chirp_[k]);
    b[k] = c;
    b[m_ - k] = c;
  }
  fft_inplace(b, -1);
  bfft_ = std::move(b);
}

std::vector<cdouble> DftPlan::transform(const std::vector<cdouble>& x) const {
  if (x.size() != n_)
    raise(ErrorCode::kInvalidArgument, "DftPlan: input length mismatch");
  if (pow2_) {
    std::vector<cdouble> a = x;
    fft_inplace(a, -1);
    return a;
  }
  std::vector<cdouble> a(m_, cdouble(0.0, 0.0));
  for (size_t k = 0; k < n_; ++k) a[k] = x[k] * chirp_[k];
  fft_inplace(a, -1);
  for (size_t k = 0; k < m_; ++k) a[k] *= bfft_[k];
  fft_inplace(a, +1);
  const double inv = 1.0 / static_cast<double>(m_);
  std::vector<cdouble> out(n_);
  for (size_t k = 0; k < n_; ++k) out[k] = a[k] * inv * chirp_[k];
  return out;
}

}  // namespace tsfew
