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

#ifndef TSFEW_CORE_RNG_HPP
#define TSFEW_CORE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace tsfew {

// splitmix64 finalizer.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// The single PRNG used for every stochastic component. splitmix64 is fixed
// by FORMATS.md so erased images, shuffles and synthetic datasets reproduce
// byte-identically across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }

  // Uniform integer in [lo, hi]. Modulo reduction; the bias is below 2^-50
  // for the small ranges used here.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(
                    next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  // Standard normal, basic Box-Muller. Consumes exactly two draws per call
  // (no caching) so the stream layout stays documented.
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // Fisher-Yates, descending index; draw j = uniform_int(0, i-1).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// Deterministic fan-out of a master seed into per-item seeds, so parallel or
// reordered processing yields the same per-item streams.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0,
                            uint64_t c = 0) {
  uint64_t z = mix64(master + 0x9E3779B97F4A7C15ull);
  z = mix64(z ^ (a + 0xBF58476D1CE4E5B9ull));
  z = mix64(z ^ (b + 0x94D049BB133111EBull));
  z = mix64(z ^ (c + 0xD6E8FEB86659FD93ull));
  return z;
}

}  // namespace tsfew

#endif  // TSFEW_CORE_RNG_HPP
