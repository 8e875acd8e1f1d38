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

#ifndef TSFEW_CORE_SIGNAL_HPP
#define TSFEW_CORE_SIGNAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/image.hpp"
#include "core/series.hpp"

namespace tsfew {

enum class WindowKind { kHann, kRectangular };

WindowKind window_kind_from_string(const std::string& s);
std::string to_string(WindowKind k);

struct StftConfig {
  int window_length = 420;
  int overlap = 315;  // samples shared by adjacent windows
  WindowKind window_kind = WindowKind::kHann;
  double log_epsilon = 1e-10;

  int hop() const { return window_length - overlap; }
  void validate() const;
};

// Log-magnitude spectrogram: values[bin * frames + frame], bin 0 first.
struct Spectrogram {
  int freq_bins = 0;  // window_length / 2 + 1
  int frames = 0;
  std::vector<double> values;

  double at(int bin, int frame) const {
    return values[static_cast<size_t>(bin) * frames + frame];
  }
};

// Analysis window of the given length. Hann uses the symmetric form
// w[n] = 0.5 * (1 - cos(2*pi*n/(length-1))); a length-1 window is [1].
std::vector<double> make_window(WindowKind kind, int length);

int64_t stft_frame_count(int64_t n, const StftConfig& cfg);

// One-sided log-magnitude spectrogram: frame m, bin k in [0, l/2],
// X(m,k) = sum_n x[m*hop + n] * w[n] * e^{-2*pi*i*k*n/l}, value
// log(|X(m,k)| + log_epsilon). The DFT runs at the exact window length.
Spectrogram stft(const std::vector<double>& x, const StftConfig& cfg);
Spectrogram stft_channel(const TimeSeries& ts, int channel, const StftConfig& cfg);

// Per-image min-max rescale to [0, 255]; a constant spectrogram maps to
// all-zero pixels. Row 0 of the image is frequency bin 0.
GrayImage quantize_to_gray(const Spectrogram& spec);

}  // namespace tsfew

#endif  // TSFEW_CORE_SIGNAL_HPP
