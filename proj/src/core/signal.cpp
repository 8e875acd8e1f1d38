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

#include "core/signal.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace tsfew {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

WindowKind window_kind_from_string(const std::string& s) {
  if (s == "hann") return WindowKind::kHann;
  if (s == "rectangular") return WindowKind::kRectangular;
  raise(ErrorCode::kInvalidArgument, "unknown window kind '" + s + "'");
}

std::string to_string(WindowKind k) {
  return k == WindowKind::kHann ? "hann" : "rectangular";
}

void StftConfig::validate() const {
  if (window_length < 2)
    raise(ErrorCode::kInvalidArgument, "stft: window_length must be >= 2");
  if (overlap < 1 || overlap >= window_length)
    raise(ErrorCode::kInvalidArgument,
          "stft: overlap must satisfy 1 <= overlap < window_length");
  if (!(log_epsilon > 0.0))
    raise(ErrorCode::kInvalidArgument, "stft: log_epsilon must be > 0");
}

std::vector<double> make_window(WindowKind kind, int length) {
  if (length < 1)
    raise(ErrorCode::kInvalidArgument, "make_window: length must be >= 1");
  std::vector<double> w(static_cast<size_t>(length), 1.0);
  if (kind == WindowKind::kHann && length > 1) {
    for (int n = 0; n < length; ++n)
      w[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * n / (length - 1)));
  }
  return w;
}

int64_t stft_frame_count(int64_t n, const StftConfig& cfg) {
  cfg.validate();
  if (n < cfg.window_length)
    raise(ErrorCode::kInvalidArgument,
          "stft: series too short (" + std::to_string(n) + " samples, window " +
              std::to_string(cfg.window_length) + ")");
  return (n - cfg.window_length) / cfg.hop() + 1;
}

Spectrogram stft(const std::vector<double>& x, const StftConfig& cfg) {
  const int64_t n = static_cast<int64_t>(x.size());
  const int64_t frames = stft_frame_count(n, cfg);
  const int l = cfg.window_length;
  const int hop = cfg.hop();
  const int bins = l / 2 + 1;

  const std::vector<double> w = make_window(cfg.window_kind, l);
  DftPlan plan(static_cast<size_t>(l));

  Spectrogram spec;
  spec.freq_bins = bins;
  spec.frames = static_cast<int>(frames);
  spec.values.resize(static_cast<size_t>(bins) * frames);

  std::vector<cdouble> frame(static_cast<size_t>(l));
  for (int64_t m = 0; m < frames; ++m) {
    const int64_t start = m * hop;
    for (int i = 0; i < l; ++i)
      frame[i] = cdouble(x[start + i] * w[i], 0.0);
    std::vector<cdouble> spectrum = plan.transform(frame);
    for (int k = 0; k < bins; ++k)
      spec.values[static_cast<size_t>(k) * frames + m] =
          std::log(std::abs(spectrum[k]) + cfg.log_epsilon);
  }
  return spec;
}

Spectrogram stft_channel(const TimeSeries& ts, int channel, const StftConfig& cfg) {
  if (channel < 0 || channel >= ts.channels)
    raise(ErrorCode::kInvalidArgument, "stft: channel index out of range");
  return stft(ts.channel(channel), cfg);
}

GrayImage quantize_to_gray(const Spectrogram& spec) {
  if (spec.freq_bins < 1 || spec.frames < 1)
    raise(ErrorCode::kInvalidArgument, "quantize: empty spectrogram");
  double lo = spec.values[0], hi = spec.values[0];
  for (double v : spec.values) {
    if (!std::isfinite(v))
      raise(ErrorCode::kInvalidArgument, "quantize: non-finite spectrogram value");
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  GrayImage img;
  img.height = spec.freq_bins;
  img.width = spec.frames;
  img.pixels.assign(spec.values.size(), 0);
  if (hi > lo) {
    const double scale = 255.0 / (hi - lo);
    for (size_t i = 0; i < spec.values.size(); ++i)
      img.pixels[i] =
          static_cast<uint8_t>(std::lround((spec.values[i] - lo) * scale));
  }
  return img;
}

}  // namespace tsfew
