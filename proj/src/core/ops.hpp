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

#ifndef TSFEW_CORE_OPS_HPP
#define TSFEW_CORE_OPS_HPP

#include <vector>

#include "core/tensor.hpp"

namespace tsfew {

enum class NormMode { kTrain, kEval };

// Per-channel running statistics owned by a batchnorm layer.
struct RunningStats {
  std::vector<double> mean;
  std::vector<double> var;

  static RunningStats identity(int channels) {
    return RunningStats{std::vector<double>(channels, 0.0),
                        std::vector<double>(channels, 1.0)};
  }
};

// Cross-correlation (no kernel flip). input [B, Cin, L], weight
// [Cout, Cin, K], bias [Cout]; out_len = (L + 2*padding - K) / stride + 1.
Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              int stride, int padding);

// input [B, Cin, H, W], weight [Cout, Cin, KH, KW], bias [Cout].
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              int stride, int padding);

// input [B, C, ...spatial]; normalizes per channel over batch*spatial.
// Train mode uses batch statistics (biased variance) and updates `stats`
// in place with running = (1-momentum)*running + momentum*batch; eval mode
// normalizes with the stored running statistics.
Tensor batchnorm(const Tensor& input, const Tensor& gamma, const Tensor& beta,
                 RunningStats& stats, NormMode mode, double momentum,
                 double eps);

// Elementwise max(0, x); subgradient at 0 is 0.
Tensor relu(const Tensor& input);

// Windowed maximum without padding; ties route the gradient to the first
// (lowest-index) maximum.
Tensor maxpool1d(const Tensor& input, int window, int stride);
Tensor maxpool2d(const Tensor& input, int window_h, int window_w, int stride_h,
                 int stride_w);

// Mean over all spatial axes: [B, C, ...spatial] -> [B, C].
Tensor global_avg_pool(const Tensor& input);

// input [B, in] * weight[out, in]^T + bias[out] -> [B, out].
Tensor linear(const Tensor& input, const Tensor& weight, const Tensor& bias);

// Channel-axis concatenation of [B, n] and [B, m] -> [B, n+m].
Tensor concat(const Tensor& a, const Tensor& b);

// One-hot class targets for the sigmoid cross-entropy loss.
struct OneHotTarget {
  int64_t batch = 0;
  int64_t num_classes = 0;
  std::vector<double> values;  // batch * num_classes of {0,1}

  static OneHotTarget from_labels(const std::vector<int>& labels,
                                  int num_classes);
  void validate() const;
};

// Per-class sigmoid cross entropy on raw logits, summed over classes and
// averaged over the batch. Evaluated in the stable form
// max(x,0) - x*y + log1p(exp(-|x|)); d/dx = (sigmoid(x) - y) / batch.
Tensor bce_with_logits(const Tensor& logits, const OneHotTarget& target);

}  // namespace tsfew

#endif  // TSFEW_CORE_OPS_HPP
