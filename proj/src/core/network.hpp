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

#ifndef TSFEW_CORE_NETWORK_HPP
#define TSFEW_CORE_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/ops.hpp"
#include "core/tensor.hpp"

#include "json.hpp"

namespace tsfew {

// Which input modality feeds the classifier. The fusion path concatenates
// both branch features; the single-branch paths exist as ablation modes
// with their own heads.
enum class BranchMode { kFusion, kSeriesOnly, kImageOnly };

BranchMode branch_mode_from_string(const std::string& s);
std::string to_string(BranchMode m);

struct SsnnConfig {
  int num_classes = 2;
  int series_channels = 1;
  int image_channels = 1;
  int stem_channels = 64;
  int blocks_per_branch = 4;
  int downsample_block_index = 3;  // 1-based; that block doubles channels
  int branch_feature_dim = 128;    // channel count after the downsampling block
  int stem_kernel_1d = 7;
  int stem_kernel_2d = 7;
  int block_kernel = 3;
  int head_layers = 1;  // 1 or 2 linear layers in the fusion head

  void validate() const;
  nlohmann::json to_json() const;
  static SsnnConfig from_json(const nlohmann::json& j);
  bool operator==(const SsnnConfig&) const = default;
};

struct Conv1dLayer {
  Tensor weight, bias;
  int stride = 1, padding = 0;
  Tensor forward(const Tensor& x) const { return conv1d(x, weight, bias, stride, padding); }
};

struct Conv2dLayer {
  Tensor weight, bias;
  int stride = 1, padding = 0;
  Tensor forward(const Tensor& x) const { return conv2d(x, weight, bias, stride, padding); }
};

struct BatchNormLayer {
  Tensor gamma, beta;
  RunningStats stats;
  double momentum = 0.1;
  double eps = 1e-5;
  Tensor forward(const Tensor& x, NormMode mode) {
    return batchnorm(x, gamma, beta, stats, mode, momentum, eps);
  }
};

struct LinearLayer {
  Tensor weight, bias;
  Tensor forward(const Tensor& x) const { return linear(x, weight, bias); }
};

// Two stacked convolutions with a shortcut. Stride-1 blocks use an identity
// shortcut and keep their channel count; the downsampling block strides by 2,
// doubles channels and projects the shortcut with a stride-2 1x1 convolution.
template <typename ConvLayer>
struct ResBlock {
  ConvLayer conv1, conv2;
  BatchNormLayer bn1, bn2;
  bool has_projection = false;
  ConvLayer proj;
  BatchNormLayer proj_bn;
  int stride = 1;
};

using ResBlock1d = ResBlock<Conv1dLayer>;
using ResBlock2d = ResBlock<Conv2dLayer>;

struct Branch1d {
  Conv1dLayer stem;
  BatchNormLayer stem_bn;
  std::vector<ResBlock1d> blocks;
  Tensor forward(const Tensor& series, NormMode mode);  // -> [B, feature_dim]
};

struct Branch2d {
  Conv2dLayer stem;
  BatchNormLayer stem_bn;
  std::vector<ResBlock2d> blocks;
  Tensor forward(const Tensor& images, NormMode mode);  // -> [B, feature_dim]
};

struct SsnnModel {
  SsnnConfig cfg;
  Branch1d branch1d;
  Branch2d branch2d;
  std::vector<LinearLayer> head;  // fusion head over 2*branch_feature_dim
  LinearLayer head_series;        // ablation head over branch_feature_dim
  LinearLayer head_image;

  // series [B, series_channels, L], images [B, image_channels, H, W]
  // -> logits [B, num_classes].
  Tensor forward(const Tensor& series, const Tensor& images, NormMode mode);
  Tensor forward_single_branch(BranchMode mode, const Tensor& input,
                               NormMode norm_mode);
  Tensor forward_mode(BranchMode mode, const Tensor& series, const Tensor& images,
                      NormMode norm_mode);

  struct ParamRef {
    std::string path;
    Tensor tensor;
  };
  struct StateRef {
    std::string path;
    std::vector<double>* data;
  };
  // Trainable parameters / batchnorm running statistics, in the fixed
  // enumeration order used for initialization and checkpoints.
  std::vector<ParamRef> parameters();
  std::vector<StateRef> running_state();
};

// Deterministic construction: weights are Kaiming-uniform over fan-in
// (bound sqrt(6/fan_in)) drawn from a splitmix64 stream in parameter
// enumeration order; biases 0, gamma 1, beta 0, running stats identity.
SsnnModel build_ssnn(const SsnnConfig& cfg, uint64_t seed);

// Per-row argmax over logits; ties break to the lowest class index.
std::vector<int> predict(const Tensor& logits);

}  // namespace tsfew

#endif  // TSFEW_CORE_NETWORK_HPP
