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

#include "core/network.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tsfew {

BranchMode branch_mode_from_string(const std::string& s) {
  if (s == "fusion") return BranchMode::kFusion;
  if (s == "series_only") return BranchMode::kSeriesOnly;
  if (s == "image_only") return BranchMode::kImageOnly;
  raise(ErrorCode::kInvalidArgument, "unknown branch mode '" + s + "'");
}

std::string to_string(BranchMode m) {
  switch (m) {
    case BranchMode::kFusion: return "fusion";
    case BranchMode::kSeriesOnly: return "series_only";
    default: return "image_only";
  }
}

void SsnnConfig::validate() const {
  if (num_classes < 2) raise(ErrorCode::kInvalidArgument, "ssnn: num_classes must be >= 2");
  if (series_channels < 1 || image_channels < 1)
    raise(ErrorCode::kInvalidArgument, "ssnn: channel counts must be >= 1");
  if (stem_channels < 1) raise(ErrorCode::kInvalidArgument, "ssnn: stem_channels must be >= 1");
  if (blocks_per_branch < 1)
    raise(ErrorCode::kInvalidArgument, "ssnn: blocks_per_branch must be >= 1");
  if (downsample_block_index < 1 || downsample_block_index > blocks_per_branch)
    raise(ErrorCode::kInvalidArgument,
          "ssnn: downsample_block_index must lie in [1, blocks_per_branch]");
  if (branch_feature_dim != 2 * stem_channels)
    raise(ErrorCode::kInvalidArgument,
          "ssnn: branch_feature_dim must equal the channel count after the "
          "downsampling block (2*stem_channels = " +
              std::to_string(2 * stem_channels) + ")");
  if (stem_kernel_1d < 1 || stem_kernel_2d < 1 || block_kernel < 1)
    raise(ErrorCode::kInvalidArgument, "ssnn: kernel sizes must be >= 1");
  if (block_kernel % 2 == 0)
    raise(ErrorCode::kInvalidArgument, "ssnn: block_kernel must be odd");
  if (head_layers != 1 && head_layers != 2)
    raise(ErrorCode::kInvalidArgument, "ssnn: head_layers must be 1 or 2");
}

nlohmann::json SsnnConfig::to_json() const {
  return nlohmann::json{{"num_classes", num_classes},
                        {"series_channels", series_channels},
                        {"image_channels", image_channels},
                        {"stem_channels", stem_channels},
                        {"blocks_per_branch", blocks_per_branch},
                        {"downsample_block_index", downsample_block_index},
                        {"branch_feature_dim", branch_feature_dim},
                        {"stem_kernel_1d", stem_kernel_1d},
                        {"stem_kernel_2d", stem_kernel_2d},
                        {"block_kernel", block_kernel},
                        {"head_layers", head_layers}};
}

SsnnConfig SsnnConfig::from_json(const nlohmann::json& j) {
  SsnnConfig c;
  c.num_classes = j.value("num_classes", c.num_classes);
  c.series_channels = j.value("series_channels", c.series_channels);
  c.image_channels = j.value("image_channels", c.image_channels);
  c.stem_channels = j.value("stem_channels", c.stem_channels);
  c.blocks_per_branch = j.value("blocks_per_branch", c.blocks_per_branch);
  c.downsample_block_index = j.value("downsample_block_index", c.downsample_block_index);
  c.branch_feature_dim = j.value("branch_feature_dim", 2 * c.stem_channels);
  c.stem_kernel_1d = j.value("stem_kernel_1d", c.stem_kernel_1d);
  c.stem_kernel_2d = j.value("stem_kernel_2d", c.stem_kernel_2d);
  c.block_kernel = j.value("block_kernel", c.block_kernel);
  c.head_layers = j.value("head_layers", c.head_layers);
  c.validate();
  return c;
}

namespace {

template <typename Block>
Tensor block_forward(Block& blk, const Tensor& x, NormMode mode) {
  Tensor y = blk.bn1.forward(blk.conv1.forward(x), mode);
  y = relu(y);
  y = blk.bn2.forward(blk.conv2.forward(y), mode);
  Tensor shortcut = x;
  if (blk.has_projection)
    shortcut = blk.proj_bn.forward(blk.proj.forward(x), mode);
  return relu(add(y, shortcut));
}

}  // namespace

Tensor Branch1d::forward(const Tensor& series, NormMode mode) {
  Tensor x = stem.forward(series);
  x = relu(stem_bn.forward(x, mode));
  x = maxpool1d(x, 3, 2);
  for (auto& blk : blocks) x = block_forward(blk, x, mode);
  return global_avg_pool(x);
}

Tensor Branch2d::forward(const Tensor& images, NormMode mode) {
  Tensor x = stem.forward(images);
  x = relu(stem_bn.forward(x, mode));
  x = maxpool2d(x, 3, 3, 2, 2);
  for (auto& blk : blocks) x = block_forward(blk, x, mode);
  return global_avg_pool(x);
}

namespace {

Tensor head_forward(const std::vector<LinearLayer>& head, Tensor features) {
  for (size_t i = 0; i < head.size(); ++i) {
    features = head[i].forward(features);
    if (i + 1 < head.size()) features = relu(features);
  }
  return features;
}

// The stem (stride-2 conv, then 3-wide stride-2 maxpool) needs at least 5
// samples per spatial axis; the padded convolutions impose nothing further.
constexpr int64_t kMinStemExtent = 5;

void check_series_input(const SsnnConfig& cfg, const Tensor& series) {
  if (series.ndim() != 3 || series.dim(1) != cfg.series_channels)
    raise(ErrorCode::kInvalidArgument,
          "ssnn: series input must be [batch, " +
              std::to_string(cfg.series_channels) + ", length]");
  if (series.dim(2) < kMinStemExtent)
    raise(ErrorCode::kInvalidArgument,
          "ssnn: series length " + std::to_string(series.dim(2)) +
              " below the stem receptive field (need >= " +
              std::to_string(kMinStemExtent) + ")");
}

void check_image_input(const SsnnConfig& cfg, const Tensor& images) {
  if (images.ndim() != 4 || images.dim(1) != cfg.image_channels)
    raise(ErrorCode::kInvalidArgument,
          "ssnn: image input must be [batch, " +
              std::to_string(cfg.image_channels) + ", height, width]");
  if (images.dim(2) < kMinStemExtent || images.dim(3) < kMinStemExtent)
    raise(ErrorCode::kInvalidArgument,
          "ssnn: image " + std::to_string(images.dim(2)) + "x" +
              std::to_string(images.dim(3)) +
              " below the stem receptive field (need >= " +
              std::to_string(kMinStemExtent) + " per side)");
}

}  // namespace

Tensor SsnnModel::forward(const Tensor& series, const Tensor& images,
                          NormMode mode) {
  check_series_input(cfg, series);
  check_image_input(cfg, images);
  if (series.dim(0) != images.dim(0))
    raise(ErrorCode::kInvalidArgument, "ssnn: series/image batch sizes differ");
  Tensor f1 = branch1d.forward(series, mode);
  Tensor f2 = branch2d.forward(images, mode);
  return head_forward(head, concat(f1, f2));
}

Tensor SsnnModel::forward_single_branch(BranchMode mode, const Tensor& input,
                                        NormMode norm_mode) {
  if (mode == BranchMode::kSeriesOnly) {
    check_series_input(cfg, input);
    return head_series.forward(branch1d.forward(input, norm_mode));
  }
  if (mode == BranchMode::kImageOnly) {
    check_image_input(cfg, input);
    return head_image.forward(branch2d.forward(input, norm_mode));
  }
  raise(ErrorCode::kInvalidArgument,
        "forward_single_branch: mode must be series_only or image_only");
}

Tensor SsnnModel::forward_mode(BranchMode mode, const Tensor& series,
                               const Tensor& images, NormMode norm_mode) {
  switch (mode) {
    case BranchMode::kFusion: return forward(series, images, norm_mode);
    case BranchMode::kSeriesOnly: return forward_single_branch(mode, series, norm_mode);
    default: return forward_single_branch(mode, images, norm_mode);
  }
}

namespace {

template <typename Block>
void collect_block(std::vector<SsnnModel::ParamRef>& out, const std::string& prefix,
                   Block& blk) {
  out.push_back({prefix + "/conv1/weight", blk.conv1.weight});
  out.push_back({prefix + "/conv1/bias", blk.conv1.bias});
  out.push_back({prefix + "/bn1/gamma", blk.bn1.gamma});
  out.push_back({prefix + "/bn1/beta", blk.bn1.beta});
  out.push_back({prefix + "/conv2/weight", blk.conv2.weight});
  out.push_back({prefix + "/conv2/bias", blk.conv2.bias});
  out.push_back({prefix + "/bn2/gamma", blk.bn2.gamma});
  out.push_back({prefix + "/bn2/beta", blk.bn2.beta});
  if (blk.has_projection) {
    out.push_back({prefix + "/proj/weight", blk.proj.weight});
    out.push_back({prefix + "/proj/bias", blk.proj.bias});
    out.push_back({prefix + "/proj_bn/gamma", blk.proj_bn.gamma});
    out.push_back({prefix + "/proj_bn/beta", blk.proj_bn.beta});
  }
}

template <typename Block>
void collect_block_state(std::vector<SsnnModel::StateRef>& out,
                         const std::string& prefix, Block& blk) {
  out.push_back({prefix + "/bn1/running_mean", &blk.bn1.stats.mean});
  out.push_back({prefix + "/bn1/running_var", &blk.bn1.stats.var});
  out.push_back({prefix + "/bn2/running_mean", &blk.bn2.stats.mean});
  out.push_back({prefix + "/bn2/running_var", &blk.bn2.stats.var});
  if (blk.has_projection) {
    out.push_back({prefix + "/proj_bn/running_mean", &blk.proj_bn.stats.mean});
    out.push_back({prefix + "/proj_bn/running_var", &blk.proj_bn.stats.var});
  }
}

}  // namespace

std::vector<SsnnModel::ParamRef> SsnnModel::parameters() {
  std::vector<ParamRef> out;
  out.push_back({"branch1d/stem/weight", branch1d.stem.weight});
  out.push_back({"branch1d/stem/bias", branch1d.stem.bias});
  out.push_back({"branch1d/stem_bn/gamma", branch1d.stem_bn.gamma});
  out.push_back({"branch1d/stem_bn/beta", branch1d.stem_bn.beta});
  for (size_t i = 0; i < branch1d.blocks.size(); ++i)
    collect_block(out, "branch1d/block" + std::to_string(i + 1), branch1d.blocks[i]);
  out.push_back({"branch2d/stem/weight", branch2d.stem.weight});
  out.push_back({"branch2d/stem/bias", branch2d.stem.bias});
  out.push_back({"branch2d/stem_bn/gamma", branch2d.stem_bn.gamma});
  out.push_back({"branch2d/stem_bn/beta", branch2d.stem_bn.beta});
  for (size_t i = 0; i < branch2d.blocks.size(); ++i)
    collect_block(out, "branch2d/block" + std::to_string(i + 1), branch2d.blocks[i]);
  for (size_t i = 0; i < head.size(); ++i) {
    out.push_back({"head/linear" + std::to_string(i + 1) + "/weight", head[i].weight});
    out.push_back({"head/linear" + std::to_string(i + 1) + "/bias", head[i].bias});
  }
  out.push_back({"head_series/weight", head_series.weight});
  out.push_back({"head_series/bias", head_series.bias});
  out.push_back({"head_image/weight", head_image.weight});
  out.push_back({"head_image/bias", head_image.bias});
  return out;
}

std::vector<SsnnModel::StateRef> SsnnModel::running_state() {
  std::vector<StateRef> out;
  out.push_back({"branch1d/stem_bn/running_mean", &branch1d.stem_bn.stats.mean});
  out.push_back({"branch1d/stem_bn/running_var", &branch1d.stem_bn.stats.var});
  for (size_t i = 0; i < branch1d.blocks.size(); ++i)
    collect_block_state(out, "branch1d/block" + std::to_string(i + 1),
                        branch1d.blocks[i]);
  out.push_back({"branch2d/stem_bn/running_mean", &branch2d.stem_bn.stats.mean});
  out.push_back({"branch2d/stem_bn/running_var", &branch2d.stem_bn.stats.var});
  for (size_t i = 0; i < branch2d.blocks.size(); ++i)
    collect_block_state(out, "branch2d/block" + std::to_string(i + 1),
                        branch2d.blocks[i]);
  return out;
}

namespace {

BatchNormLayer make_bn(int channels) {
  BatchNormLayer bn;
  bn.gamma = Tensor::full({channels}, 1.0, true);
  bn.beta = Tensor::zeros({channels}, true);
  bn.stats = RunningStats::identity(channels);
  return bn;
}

Conv1dLayer make_conv1d(int in_ch, int out_ch, int k, int stride, int padding) {
  Conv1dLayer c;
  c.weight = Tensor::zeros({out_ch, in_ch, k}, true);
  c.bias = Tensor::zeros({out_ch}, true);
  c.stride = stride;
  c.padding = padding;
  return c;
}

Conv2dLayer make_conv2d(int in_ch, int out_ch, int k, int stride, int padding) {
  Conv2dLayer c;
  c.weight = Tensor::zeros({out_ch, in_ch, k, k}, true);
  c.bias = Tensor::zeros({out_ch}, true);
  c.stride = stride;
  c.padding = padding;
  return c;
}

LinearLayer make_linear(int in_f, int out_f) {
  LinearLayer l;
  l.weight = Tensor::zeros({out_f, in_f}, true);
  l.bias = Tensor::zeros({out_f}, true);
  return l;
}

template <typename MakeConv>
auto make_block(MakeConv&& mk, int in_ch, int out_ch, int k, int stride) {
  ResBlock<std::decay_t<decltype(mk(0, 0, 0, 0, 0))>> blk;
  const int pad = k / 2;
  blk.stride = stride;
  blk.conv1 = mk(in_ch, out_ch, k, stride, pad);
  blk.bn1 = make_bn(out_ch);
  blk.conv2 = mk(out_ch, out_ch, k, 1, pad);
  blk.bn2 = make_bn(out_ch);
  if (stride != 1) {
    blk.has_projection = true;
    blk.proj = mk(in_ch, out_ch, 1, stride, 0);
    blk.proj_bn = make_bn(out_ch);
  }
  return blk;
}

// Kaiming-uniform over fan-in; the draw order is the parameter enumeration
// order, which makes initialization reproducible byte for byte.
void init_parameters(SsnnModel& model, uint64_t seed) {
  SplitMix64 rng(seed);
  for (auto& p : model.parameters()) {
    const auto& shape = p.tensor.shape();
    const bool is_weight = p.path.ends_with("/weight");
    if (!is_weight) continue;  // biases, gamma, beta keep their constants
    int64_t fan_in = 1;
    for (size_t i = 1; i < shape.size(); ++i) fan_in *= shape[i];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& v : p.tensor.values()) v = rng.uniform_real(-bound, bound);
  }
}

}  // namespace

SsnnModel build_ssnn(const SsnnConfig& cfg, uint64_t seed) {
  cfg.validate();
  SsnnModel m;
  m.cfg = cfg;

  m.branch1d.stem = make_conv1d(cfg.series_channels, cfg.stem_channels,
                                cfg.stem_kernel_1d, 2, cfg.stem_kernel_1d / 2);
  m.branch1d.stem_bn = make_bn(cfg.stem_channels);
  m.branch2d.stem = make_conv2d(cfg.image_channels, cfg.stem_channels,
                                cfg.stem_kernel_2d, 2, cfg.stem_kernel_2d / 2);
  m.branch2d.stem_bn = make_bn(cfg.stem_channels);

  int ch = cfg.stem_channels;
  for (int i = 1; i <= cfg.blocks_per_branch; ++i) {
    const bool down = i == cfg.downsample_block_index;
    const int out_ch = down ? ch * 2 : ch;
    const int stride = down ? 2 : 1;
    m.branch1d.blocks.push_back(
        make_block([](int ic, int oc, int k, int s, int p) { return make_conv1d(ic, oc, k, s, p); },
                   ch, out_ch, cfg.block_kernel, stride));
    m.branch2d.blocks.push_back(
        make_block([](int ic, int oc, int k, int s, int p) { return make_conv2d(ic, oc, k, s, p); },
                   ch, out_ch, cfg.block_kernel, stride));
    ch = out_ch;
  }

  const int fused = 2 * cfg.branch_feature_dim;
  if (cfg.head_layers == 1) {
    m.head.push_back(make_linear(fused, cfg.num_classes));
  } else {
    m.head.push_back(make_linear(fused, cfg.branch_feature_dim));
    m.head.push_back(make_linear(cfg.branch_feature_dim, cfg.num_classes));
  }
  m.head_series = make_linear(cfg.branch_feature_dim, cfg.num_classes);
  m.head_image = make_linear(cfg.branch_feature_dim, cfg.num_classes);

  init_parameters(m, seed);
  return m;
}

std::vector<int> predict(const Tensor& logits) {
  if (logits.ndim() != 2 || logits.dim(1) < 2)
    raise(ErrorCode::kInvalidArgument,
          "predict: logits must be [batch, num_classes>=2]");
  const int64_t B = logits.dim(0), C = logits.dim(1);
  std::vector<int> out(static_cast<size_t>(B));
  for (int64_t b = 0; b < B; ++b) {
    const double* row = logits.values().data() + b * C;
    int best = 0;
    for (int c = 1; c < C; ++c)
      if (row[c] > row[best]) best = c;
    out[b] = best;
  }
  return out;
}

}  // namespace tsfew
