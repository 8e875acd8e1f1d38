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

#ifndef TSFEW_CORE_TRAIN_HPP
#define TSFEW_CORE_TRAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/network.hpp"

#include "json.hpp"

namespace tsfew {

enum class OptimizerKind { kAdam, kSgdMomentum };

struct TrainConfig {
  int epochs = 100;
  int batch_size = 16;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double momentum = 0.9;  // sgd_momentum only
  double beta1 = 0.9;     // adam only
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  uint64_t seed = 0;
  bool shuffle = true;
  BranchMode mode = BranchMode::kFusion;

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct EpochStats {
  double mean_loss = 0.0;
  double train_accuracy = 0.0;  // over predictions made during the epoch
};

struct TrainResult {
  std::vector<EpochStats> history;
  nlohmann::json history_json() const;
};

// Batch tensor assembly: series values enter raw, image pixels are scaled
// to [0, 1]. All samples must agree in channel count and extent.
struct BatchTensors {
  Tensor series;  // [B, C, L]
  Tensor images;  // [B, C, H, W]
  std::vector<int> labels;
};
BatchTensors make_batch(const std::vector<FusedSample>& samples,
                        const std::vector<size_t>& indices, size_t begin,
                        size_t end);

// Shuffled minibatch training against the per-class sigmoid cross-entropy
// objective. Deterministic per cfg.seed: the epoch shuffles consume one
// splitmix64 stream seeded with derive_seed(seed, 2).
TrainResult train(SsnnModel& model, const std::vector<FusedSample>& trainset,
                  const TrainConfig& cfg);

// Eval-mode predictions for a sample list, batched.
std::vector<int> predict_samples(SsnnModel& model,
                                 const std::vector<FusedSample>& samples,
                                 BranchMode mode, int batch_size = 32);

// Checkpoint document: {format_version, ssnn_config, parameters}. Values
// are decimal doubles serialized to round-trip exactly; batchnorm running
// statistics are stored as non-trainable entries. The write is atomic
// (temp file + rename).
void save_checkpoint(SsnnModel& model, const std::string& path);
SsnnModel load_checkpoint(const std::string& path);

}  // namespace tsfew

#endif  // TSFEW_CORE_TRAIN_HPP
