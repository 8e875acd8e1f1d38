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

#ifndef TSFEW_CORE_DATASET_HPP
#define TSFEW_CORE_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/augment.hpp"
#include "core/image.hpp"
#include "core/series.hpp"
#include "core/signal.hpp"

#include "json.hpp"

namespace tsfew {

// One training instance: a raw series paired with one spectrogram image
// per channel (original or an erased variant) and its label.
struct FusedSample {
  TimeSeries series;
  std::vector<GrayImage> images;  // one per series channel
  int label = 0;
  std::string source_id;  // "<class>/<sample>" of the originating series
  int variant_index = 0;  // 0 = original spectrogram, 1.. = erased variants
};

struct DatasetSpec {
  enum class SplitMode { kRandom, kSequential };

  SplitMode split_mode = SplitMode::kRandom;
  double train_fraction = 0.8;
  // Single dataset seed: the split shuffle and all per-image erase seeds
  // derive from it.
  uint64_t seed = 0;
  StftConfig stft;
  AugmentPlan augment;

  void validate() const;
  nlohmann::json to_json() const;
  static DatasetSpec from_json(const nlohmann::json& j);
};

struct BuiltDataset {
  std::vector<std::string> class_names;  // sorted; index = label
  std::vector<FusedSample> train;
  std::vector<FusedSample> test;
};

// Loads <raw_dir>/<class>/<id>.csv, splits, converts every series to
// spectrogram images, then augments the train split only. Each train series
// repeats once per image variant; test samples keep un-erased images.
BuiltDataset build_dataset(const std::string& raw_dir, const DatasetSpec& spec);

struct SyntheticSpec {
  enum class Kind { kUnivariateBinary, kMultivariate4Class };

  Kind kind = Kind::kUnivariateBinary;
  int samples_per_class = 150;
  int64_t length = 2048;
  double noise_sigma = 0.3;
  uint64_t seed = 0;
  double sample_rate = 1000.0;

  void validate() const;
  nlohmann::json to_json() const;
  static SyntheticSpec from_json(const nlohmann::json& j);
};

// Writes a raw dataset directory of labeled CSV series. Classes are built
// from distinct generative recipes (tone bands, amplitude modulation,
// transient bursts) so the task is learnable; fully deterministic per seed.
void synthesize(const SyntheticSpec& spec, const std::string& out_dir);

// Processed-dataset persistence: manifest.json + series CSVs + image PGMs.
void save_dataset(const BuiltDataset& ds, const std::string& dir);
BuiltDataset load_dataset(const std::string& dir);

// Content hash of every sample (series bytes, image bytes, label), order
// independent of directory iteration.
std::string dataset_fingerprint(const BuiltDataset& ds);
// Hash of a directory tree: sha256 over sorted (relative path, file hash).
std::string hash_directory(const std::string& dir);

std::string series_content_hash(const TimeSeries& ts);

// JSON forms shared by dataset specs, CLI configs and run manifests. The
// stft config also accepts "overlap_fraction" (fraction of window_length,
// rounded to the nearest sample) in place of "overlap".
nlohmann::json stft_config_to_json(const StftConfig& c);
StftConfig stft_config_from_json(const nlohmann::json& j);
nlohmann::json augment_plan_to_json(const AugmentPlan& p);
AugmentPlan augment_plan_from_json(const nlohmann::json& j);

}  // namespace tsfew

#endif  // TSFEW_CORE_DATASET_HPP
