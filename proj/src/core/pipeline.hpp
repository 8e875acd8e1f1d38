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

#ifndef TSFEW_CORE_PIPELINE_HPP
#define TSFEW_CORE_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "core/dataset.hpp"
#include "core/metrics.hpp"
#include "core/network.hpp"
#include "core/train.hpp"

namespace tsfew {

// Directory-level commands. Every artifact-producing command refuses to
// overwrite an existing non-empty output unless `force`, and writes exactly
// one run manifest beside its outputs (run_manifest.json in the output
// directory, or "<file>.run_manifest.json" for single-file outputs).

// Writes a raw dataset of labeled CSV series from a synthetic spec.
void run_synth(const std::string& spec_json, const std::string& out_dir,
               std::optional<uint64_t> seed_override, bool force);

// Converts every <class>/<id>.csv under in_dir into spectrogram PGMs,
// mirroring the directory layout; channel c of a multichannel series is
// written as <id>_c<c>.pgm.
void run_stft(const std::string& in_dir, const std::string& out_dir,
              const std::string& stft_json, bool force);

// Reads a directory tree of PGMs and writes originals plus erased variants
// named <stem>_ra<ratio>_s<seed>.pgm.
void run_augment(const std::string& in_dir, const std::string& out_dir,
                 const std::string& plan_json, uint64_t master_seed, bool force);

// Builds the fused dataset from raw series, trains, and writes
// checkpoint.json plus the run manifest (config, dataset fingerprint,
// per-epoch history).
void run_train(const std::string& config_json, const std::string& data_dir,
               const std::string& out_dir, std::optional<uint64_t> seed_override,
               bool force);

// Rebuilds the dataset recorded in the model's run manifest and evaluates
// the test split: eval.json + confusion.csv.
void run_eval(const std::string& model_dir, const std::string& data_dir,
              const std::string& out_dir, bool force);

// Classifies a CSV series (or a directory of them) with a trained model;
// writes a predictions JSON document.
void run_predict(const std::string& model_dir, const std::string& input_path,
                 const std::string& out_path, bool force);

// Renders an eval.json document to an SVG summary.
void run_report(const std::string& eval_json_path, const std::string& out_svg,
                bool force);

// A trained model plus the preprocessing recorded at training time.
struct ModelBundle {
  SsnnModel model;
  BranchMode mode = BranchMode::kFusion;
  int positive_class = 0;
  std::vector<std::string> class_names;
  DatasetSpec dataset_spec;
};

ModelBundle load_model_bundle(const std::string& model_dir);

struct Prediction {
  int class_index = 0;
  std::vector<double> logits;
};

// Eval-mode forward of one series through the bundle's preprocessing.
Prediction predict_series(ModelBundle& bundle, const TimeSeries& ts);

}  // namespace tsfew

#endif  // TSFEW_CORE_PIPELINE_HPP
