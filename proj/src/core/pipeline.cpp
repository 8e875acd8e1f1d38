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

#include "core/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <algorithm>

#include "core/errors.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"
#include "core/sha256.hpp"
#include "core/version.hpp"

namespace fs = std::filesystem;

namespace tsfew {

namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, "malformed " + what + ": " + e.what());
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_json_text(text, path);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) raise(ErrorCode::kIo, "short write to " + path.string());
}

void prepare_output_dir(const std::string& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      raise(ErrorCode::kExists, "output path exists and is not a directory: " + dir);
    if (!fs::is_empty(dir) && !force)
      raise(ErrorCode::kExists,
            "output directory is not empty (use --force to overwrite): " + dir);
  }
  fs::create_directories(dir);
}

void prepare_output_file(const std::string& path, bool force) {
  if (fs::exists(path) && !force)
    raise(ErrorCode::kExists,
          "output file exists (use --force to overwrite): " + path);
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
}

struct ManifestBuilder {
  explicit ManifestBuilder(std::string command) {
    doc["format_version"] = 1;
    doc["command"] = std::move(command);
    doc["toolkit_version"] = kVersion;
    doc["inputs"] = nlohmann::json::array();
    doc["outputs"] = nlohmann::json::array();
  }
  void add_input(const std::string& path, const std::string& fingerprint) {
    doc["inputs"].push_back({{"path", path}, {"sha256", fingerprint}});
  }
  void add_output(const std::string& name) { doc["outputs"].push_back(name); }
  void write(const fs::path& path) {
    doc["duration_seconds"] =
        std::chrono::duration<double>(Clock::now() - start).count();
    write_text_file(path, doc.dump(2) + "\n");
  }
  nlohmann::json doc;
  Clock::time_point start = Clock::now();
};

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path);
  Sha256 h;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    h.update(buf, static_cast<size_t>(in.gcount()));
  }
  return h.hex_digest();
}

std::vector<fs::path> collect_files(const std::string& dir,
                                    const std::string& extension) {
  if (!fs::is_directory(dir))
    raise(ErrorCode::kIo, "input directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == extension)
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    raise(ErrorCode::kFormat, "no " + extension + " files under " + dir);
  return files;
}

std::string format_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", r);
  return buf;
}

}  // namespace

void run_synth(const std::string& spec_json, const std::string& out_dir,
               std::optional<uint64_t> seed_override, bool force) {
  SyntheticSpec spec =
      SyntheticSpec::from_json(parse_json_text(spec_json, "synthetic spec"));
  if (seed_override) spec.seed = *seed_override;
  ManifestBuilder manifest("synth");
  prepare_output_dir(out_dir, force);
  synthesize(spec, out_dir);
  manifest.doc["config"] = spec.to_json();
  manifest.doc["seed"] = spec.seed;
  manifest.add_output("<class>/<sample>.csv");
  manifest.write(fs::path(out_dir) / "run_manifest.json");
}

void run_stft(const std::string& in_dir, const std::string& out_dir,
              const std::string& stft_json, bool force) {
  const StftConfig cfg =
      stft_config_from_json(parse_json_text(stft_json, "stft config"));
  ManifestBuilder manifest("stft");
  const auto files = collect_files(in_dir, ".csv");
  prepare_output_dir(out_dir, force);
  for (const auto& f : files) {
    const TimeSeries ts = read_series_csv(f.string());
    const fs::path rel = fs::relative(f, in_dir);
    const fs::path out_base = fs::path(out_dir) / rel.parent_path();
    fs::create_directories(out_base);
    for (int c = 0; c < ts.channels; ++c) {
      const GrayImage img = quantize_to_gray(stft_channel(ts, c, cfg));
      std::string name = rel.stem().string();
      if (ts.channels > 1) name += "_c" + std::to_string(c);
      write_pgm((out_base / (name + ".pgm")).string(), img);
    }
  }
  manifest.doc["config"] = stft_config_to_json(cfg);
  manifest.add_input(in_dir, hash_directory(in_dir));
  manifest.add_output("<class>/<sample>[_c<ch>].pgm");
  manifest.write(fs::path(out_dir) / "run_manifest.json");
}

void run_augment(const std::string& in_dir, const std::string& out_dir,
                 const std::string& plan_json, uint64_t master_seed, bool force) {
  const AugmentPlan plan =
      augment_plan_from_json(parse_json_text(plan_json, "augment plan"));
  ManifestBuilder manifest("augment");
  const auto files = collect_files(in_dir, ".pgm");
  prepare_output_dir(out_dir, force);
  for (size_t i = 0; i < files.size(); ++i) {
    const GrayImage img = read_pgm(files[i].string());
    const fs::path rel = fs::relative(files[i], in_dir);
    const fs::path out_base = fs::path(out_dir) / rel.parent_path();
    fs::create_directories(out_base);
    const std::string stem = rel.stem().string();
    if (plan.keep_original)
      write_pgm((out_base / (stem + ".pgm")).string(), img);
    for (size_t j = 0; j < plan.ratios.size(); ++j) {
      EraseConfig cfg;
      cfg.area_ratio = plan.ratios[j];
      cfg.rng_seed = derive_seed(master_seed, i, j);
      cfg.max_retries = plan.max_retries;
      const GrayImage erased = random_erase(img, cfg);
      const std::string name = stem + "_ra" + format_ratio(plan.ratios[j]) +
                               "_s" + std::to_string(cfg.rng_seed) + ".pgm";
      write_pgm((out_base / name).string(), erased);
    }
  }
  manifest.doc["config"] = augment_plan_to_json(plan);
  manifest.doc["seed"] = master_seed;
  manifest.add_input(in_dir, hash_directory(in_dir));
  manifest.add_output("<stem>[_ra<ratio>_s<seed>].pgm");
  manifest.write(fs::path(out_dir) / "run_manifest.json");
}

void run_train(const std::string& config_json, const std::string& data_dir,
               const std::string& out_dir, std::optional<uint64_t> seed_override,
               bool force) {
  const nlohmann::json config = parse_json_text(config_json, "train config");
  DatasetSpec dspec = config.contains("dataset")
                          ? DatasetSpec::from_json(config.at("dataset"))
                          : DatasetSpec{};
  TrainConfig tcfg = config.contains("train")
                         ? TrainConfig::from_json(config.at("train"))
                         : TrainConfig{};
  if (seed_override) tcfg.seed = *seed_override;
  const int positive_class = config.value("positive_class", 0);

  ManifestBuilder manifest("train");
  prepare_output_dir(out_dir, force);  // fail fast, before the training run
  BuiltDataset ds = build_dataset(data_dir, dspec);
  const FusedSample& first = ds.train.front();

  nlohmann::json model_json =
      config.contains("model") ? config.at("model") : nlohmann::json::object();
  model_json["num_classes"] = static_cast<int>(ds.class_names.size());
  model_json["series_channels"] = first.series.channels;
  model_json["image_channels"] = first.series.channels;
  if (!model_json.contains("branch_feature_dim") && model_json.contains("stem_channels"))
    model_json["branch_feature_dim"] = 2 * model_json.at("stem_channels").get<int>();
  const SsnnConfig mcfg = SsnnConfig::from_json(model_json);
  if (positive_class < 0 || positive_class >= mcfg.num_classes)
    raise(ErrorCode::kInvalidArgument, "train: positive_class out of range");

  SsnnModel model = build_ssnn(mcfg, tcfg.seed);
  TrainResult result = train(model, ds.train, tcfg);

  save_checkpoint(model, (fs::path(out_dir) / "checkpoint.json").string());

  manifest.doc["config"] = nlohmann::json{{"model", mcfg.to_json()},
                                          {"dataset", dspec.to_json()},
                                          {"train", tcfg.to_json()},
                                          {"positive_class", positive_class}};
  manifest.doc["seed"] = tcfg.seed;
  manifest.doc["class_names"] = ds.class_names;
  manifest.doc["dataset_fingerprint"] = dataset_fingerprint(ds);
  manifest.doc["train_samples"] = ds.train.size();
  manifest.doc["test_samples"] = ds.test.size();
  manifest.doc["history"] = result.history_json();
  manifest.add_input(data_dir, hash_directory(data_dir));
  manifest.add_output("checkpoint.json");
  manifest.write(fs::path(out_dir) / "run_manifest.json");
}

ModelBundle load_model_bundle(const std::string& model_dir) {
  const fs::path mdir(model_dir);
  if (!fs::is_directory(mdir))
    raise(ErrorCode::kIo, "model directory not found: " + model_dir);
  const nlohmann::json manifest = read_json_file((mdir / "run_manifest.json").string());
  ModelBundle bundle;
  bundle.model = load_checkpoint((mdir / "checkpoint.json").string());
  try {
    const auto& config = manifest.at("config");
    bundle.dataset_spec = DatasetSpec::from_json(config.at("dataset"));
    bundle.mode = branch_mode_from_string(
        config.at("train").value("mode", "fusion"));
    bundle.positive_class = config.value("positive_class", 0);
    bundle.class_names = manifest.at("class_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat,
          std::string("malformed train run manifest: ") + e.what());
  }
  if (static_cast<int>(bundle.class_names.size()) != bundle.model.cfg.num_classes)
    raise(ErrorCode::kFormat,
          "model manifest class names disagree with checkpoint num_classes");
  return bundle;
}

Prediction predict_series(ModelBundle& bundle, const TimeSeries& ts) {
  if (ts.channels != bundle.model.cfg.series_channels)
    raise(ErrorCode::kInvalidArgument,
          "predict: series has " + std::to_string(ts.channels) +
              " channels, model expects " +
              std::to_string(bundle.model.cfg.series_channels));
  FusedSample sample;
  sample.series = ts;
  for (int c = 0; c < ts.channels; ++c)
    sample.images.push_back(
        quantize_to_gray(stft_channel(ts, c, bundle.dataset_spec.stft)));
  sample.label = 0;
  std::vector<FusedSample> list{std::move(sample)};
  std::vector<size_t> order{0};
  BatchTensors batch = make_batch(list, order, 0, 1);
  Tensor logits = bundle.model.forward_mode(bundle.mode, batch.series,
                                            batch.images, NormMode::kEval);
  Prediction p;
  p.class_index = predict(logits)[0];
  p.logits = logits.values();
  return p;
}

void run_eval(const std::string& model_dir, const std::string& data_dir,
              const std::string& out_dir, bool force) {
  ManifestBuilder manifest("eval");
  ModelBundle bundle = load_model_bundle(model_dir);
  BuiltDataset ds = build_dataset(data_dir, bundle.dataset_spec);
  if (ds.class_names != bundle.class_names)
    raise(ErrorCode::kInvalidArgument,
          "eval: class names in " + data_dir +
              " do not match the classes the model was trained on");

  std::vector<int> truth;
  truth.reserve(ds.test.size());
  for (const auto& s : ds.test) truth.push_back(s.label);
  const std::vector<int> predicted =
      predict_samples(bundle.model, ds.test, bundle.mode);
  const EvalReport report =
      evaluate_labels(truth, predicted, bundle.model.cfg.num_classes,
                      bundle.positive_class, ds.class_names);

  prepare_output_dir(out_dir, force);
  write_text_file(fs::path(out_dir) / "eval.json", report.to_json().dump(2) + "\n");
  write_text_file(fs::path(out_dir) / "confusion.csv",
                  report.confusion.to_csv(report.class_names));
  manifest.doc["test_samples"] = ds.test.size();
  manifest.doc["dataset_fingerprint"] = dataset_fingerprint(ds);
  manifest.add_input(model_dir + "/checkpoint.json",
                     file_sha256((fs::path(model_dir) / "checkpoint.json").string()));
  manifest.add_input(data_dir, hash_directory(data_dir));
  manifest.add_output("eval.json");
  manifest.add_output("confusion.csv");
  manifest.write(fs::path(out_dir) / "run_manifest.json");
}

void run_predict(const std::string& model_dir, const std::string& input_path,
                 const std::string& out_path, bool force) {
  ManifestBuilder manifest("predict");
  ModelBundle bundle = load_model_bundle(model_dir);
  std::vector<fs::path> files;
  if (fs::is_directory(input_path)) {
    files = collect_files(input_path, ".csv");
  } else if (fs::is_regular_file(input_path)) {
    files.push_back(input_path);
  } else {
    raise(ErrorCode::kIo, "input not found: " + input_path);
  }

  nlohmann::json predictions = nlohmann::json::array();
  for (const auto& f : files) {
    const TimeSeries ts = read_series_csv(f.string());
    const Prediction p = predict_series(bundle, ts);
    predictions.push_back(
        nlohmann::json{{"file", fs::is_directory(input_path)
                                    ? fs::relative(f, input_path).generic_string()
                                    : f.filename().string()},
                       {"predicted_class", p.class_index},
                       {"predicted_label", bundle.class_names[p.class_index]},
                       {"logits", p.logits}});
  }
  nlohmann::json doc{{"format_version", 1},
                     {"class_names", bundle.class_names},
                     {"predictions", predictions}};
  prepare_output_file(out_path, force);
  write_text_file(out_path, doc.dump(2) + "\n");
  manifest.add_input(model_dir + "/checkpoint.json",
                     file_sha256((fs::path(model_dir) / "checkpoint.json").string()));
  if (fs::is_directory(input_path)) {
    manifest.add_input(input_path, hash_directory(input_path));
  } else {
    manifest.add_input(input_path, file_sha256(input_path));
  }
  manifest.add_output(fs::path(out_path).filename().string());
  manifest.write(out_path + ".run_manifest.json");
}

void run_report(const std::string& eval_json_path, const std::string& out_svg,
                bool force) {
  ManifestBuilder manifest("report");
  const EvalReport report = EvalReport::from_json(read_json_file(eval_json_path));
  prepare_output_file(out_svg, force);
  write_text_file(out_svg, render_report_svg(report));
  manifest.add_input(eval_json_path, file_sha256(eval_json_path));
  manifest.add_output(fs::path(out_svg).filename().string());
  manifest.write(out_svg + ".run_manifest.json");
}

}  // namespace tsfew
