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

#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/sha256.hpp"

namespace fs = std::filesystem;

namespace tsfew {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

}  // namespace

void DatasetSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    raise(ErrorCode::kInvalidArgument,
          "dataset: train_fraction must lie in (0, 1)");
  stft.validate();
  augment.validate();
}

nlohmann::json DatasetSpec::to_json() const {
  return nlohmann::json{
      {"split_mode", split_mode == SplitMode::kRandom ? "random" : "sequential"},
      {"train_fraction", train_fraction},
      {"seed", seed},
      {"stft", stft_config_to_json(stft)},
      {"augment", augment_plan_to_json(augment)}};
}

DatasetSpec DatasetSpec::from_json(const nlohmann::json& j) {
  DatasetSpec s;
  try {
    const std::string mode = j.value("split_mode", "random");
    if (mode == "random") {
      s.split_mode = SplitMode::kRandom;
    } else if (mode == "sequential") {
      s.split_mode = SplitMode::kSequential;
    } else {
      raise(ErrorCode::kInvalidArgument, "dataset: unknown split_mode '" + mode + "'");
    }
    s.train_fraction = j.value("train_fraction", s.train_fraction);
    s.seed = j.value("seed", s.seed);
    if (j.contains("stft")) s.stft = stft_config_from_json(j.at("stft"));
    if (j.contains("augment")) s.augment = augment_plan_from_json(j.at("augment"));
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed dataset spec: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json stft_config_to_json(const StftConfig& c) {
  return nlohmann::json{{"window_length", c.window_length},
                        {"overlap", c.overlap},
                        {"window", to_string(c.window_kind)},
                        {"log_epsilon", c.log_epsilon}};
}

StftConfig stft_config_from_json(const nlohmann::json& j) {
  StftConfig c;
  try {
    c.window_length = j.value("window_length", c.window_length);
    if (j.contains("overlap_fraction")) {
      // overlap given as a fraction of the window length
      c.overlap = static_cast<int>(
          std::lround(j.at("overlap_fraction").get<double>() * c.window_length));
    } else {
      c.overlap = j.value("overlap", c.overlap);
    }
    c.window_kind = window_kind_from_string(j.value("window", "hann"));
    c.log_epsilon = j.value("log_epsilon", c.log_epsilon);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed stft config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json augment_plan_to_json(const AugmentPlan& p) {
  return nlohmann::json{{"ratios", p.ratios},
                        {"keep_original", p.keep_original},
                        {"max_retries", p.max_retries}};
}

AugmentPlan augment_plan_from_json(const nlohmann::json& j) {
  AugmentPlan p;
  try {
    p.ratios = j.value("ratios", p.ratios);
    p.keep_original = j.value("keep_original", p.keep_original);
    p.max_retries = j.value("max_retries", p.max_retries);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed augment plan: ") + e.what());
  }
  p.validate();
  return p;
}

namespace {

struct RawSample {
  std::string id;  // "<class>/<stem>"
  int label = 0;
  TimeSeries series;
};

std::vector<std::string> sorted_subdirs(const std::string& dir) {
  std::vector<std::string> names;
  if (!fs::is_directory(dir))
    raise(ErrorCode::kIo, "dataset directory not found: " + dir);
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  if (names.empty())
    raise(ErrorCode::kFormat, "no class subdirectories in " + dir);
  return names;
}

std::vector<RawSample> load_raw_samples(const std::string& raw_dir,
                                        const std::vector<std::string>& classes) {
  std::vector<RawSample> samples;
  for (size_t label = 0; label < classes.size(); ++label) {
    const fs::path cdir = fs::path(raw_dir) / classes[label];
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cdir))
      if (e.is_regular_file() && e.path().extension() == ".csv")
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      raise(ErrorCode::kFormat,
            "class directory contains no series: " + cdir.string());
    for (const auto& f : files) {
      RawSample s;
      s.id = classes[label] + "/" + f.stem().string();
      s.label = static_cast<int>(label);
      s.series = read_series_csv(f.string());
      s.series.label = s.label;
      samples.push_back(std::move(s));
    }
  }
  const int channels = samples.front().series.channels;
  for (const auto& s : samples)
    if (s.series.channels != channels)
      raise(ErrorCode::kFormat, "inconsistent channel count in sample " + s.id +
                                    " (" + std::to_string(s.series.channels) +
                                    " vs " + std::to_string(channels) + ")");
  return samples;
}

std::vector<GrayImage> spectrogram_stack(const TimeSeries& ts, const StftConfig& cfg) {
  std::vector<GrayImage> images;
  images.reserve(ts.channels);
  for (int c = 0; c < ts.channels; ++c)
    images.push_back(quantize_to_gray(stft_channel(ts, c, cfg)));
  return images;
}

}  // namespace

BuiltDataset build_dataset(const std::string& raw_dir, const DatasetSpec& spec) {
  spec.validate();
  BuiltDataset ds;
  ds.class_names = sorted_subdirs(raw_dir);
  std::vector<RawSample> samples = load_raw_samples(raw_dir, ds.class_names);

  // Split indices before any augmentation; erased variants never cross the
  // boundary because they are generated from the train side only.
  std::vector<size_t> train_idx, test_idx;
  if (spec.split_mode == DatasetSpec::SplitMode::kRandom) {
    std::vector<size_t> order(samples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng(derive_seed(spec.seed, 0));
    rng.shuffle(order);
    const size_t n_train = static_cast<size_t>(
        std::lround(spec.train_fraction * static_cast<double>(order.size())));
    train_idx.assign(order.begin(), order.begin() + std::min(n_train, order.size()));
    test_idx.assign(order.begin() + std::min(n_train, order.size()), order.end());
  } else {
    for (size_t label = 0; label < ds.class_names.size(); ++label) {
      std::vector<size_t> members;
      for (size_t i = 0; i < samples.size(); ++i)
        if (samples[i].label == static_cast<int>(label)) members.push_back(i);
      const size_t n_train = static_cast<size_t>(
          std::lround(spec.train_fraction * static_cast<double>(members.size())));
      for (size_t k = 0; k < members.size(); ++k)
        (k < n_train ? train_idx : test_idx).push_back(members[k]);
    }
  }
  if (train_idx.empty() || test_idx.empty())
    raise(ErrorCode::kInvalidArgument,
          "dataset: split leaves an empty train or test set (" +
              std::to_string(train_idx.size()) + "/" +
              std::to_string(test_idx.size()) + ")");

  const uint64_t augment_master = derive_seed(spec.seed, 1);
  for (size_t idx : train_idx) {
    const RawSample& s = samples[idx];
    const std::vector<GrayImage> originals = spectrogram_stack(s.series, spec.stft);
    if (spec.augment.keep_original) {
      FusedSample f;
      f.series = s.series;
      f.images = originals;
      f.label = s.label;
      f.source_id = s.id;
      f.variant_index = 0;
      ds.train.push_back(std::move(f));
    }
    for (size_t j = 0; j < spec.augment.ratios.size(); ++j) {
      FusedSample f;
      f.series = s.series;
      f.images.reserve(originals.size());
      for (size_t c = 0; c < originals.size(); ++c) {
        EraseConfig ec;
        ec.area_ratio = spec.augment.ratios[j];
        ec.rng_seed = derive_seed(augment_master, idx, j, c);
        ec.max_retries = spec.augment.max_retries;
        f.images.push_back(random_erase(originals[c], ec));
      }
      f.label = s.label;
      f.source_id = s.id;
      f.variant_index = static_cast<int>(j) + 1;
      ds.train.push_back(std::move(f));
    }
  }
  for (size_t idx : test_idx) {
    const RawSample& s = samples[idx];
    FusedSample f;
    f.series = s.series;
    f.images = spectrogram_stack(s.series, spec.stft);
    f.label = s.label;
    f.source_id = s.id;
    f.variant_index = 0;
    ds.test.push_back(std::move(f));
  }
  return ds;
}

void SyntheticSpec::validate() const {
  if (samples_per_class < 1)
    raise(ErrorCode::kInvalidArgument, "synth: samples_per_class must be >= 1");
  if (length < 16) raise(ErrorCode::kInvalidArgument, "synth: length must be >= 16");
  if (noise_sigma < 0.0)
    raise(ErrorCode::kInvalidArgument, "synth: noise_sigma must be >= 0");
}

nlohmann::json SyntheticSpec::to_json() const {
  return nlohmann::json{
      {"kind", kind == Kind::kUnivariateBinary ? "univariate_binary"
                                               : "multivariate_4class"},
      {"samples_per_class", samples_per_class},
      {"length", length},
      {"noise_sigma", noise_sigma},
      {"seed", seed},
      {"sample_rate", sample_rate}};
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
  SyntheticSpec s;
  try {
    const std::string kind = j.value("kind", "univariate_binary");
    if (kind == "univariate_binary") {
      s.kind = Kind::kUnivariateBinary;
    } else if (kind == "multivariate_4class") {
      s.kind = Kind::kMultivariate4Class;
    } else {
      raise(ErrorCode::kInvalidArgument, "synth: unknown kind '" + kind + "'");
    }
    s.samples_per_class = j.value("samples_per_class", s.samples_per_class);
    s.length = j.value("length", s.length);
    s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
    s.seed = j.value("seed", s.seed);
    s.sample_rate = j.value("sample_rate", s.sample_rate);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed synthetic spec: ") + e.what());
  }
  s.validate();
  return s;
}

namespace {

// Class 1 ("steady"): band-limited tone. Class 0 ("modulated"): tone in a
// higher band under a slow amplitude envelope, so one cue is spectral and
// one temporal.
TimeSeries synth_univariate(const SyntheticSpec& spec, int class_index,
                            SplitMix64& rng) {
  TimeSeries ts;
  ts.channels = 1;
  ts.length = spec.length;
  ts.sample_rate = spec.sample_rate;
  ts.values.resize(static_cast<size_t>(spec.length));
  const double amp = rng.uniform_real(0.8, 1.2);
  if (class_index == 1) {
    const double f = rng.uniform_real(0.05, 0.10);
    const double phase = rng.uniform_real(0.0, kTau);
    for (int64_t n = 0; n < spec.length; ++n)
      ts.values[n] = amp * std::sin(kTau * f * static_cast<double>(n) + phase) +
                     spec.noise_sigma * rng.normal();
  } else {
    const double f = rng.uniform_real(0.15, 0.25);
    const double phase = rng.uniform_real(0.0, kTau);
    const double fm = rng.uniform_real(0.002, 0.007);
    const double depth = rng.uniform_real(0.5, 0.9);
    const double phase2 = rng.uniform_real(0.0, kTau);
    for (int64_t n = 0; n < spec.length; ++n) {
      const double env =
          1.0 + depth * std::sin(kTau * fm * static_cast<double>(n) + phase2);
      ts.values[n] = amp * env * std::sin(kTau * f * static_cast<double>(n) + phase) +
                     spec.noise_sigma * rng.normal();
    }
  }
  return ts;
}

// Nine channels per sample. Classes differ in per-channel tone bands;
// the last two additionally carry periodic transient bursts at
// class-specific rates.
TimeSeries synth_multivariate(const SyntheticSpec& spec, int class_index,
                              SplitMix64& rng) {
  constexpr int kChannels = 9;
  TimeSeries ts;
  ts.channels = kChannels;
  ts.length = spec.length;
  ts.sample_rate = spec.sample_rate;
  ts.values.assign(static_cast<size_t>(kChannels) * spec.length, 0.0);
  const double base[4] = {0.06, 0.11, 0.16, 0.21};
  const int burst_period[4] = {0, 0, 150, 80};
  for (int c = 0; c < kChannels; ++c) {
    const double amp = rng.uniform_real(0.7, 1.3);
    const double f = base[class_index] + 0.004 * c + rng.uniform_real(-0.004, 0.004);
    const double phase = rng.uniform_real(0.0, kTau);
    double* row = ts.values.data() + static_cast<size_t>(c) * spec.length;
    for (int64_t n = 0; n < spec.length; ++n)
      row[n] = amp * std::sin(kTau * f * static_cast<double>(n) + phase);
    if (burst_period[class_index] > 0) {
      const int period = burst_period[class_index];
      const int64_t p0 = rng.uniform_int(0, period - 1);
      for (int64_t p = p0; p < spec.length; p += period) {
        const double burst_amp = rng.uniform_real(1.5, 2.5);
        const int64_t lo = std::max<int64_t>(0, p - 12);
        const int64_t hi = std::min<int64_t>(spec.length - 1, p + 12);
        for (int64_t n = lo; n <= hi; ++n) {
          const double d = static_cast<double>(n - p) / 4.0;
          row[n] += burst_amp * std::exp(-0.5 * d * d);
        }
      }
    }
    for (int64_t n = 0; n < spec.length; ++n)
      row[n] += spec.noise_sigma * rng.normal();
  }
  return ts;
}

}  // namespace

void synthesize(const SyntheticSpec& spec, const std::string& out_dir) {
  spec.validate();
  const bool univariate = spec.kind == SyntheticSpec::Kind::kUnivariateBinary;
  const std::vector<std::string> classes =
      univariate ? std::vector<std::string>{"modulated", "steady"}
                 : std::vector<std::string>{"mode_a", "mode_b", "mode_c", "mode_d"};
  fs::create_directories(out_dir);
  for (size_t k = 0; k < classes.size(); ++k) {
    const fs::path cdir = fs::path(out_dir) / classes[k];
    fs::create_directories(cdir);
    for (int i = 0; i < spec.samples_per_class; ++i) {
      SplitMix64 rng(derive_seed(spec.seed, k, static_cast<uint64_t>(i)));
      TimeSeries ts = univariate
                          ? synth_univariate(spec, static_cast<int>(k), rng)
                          : synth_multivariate(spec, static_cast<int>(k), rng);
      ts.label = static_cast<int>(k);
      char name[32];
      std::snprintf(name, sizeof(name), "s%04d.csv", i);
      write_series_csv((cdir / name).string(), ts);
    }
  }
}

void save_dataset(const BuiltDataset& ds, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "series");
  fs::create_directories(fs::path(dir) / "images");
  nlohmann::json manifest;
  manifest["format_version"] = 1;
  manifest["classes"] = ds.class_names;
  nlohmann::json entries = nlohmann::json::array();
  size_t index = 0;
  auto emit = [&](const FusedSample& s, const char* split) {
    const std::string stem = std::to_string(index++);
    const std::string series_path = "series/" + stem + ".csv";
    write_series_csv((fs::path(dir) / series_path).string(), s.series);
    nlohmann::json image_paths = nlohmann::json::array();
    for (size_t c = 0; c < s.images.size(); ++c) {
      const std::string ipath = "images/" + stem + "_c" + std::to_string(c) + ".pgm";
      write_pgm((fs::path(dir) / ipath).string(), s.images[c]);
      image_paths.push_back(ipath);
    }
    entries.push_back(nlohmann::json{{"id", s.source_id},
                                     {"label", s.label},
                                     {"variant_index", s.variant_index},
                                     {"split", split},
                                     {"series_path", series_path},
                                     {"image_paths", image_paths}});
  };
  for (const auto& s : ds.train) emit(s, "train");
  for (const auto& s : ds.test) emit(s, "test");
  manifest["samples"] = std::move(entries);
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

BuiltDataset load_dataset(const std::string& dir) {
  const fs::path mpath = fs::path(dir) / "manifest.json";
  std::ifstream in(mpath);
  if (!in) raise(ErrorCode::kIo, "manifest not found: " + mpath.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed manifest: ") + e.what());
  }
  BuiltDataset ds;
  try {
    if (manifest.at("format_version").get<int>() != 1)
      raise(ErrorCode::kFormat,
            "unsupported dataset format_version " +
                manifest.at("format_version").dump());
    ds.class_names = manifest.at("classes").get<std::vector<std::string>>();
    for (const auto& e : manifest.at("samples")) {
      FusedSample s;
      s.source_id = e.at("id").get<std::string>();
      s.label = e.at("label").get<int>();
      s.variant_index = e.at("variant_index").get<int>();
      s.series = read_series_csv((fs::path(dir) / e.at("series_path").get<std::string>()).string());
      s.series.label = s.label;
      for (const auto& ip : e.at("image_paths"))
        s.images.push_back(read_pgm((fs::path(dir) / ip.get<std::string>()).string()));
      const std::string split = e.at("split").get<std::string>();
      if (split == "train") {
        ds.train.push_back(std::move(s));
      } else if (split == "test") {
        ds.test.push_back(std::move(s));
      } else {
        raise(ErrorCode::kFormat, "manifest: unknown split '" + split + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed manifest: ") + e.what());
  }
  return ds;
}

std::string series_content_hash(const TimeSeries& ts) {
  return sha256_hex(series_csv_bytes(ts));
}

std::string dataset_fingerprint(const BuiltDataset& ds) {
  Sha256 h;
  for (const auto& name : ds.class_names) h.update(name + "\n");
  auto feed = [&h](const FusedSample& s, const char* split) {
    h.update(std::string(split) + "\x1f" + s.source_id + "\x1f" +
             std::to_string(s.label) + "\x1f" + std::to_string(s.variant_index) +
             "\x1f");
    h.update(series_csv_bytes(s.series));
    for (const auto& img : s.images) {
      auto bytes = pgm_bytes(img);
      h.update(bytes.data(), bytes.size());
    }
  };
  for (const auto& s : ds.train) feed(s, "train");
  for (const auto& s : ds.test) feed(s, "test");
  return h.hex_digest();
}

std::string hash_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) raise(ErrorCode::kIo, "not a directory: " + dir);
  std::vector<std::string> rel;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      rel.push_back(fs::relative(e.path(), dir).generic_string());
  std::sort(rel.begin(), rel.end());
  Sha256 h;
  for (const auto& r : rel) {
    h.update(r + "\x1f");
    h.update(sha256_hex(read_file_bytes((fs::path(dir) / r).string())) + "\n");
  }
  return h.hex_digest();
}

}  // namespace tsfew
