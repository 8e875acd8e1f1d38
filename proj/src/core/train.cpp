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

#include "core/train.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tsfew {

void TrainConfig::validate() const {
  if (epochs < 1) raise(ErrorCode::kInvalidArgument, "train: epochs must be >= 1");
  if (batch_size < 1) raise(ErrorCode::kInvalidArgument, "train: batch_size must be >= 1");
  if (!(learning_rate >= 0.0))
    raise(ErrorCode::kInvalidArgument, "train: learning_rate must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    raise(ErrorCode::kInvalidArgument, "train: momentum must lie in [0, 1)");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0))
    raise(ErrorCode::kInvalidArgument, "train: adam betas must lie in [0, 1)");
  if (!(adam_epsilon > 0.0))
    raise(ErrorCode::kInvalidArgument, "train: adam_epsilon must be > 0");
}

nlohmann::json TrainConfig::to_json() const {
  return nlohmann::json{
      {"epochs", epochs},
      {"batch_size", batch_size},
      {"learning_rate", learning_rate},
      {"optimizer", optimizer == OptimizerKind::kAdam ? "adam" : "sgd_momentum"},
      {"momentum", momentum},
      {"beta1", beta1},
      {"beta2", beta2},
      {"adam_epsilon", adam_epsilon},
      {"seed", seed},
      {"shuffle", shuffle},
      {"mode", to_string(mode)}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    const std::string opt = j.value("optimizer", "adam");
    if (opt == "adam") {
      c.optimizer = OptimizerKind::kAdam;
    } else if (opt == "sgd_momentum") {
      c.optimizer = OptimizerKind::kSgdMomentum;
    } else {
      raise(ErrorCode::kInvalidArgument, "train: unknown optimizer '" + opt + "'");
    }
    c.momentum = j.value("momentum", c.momentum);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.adam_epsilon = j.value("adam_epsilon", c.adam_epsilon);
    c.seed = j.value("seed", c.seed);
    c.shuffle = j.value("shuffle", c.shuffle);
    c.mode = branch_mode_from_string(j.value("mode", "fusion"));
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed train config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json TrainResult::history_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (size_t i = 0; i < history.size(); ++i)
    out.push_back(nlohmann::json{{"epoch", i + 1},
                                 {"mean_loss", history[i].mean_loss},
                                 {"train_accuracy", history[i].train_accuracy}});
  return out;
}

BatchTensors make_batch(const std::vector<FusedSample>& samples,
                        const std::vector<size_t>& indices, size_t begin,
                        size_t end) {
  const size_t B = end - begin;
  const FusedSample& first = samples[indices[begin]];
  const int C = first.series.channels;
  const int64_t L = first.series.length;
  const int H = first.images.empty() ? 0 : first.images[0].height;
  const int W = first.images.empty() ? 0 : first.images[0].width;
  if (first.images.size() != static_cast<size_t>(C))
    raise(ErrorCode::kInvalidArgument,
          "batch: image stack size does not match series channels");

  BatchTensors out;
  std::vector<double> sv(B * C * L);
  std::vector<double> iv(B * static_cast<size_t>(C) * H * W);
  out.labels.resize(B);
  for (size_t b = 0; b < B; ++b) {
    const FusedSample& s = samples[indices[begin + b]];
    if (s.series.channels != C || s.series.length != L ||
        s.images.size() != static_cast<size_t>(C))
      raise(ErrorCode::kInvalidArgument,
            "batch: inconsistent sample shapes across the dataset (sample " +
                s.source_id + ")");
    std::copy(s.series.values.begin(), s.series.values.end(),
              sv.begin() + b * static_cast<size_t>(C) * L);
    for (int c = 0; c < C; ++c) {
      const GrayImage& img = s.images[c];
      if (img.height != H || img.width != W)
        raise(ErrorCode::kInvalidArgument,
              "batch: inconsistent image shapes across the dataset (sample " +
                  s.source_id + ")");
      double* dst = iv.data() + ((b * C + c) * static_cast<size_t>(H) * W);
      for (size_t p = 0; p < img.pixels.size(); ++p)
        dst[p] = static_cast<double>(img.pixels[p]) / 255.0;
    }
    out.labels[b] = s.label;
  }
  out.series = Tensor::from_values({static_cast<int64_t>(B), C, L}, std::move(sv));
  out.images = Tensor::from_values({static_cast<int64_t>(B), C, H, W}, std::move(iv));
  return out;
}

namespace {

class Optimizer {
 public:
  Optimizer(std::vector<SsnnModel::ParamRef> params, const TrainConfig& cfg)
      : params_(std::move(params)), cfg_(cfg) {
    if (cfg_.optimizer == OptimizerKind::kAdam) {
      m_.resize(params_.size());
      v_.resize(params_.size());
      for (size_t i = 0; i < params_.size(); ++i) {
        m_[i].assign(params_[i].tensor.values().size(), 0.0);
        v_[i].assign(params_[i].tensor.values().size(), 0.0);
      }
    } else {
      vel_.resize(params_.size());
      for (size_t i = 0; i < params_.size(); ++i)
        vel_[i].assign(params_[i].tensor.values().size(), 0.0);
    }
  }

  void zero_grad() {
    for (auto& p : params_) p.tensor.zero_grad();
  }

  void step() {
    if (cfg_.optimizer == OptimizerKind::kAdam) {
      ++t_;
      const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
      const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
      for (size_t i = 0; i < params_.size(); ++i) {
        auto& vals = params_[i].tensor.values();
        const auto& g = params_[i].tensor.grad();
        for (size_t k = 0; k < vals.size(); ++k) {
          m_[i][k] = cfg_.beta1 * m_[i][k] + (1.0 - cfg_.beta1) * g[k];
          v_[i][k] = cfg_.beta2 * v_[i][k] + (1.0 - cfg_.beta2) * g[k] * g[k];
          const double mhat = m_[i][k] / bc1;
          const double vhat = v_[i][k] / bc2;
          vals[k] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.adam_epsilon);
        }
      }
    } else {
      for (size_t i = 0; i < params_.size(); ++i) {
        auto& vals = params_[i].tensor.values();
        const auto& g = params_[i].tensor.grad();
        for (size_t k = 0; k < vals.size(); ++k) {
          vel_[i][k] = cfg_.momentum * vel_[i][k] + g[k];
          vals[k] -= cfg_.learning_rate * vel_[i][k];
        }
      }
    }
  }

 private:
  std::vector<SsnnModel::ParamRef> params_;
  TrainConfig cfg_;
  std::vector<std::vector<double>> m_, v_, vel_;
  int64_t t_ = 0;
};

}  // namespace

TrainResult train(SsnnModel& model, const std::vector<FusedSample>& trainset,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (trainset.empty())
    raise(ErrorCode::kInvalidArgument, "train: empty training set");
  const int num_classes = model.cfg.num_classes;
  for (const auto& s : trainset)
    if (s.label < 0 || s.label >= num_classes)
      raise(ErrorCode::kInvalidArgument,
            "train: label " + std::to_string(s.label) + " out of range for " +
                std::to_string(num_classes) + " classes");

  Optimizer opt(model.parameters(), cfg);
  SplitMix64 shuffle_rng(derive_seed(cfg.seed, 2));
  std::vector<size_t> order(trainset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.history.reserve(cfg.epochs);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    int64_t correct = 0;
    for (size_t begin = 0; begin < order.size();
         begin += static_cast<size_t>(cfg.batch_size)) {
      const size_t end =
          std::min(order.size(), begin + static_cast<size_t>(cfg.batch_size));
      BatchTensors batch = make_batch(trainset, order, begin, end);
      Tensor logits =
          model.forward_mode(cfg.mode, batch.series, batch.images, NormMode::kTrain);
      Tensor loss = bce_with_logits(
          logits, OneHotTarget::from_labels(batch.labels, num_classes));
      const double loss_value = loss.values()[0];
      if (!std::isfinite(loss_value))
        raise(ErrorCode::kRuntime,
              "train: non-finite loss at epoch " + std::to_string(epoch));
      loss_sum += loss_value * static_cast<double>(end - begin);
      const std::vector<int> preds = predict(logits);
      for (size_t i = 0; i < preds.size(); ++i)
        if (preds[i] == batch.labels[i]) ++correct;
      opt.zero_grad();
      backward(loss);
      opt.step();
    }
    EpochStats stats;
    stats.mean_loss = loss_sum / static_cast<double>(order.size());
    stats.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(order.size());
    result.history.push_back(stats);
  }
  return result;
}

std::vector<int> predict_samples(SsnnModel& model,
                                 const std::vector<FusedSample>& samples,
                                 BranchMode mode, int batch_size) {
  std::vector<size_t> order(samples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<int> out;
  out.reserve(samples.size());
  for (size_t begin = 0; begin < order.size();
       begin += static_cast<size_t>(batch_size)) {
    const size_t end =
        std::min(order.size(), begin + static_cast<size_t>(batch_size));
    BatchTensors batch = make_batch(samples, order, begin, end);
    Tensor logits =
        model.forward_mode(mode, batch.series, batch.images, NormMode::kEval);
    for (int p : predict(logits)) out.push_back(p);
  }
  return out;
}

void save_checkpoint(SsnnModel& model, const std::string& path) {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["ssnn_config"] = model.cfg.to_json();
  nlohmann::json params = nlohmann::json::object();
  for (auto& p : model.parameters()) {
    params[p.path] = nlohmann::json{{"shape", p.tensor.shape()},
                                    {"values", p.tensor.values()}};
  }
  for (auto& s : model.running_state()) {
    params[s.path] = nlohmann::json{
        {"shape", std::vector<int64_t>{static_cast<int64_t>(s.data->size())}},
        {"values", *s.data}};
  }
  doc["parameters"] = std::move(params);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::kIo, "cannot write checkpoint " + path);
    out << doc.dump(2) << "\n";
    if (!out) raise(ErrorCode::kIo, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::kIo, "cannot move checkpoint into place: " + ec.message());
}

SsnnModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "checkpoint not found: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format_version").get<int>() != 1)
      raise(ErrorCode::kFormat, "unsupported checkpoint format_version " +
                                    doc.at("format_version").dump());
    SsnnModel model = build_ssnn(SsnnConfig::from_json(doc.at("ssnn_config")), 0);
    const auto& params = doc.at("parameters");
    auto load_values = [&params](const std::string& key,
                                 const std::vector<int64_t>& want_shape,
                                 std::vector<double>& dst) {
      if (!params.contains(key))
        raise(ErrorCode::kFormat, "checkpoint missing parameter " + key);
      const auto& entry = params.at(key);
      const auto shape = entry.at("shape").get<std::vector<int64_t>>();
      if (shape != want_shape)
        raise(ErrorCode::kFormat,
              "checkpoint parameter " + key + " has shape disagreeing with "
              "the stored ssnn_config");
      auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != dst.size())
        raise(ErrorCode::kFormat, "checkpoint parameter " + key + " has " +
                                      std::to_string(values.size()) +
                                      " values, expected " +
                                      std::to_string(dst.size()));
      dst = std::move(values);
    };
    size_t expected = 0;
    for (auto& p : model.parameters()) {
      load_values(p.path, p.tensor.shape(), p.tensor.values());
      ++expected;
    }
    for (auto& s : model.running_state()) {
      load_values(s.path, {static_cast<int64_t>(s.data->size())}, *s.data);
      ++expected;
    }
    if (params.size() != expected)
      raise(ErrorCode::kFormat, "checkpoint contains unexpected parameters");
    return model;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace tsfew
