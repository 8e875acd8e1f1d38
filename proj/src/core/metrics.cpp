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

#include "core/metrics.hpp"

#include "core/errors.hpp"

namespace tsfew {

int64_t ConfusionMatrix::total() const {
  int64_t t = 0;
  for (int64_t c : counts) t += c;
  return t;
}

std::string ConfusionMatrix::to_csv(const std::vector<std::string>& class_names) const {
  std::string out = "true\\pred";
  for (int p = 0; p < num_classes; ++p) {
    out += ",";
    out += class_names.empty() ? std::to_string(p) : class_names[p];
  }
  out += "\n";
  for (int t = 0; t < num_classes; ++t) {
    out += class_names.empty() ? std::to_string(t) : class_names[t];
    for (int p = 0; p < num_classes; ++p)
      out += "," + std::to_string(at(t, p));
    out += "\n";
  }
  return out;
}

ConfusionMatrix confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted, int num_classes) {
  if (truth.size() != predicted.size())
    raise(ErrorCode::kInvalidArgument, "confusion: label lists differ in length");
  if (num_classes < 2)
    raise(ErrorCode::kInvalidArgument, "confusion: num_classes must be >= 2");
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(static_cast<size_t>(num_classes) * num_classes, 0);
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes)
      raise(ErrorCode::kInvalidArgument,
            "confusion: label out of range at sample " + std::to_string(i));
    ++cm.at(truth[i], predicted[i]);
  }
  return cm;
}

double f1_binary(const ConfusionMatrix& cm, int positive) {
  if (cm.num_classes < 2)
    raise(ErrorCode::kInvalidArgument, "f1: need at least 2 classes");
  if (positive < 0 || positive >= cm.num_classes)
    raise(ErrorCode::kInvalidArgument, "f1: positive class out of range");
  const double tp = static_cast<double>(cm.at(positive, positive));
  double fp = 0.0, fn = 0.0;
  for (int c = 0; c < cm.num_classes; ++c) {
    if (c == positive) continue;
    fp += static_cast<double>(cm.at(c, positive));
    fn += static_cast<double>(cm.at(positive, c));
  }
  const double denom = tp + 0.5 * (fp + fn);
  return denom == 0.0 ? 0.0 : tp / denom;
}

std::vector<double> f1_per_class(const ConfusionMatrix& cm) {
  std::vector<double> out(static_cast<size_t>(cm.num_classes));
  for (int c = 0; c < cm.num_classes; ++c) out[c] = f1_binary(cm, c);
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  const auto f1s = f1_per_class(cm);
  double s = 0.0;
  for (double f : f1s) s += f;
  return s / static_cast<double>(f1s.size());
}

double accuracy(const ConfusionMatrix& cm) {
  const int64_t total = cm.total();
  if (total == 0)
    raise(ErrorCode::kInvalidArgument, "accuracy: empty confusion matrix");
  int64_t correct = 0;
  for (int c = 0; c < cm.num_classes; ++c) correct += cm.at(c, c);
  return static_cast<double>(correct) / static_cast<double>(total);
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json counts = nlohmann::json::array();
  for (int t = 0; t < confusion.num_classes; ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (int p = 0; p < confusion.num_classes; ++p) row.push_back(confusion.at(t, p));
    counts.push_back(row);
  }
  return nlohmann::json{{"format_version", 1},
                        {"accuracy", accuracy},
                        {"f1_per_class", f1_per_class},
                        {"macro_f1", macro_f1},
                        {"positive_class", positive_class},
                        {"positive_f1", f1_per_class[positive_class]},
                        {"num_samples", confusion.total()},
                        {"class_names", class_names},
                        {"confusion", counts}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    if (j.at("format_version").get<int>() != 1)
      raise(ErrorCode::kFormat, "eval report: unsupported format_version");
    r.accuracy = j.at("accuracy").get<double>();
    r.f1_per_class = j.at("f1_per_class").get<std::vector<double>>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.positive_class = j.at("positive_class").get<int>();
    r.class_names = j.at("class_names").get<std::vector<std::string>>();
    const auto& counts = j.at("confusion");
    r.confusion.num_classes = static_cast<int>(counts.size());
    r.confusion.counts.assign(
        static_cast<size_t>(r.confusion.num_classes) * r.confusion.num_classes, 0);
    for (int t = 0; t < r.confusion.num_classes; ++t)
      for (int p = 0; p < r.confusion.num_classes; ++p)
        r.confusion.at(t, p) = counts.at(t).at(p).get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kFormat, std::string("malformed eval report: ") + e.what());
  }
  if (r.confusion.num_classes < 2 ||
      r.class_names.size() != static_cast<size_t>(r.confusion.num_classes) ||
      r.f1_per_class.size() != static_cast<size_t>(r.confusion.num_classes) ||
      r.positive_class < 0 || r.positive_class >= r.confusion.num_classes)
    raise(ErrorCode::kFormat, "malformed eval report: inconsistent fields");
  return r;
}

EvalReport evaluate_labels(const std::vector<int>& truth,
                           const std::vector<int>& predicted, int num_classes,
                           int positive_class,
                           std::vector<std::string> class_names) {
  EvalReport r;
  r.confusion = confusion(truth, predicted, num_classes);
  r.accuracy = accuracy(r.confusion);
  r.f1_per_class = f1_per_class(r.confusion);
  r.macro_f1 = macro_f1(r.confusion);
  if (positive_class < 0 || positive_class >= num_classes)
    raise(ErrorCode::kInvalidArgument, "evaluate: positive class out of range");
  r.positive_class = positive_class;
  if (class_names.empty())
    for (int c = 0; c < num_classes; ++c) class_names.push_back("class" + std::to_string(c));
  r.class_names = std::move(class_names);
  return r;
}

}  // namespace tsfew
