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

#ifndef TSFEW_CORE_METRICS_HPP
#define TSFEW_CORE_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace tsfew {

struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<int64_t> counts;  // counts[true * num_classes + pred]

  int64_t at(int truth, int pred) const {
    return counts[static_cast<size_t>(truth) * num_classes + pred];
  }
  int64_t& at(int truth, int pred) {
    return counts[static_cast<size_t>(truth) * num_classes + pred];
  }
  int64_t total() const;
  std::string to_csv(const std::vector<std::string>& class_names = {}) const;
};

ConfusionMatrix confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted, int num_classes);

// One-vs-rest F1 = TP / (TP + (FP + FN)/2); 0 when the denominator is 0.
double f1_binary(const ConfusionMatrix& cm, int positive);
std::vector<double> f1_per_class(const ConfusionMatrix& cm);
// Unweighted mean of the per-class F1 scores.
double macro_f1(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);

struct EvalReport {
  double accuracy = 0.0;
  std::vector<double> f1_per_class;
  double macro_f1 = 0.0;
  ConfusionMatrix confusion;
  int positive_class = 0;  // class whose binary F1 is headline for 2-class sets
  std::vector<std::string> class_names;

  double positive_f1() const { return f1_per_class[positive_class]; }
  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
};

EvalReport evaluate_labels(const std::vector<int>& truth,
                           const std::vector<int>& predicted, int num_classes,
                           int positive_class,
                           std::vector<std::string> class_names);

}  // namespace tsfew

#endif  // TSFEW_CORE_METRICS_HPP
