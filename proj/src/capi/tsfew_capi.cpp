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

#include "tsfew/tsfew.h"

#include <cstring>
#include <optional>
#include <string>

#include "core/errors.hpp"
#include "core/pipeline.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string t_last_error;

tsfew_status map_code(tsfew::ErrorCode code) {
  switch (code) {
    case tsfew::ErrorCode::kInvalidArgument: return TSFEW_ERR_INVALID_ARGUMENT;
    case tsfew::ErrorCode::kIo: return TSFEW_ERR_IO;
    case tsfew::ErrorCode::kFormat: return TSFEW_ERR_FORMAT;
    case tsfew::ErrorCode::kExists: return TSFEW_ERR_EXISTS;
    case tsfew::ErrorCode::kRuntime: return TSFEW_ERR_RUNTIME;
    default: return TSFEW_ERR_INTERNAL;
  }
}

// Runs fn, translating exceptions into status codes + the thread-local
// message. fn must be callable with no arguments.
template <typename Fn>
tsfew_status guarded(Fn&& fn) {
  t_last_error.clear();
  try {
    fn();
    return TSFEW_OK;
  } catch (const tsfew::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TSFEW_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return TSFEW_ERR_INTERNAL;
  }
}

tsfew_status require_arg(bool ok, const char* msg) {
  if (ok) return TSFEW_OK;
  t_last_error = msg;
  return TSFEW_ERR_INVALID_ARGUMENT;
}

std::optional<uint64_t> seed_from(int64_t seed_override) {
  if (seed_override < 0) return std::nullopt;
  return static_cast<uint64_t>(seed_override);
}

}  // namespace

struct tsfew_model_s {
  tsfew::ModelBundle bundle;
};

extern "C" {

const char* tsfew_version(void) { return tsfew::kVersion; }

const char* tsfew_status_name(tsfew_status status) {
  switch (status) {
    case TSFEW_OK: return "ok";
    case TSFEW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TSFEW_ERR_IO: return "i/o error";
    case TSFEW_ERR_FORMAT: return "format error";
    case TSFEW_ERR_EXISTS: return "output exists";
    case TSFEW_ERR_RUNTIME: return "runtime error";
    default: return "internal error";
  }
}

const char* tsfew_last_error(void) { return t_last_error.c_str(); }

tsfew_status tsfew_synth(const char* spec_json, const char* out_dir,
                         int64_t seed_override, int force) {
  if (auto s = require_arg(spec_json && out_dir, "synth: null argument"))
    return s;
  return guarded([&] {
    tsfew::run_synth(spec_json, out_dir, seed_from(seed_override), force != 0);
  });
}

tsfew_status tsfew_stft(const char* in_dir, const char* out_dir,
                        const char* stft_json, int force) {
  if (auto s = require_arg(in_dir && out_dir && stft_json, "stft: null argument"))
    return s;
  return guarded([&] { tsfew::run_stft(in_dir, out_dir, stft_json, force != 0); });
}

tsfew_status tsfew_augment(const char* in_dir, const char* out_dir,
                           const char* plan_json, uint64_t seed, int force) {
  if (auto s = require_arg(in_dir && out_dir && plan_json, "augment: null argument"))
    return s;
  return guarded(
      [&] { tsfew::run_augment(in_dir, out_dir, plan_json, seed, force != 0); });
}

tsfew_status tsfew_train(const char* config_json, const char* data_dir,
                         const char* out_dir, int64_t seed_override, int force) {
  if (auto s = require_arg(config_json && data_dir && out_dir, "train: null argument"))
    return s;
  return guarded([&] {
    tsfew::run_train(config_json, data_dir, out_dir, seed_from(seed_override),
                     force != 0);
  });
}

tsfew_status tsfew_eval(const char* model_dir, const char* data_dir,
                        const char* out_dir, int force) {
  if (auto s = require_arg(model_dir && data_dir && out_dir, "eval: null argument"))
    return s;
  return guarded([&] { tsfew::run_eval(model_dir, data_dir, out_dir, force != 0); });
}

tsfew_status tsfew_predict(const char* model_dir, const char* input_path,
                           const char* out_json, int force) {
  if (auto s = require_arg(model_dir && input_path && out_json,
                           "predict: null argument"))
    return s;
  return guarded(
      [&] { tsfew::run_predict(model_dir, input_path, out_json, force != 0); });
}

tsfew_status tsfew_report(const char* eval_json_path, const char* out_svg,
                          int force) {
  if (auto s = require_arg(eval_json_path && out_svg, "report: null argument"))
    return s;
  return guarded(
      [&] { tsfew::run_report(eval_json_path, out_svg, force != 0); });
}

tsfew_status tsfew_model_open(const char* model_dir, tsfew_model** out_model) {
  if (auto s = require_arg(model_dir && out_model, "model_open: null argument"))
    return s;
  *out_model = nullptr;
  return guarded([&] {
    auto* handle = new tsfew_model_s{tsfew::load_model_bundle(model_dir)};
    *out_model = handle;
  });
}

void tsfew_model_close(tsfew_model* model) { delete model; }

int tsfew_model_num_classes(const tsfew_model* model) {
  if (!model) return -1;
  return model->bundle.model.cfg.num_classes;
}

tsfew_status tsfew_model_class_name(const tsfew_model* model, int index,
                                    char* buf, size_t buf_size) {
  if (auto s = require_arg(model && buf && buf_size > 0,
                           "model_class_name: null argument"))
    return s;
  t_last_error.clear();
  const auto& names = model->bundle.class_names;
  if (index < 0 || index >= static_cast<int>(names.size())) {
    t_last_error = "model_class_name: class index out of range";
    return TSFEW_ERR_INVALID_ARGUMENT;
  }
  const std::string& name = names[index];
  if (name.size() + 1 > buf_size) {
    t_last_error = "model_class_name: buffer too small";
    return TSFEW_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(buf, name.c_str(), name.size() + 1);
  return TSFEW_OK;
}

tsfew_status tsfew_model_predict_csv(tsfew_model* model, const char* csv_path,
                                     int* out_class, double* out_logits) {
  if (auto s = require_arg(model && csv_path && out_class,
                           "model_predict_csv: null argument"))
    return s;
  return guarded([&] {
    const tsfew::TimeSeries ts = tsfew::read_series_csv(csv_path);
    const tsfew::Prediction p = tsfew::predict_series(model->bundle, ts);
    *out_class = p.class_index;
    if (out_logits)
      std::memcpy(out_logits, p.logits.data(), p.logits.size() * sizeof(double));
  });
}

}  // extern "C"
