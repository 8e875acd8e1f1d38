/* Copyright 2026 the tsfew authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Public C interface of libtsfew, a few-shot time-series-classification
 * toolkit: STFT spectrogram generation, random-erasing augmentation, and a
 * dual-branch sequence/spectrogram residual network with training and
 * evaluation.
 *
 * All functions return TSFEW_OK (0) on success or a nonzero tsfew_status;
 * tsfew_last_error() then carries a one-line diagnostic for the calling
 * thread. JSON arguments are documents, not file paths; directory and file
 * arguments are filesystem paths. See FORMATS.md for every schema.
 */

#ifndef TSFEW_TSFEW_H
#define TSFEW_TSFEW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsfew_status {
  TSFEW_OK = 0,
  TSFEW_ERR_INVALID_ARGUMENT = 1,
  TSFEW_ERR_IO = 2,
  TSFEW_ERR_FORMAT = 3, /* malformed or version-mismatched documents */
  TSFEW_ERR_EXISTS = 4, /* output present and force not set */
  TSFEW_ERR_RUNTIME = 5, /* divergence, erase placement failure, ... */
  TSFEW_ERR_INTERNAL = 6
} tsfew_status;

/* Toolkit semantic version, e.g. "0.1.0". */
const char* tsfew_version(void);

/* Human-readable message for the status code name. */
const char* tsfew_status_name(tsfew_status status);

/* Message of the most recent failure on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next call on the
 * same thread. */
const char* tsfew_last_error(void);

/* Pipeline commands. Each writes its outputs plus one run manifest and
 * refuses to overwrite non-empty outputs unless force is nonzero. */

/* Generate a synthetic raw dataset (labeled CSV series) from a spec JSON
 * document. seed_override < 0 keeps the seed given in the spec. */
tsfew_status tsfew_synth(const char* spec_json, const char* out_dir,
                         int64_t seed_override, int force);

/* Convert every <class>/<id>.csv under in_dir into spectrogram PGMs. */
tsfew_status tsfew_stft(const char* in_dir, const char* out_dir,
                        const char* stft_json, int force);

/* Expand a directory tree of PGM images with random-erasing variants. */
tsfew_status tsfew_augment(const char* in_dir, const char* out_dir,
                           const char* plan_json, uint64_t seed, int force);

/* Build the fused dataset from raw series under data_dir, train, and write
 * checkpoint.json + run_manifest.json into out_dir. seed_override < 0 keeps
 * the seed from the config document. */
tsfew_status tsfew_train(const char* config_json, const char* data_dir,
                         const char* out_dir, int64_t seed_override, int force);

/* Evaluate a trained model directory on the test split of data_dir;
 * writes eval.json and confusion.csv. */
tsfew_status tsfew_eval(const char* model_dir, const char* data_dir,
                        const char* out_dir, int force);

/* Classify a series CSV (or a directory of them); writes predictions JSON. */
tsfew_status tsfew_predict(const char* model_dir, const char* input_path,
                           const char* out_json, int force);

/* Render an eval.json document to an SVG summary. */
tsfew_status tsfew_report(const char* eval_json_path, const char* out_svg,
                          int force);

/* Opaque handle to a trained model plus its recorded preprocessing. */
typedef struct tsfew_model_s tsfew_model;

/* Load a model directory (checkpoint.json + run_manifest.json) produced by
 * tsfew_train. The handle must be released with tsfew_model_close. */
tsfew_status tsfew_model_open(const char* model_dir, tsfew_model** out_model);
void tsfew_model_close(tsfew_model* model);

/* Number of classes; < 0 only for a null handle. */
int tsfew_model_num_classes(const tsfew_model* model);

/* Copies the name of class `index` into buf (NUL terminated). */
tsfew_status tsfew_model_class_name(const tsfew_model* model, int index,
                                    char* buf, size_t buf_size);

/* Classify one CSV series. out_class receives the argmax class index;
 * out_logits, when non-NULL, receives num_classes raw logits. */
tsfew_status tsfew_model_predict_csv(tsfew_model* model, const char* csv_path,
                                     int* out_class, double* out_logits);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TSFEW_TSFEW_H */
