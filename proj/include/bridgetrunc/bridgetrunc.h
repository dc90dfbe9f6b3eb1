/*
 * Copyright 2026 The bridgetrunc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the bridgetrunc library. All objects are opaque handles
 * released with the matching *_free function. Functions that can fail return
 * a bt_status; the message of the last failure on the calling thread is
 * available from bt_last_error(). Strings returned through char** are owned
 * by the caller and released with bt_string_free(). */

#ifndef BRIDGETRUNC_BRIDGETRUNC_H_
#define BRIDGETRUNC_BRIDGETRUNC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(BT_BUILDING_LIBRARY)
#define BT_API __attribute__((visibility("default")))
#else
#define BT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bt_status {
  BT_OK = 0,
  BT_ERR_INVALID_ARGUMENT = 1,
  BT_ERR_INVALID_SIZE = 2,
  BT_ERR_DOMAIN = 3,
  BT_ERR_CONTRACT = 4,
  BT_ERR_CONFIG = 5,
  BT_ERR_UNKNOWN_PRESET = 6,
  BT_ERR_NUMERICAL = 7,
  BT_ERR_IO = 8,
  BT_ERR_INTERNAL = 9
} bt_status;

typedef enum bt_ensemble {
  BT_ENSEMBLE_UNITARY = 0,
  BT_ENSEMBLE_ORTHOGONAL = 1,
  BT_ENSEMBLE_DFT = 2,
  BT_ENSEMBLE_PERMUTATION = 3
} bt_ensemble;

typedef enum bt_verdict {
  BT_VERDICT_PASS = 0,
  BT_VERDICT_FAIL = 1,
  BT_VERDICT_EVIDENCE_ONLY = 2
} bt_verdict;

typedef struct bt_weights bt_weights;
typedef struct bt_experiment bt_experiment;
typedef struct bt_report bt_report;

BT_API const char* bt_version(void);
BT_API const char* bt_status_string(bt_status status);
/* Empty string when the last call on this thread succeeded. */
BT_API const char* bt_last_error(void);
BT_API void bt_string_free(char* s);

BT_API bt_status bt_ensemble_from_name(const char* name, bt_ensemble* out);

/* Squared moduli |U_ij|^2 of one sampled matrix. The DFT ignores the seed. */
BT_API bt_status bt_weights_sample(bt_ensemble ensemble, size_t n, uint64_t seed,
                                   bt_weights** out);
BT_API size_t bt_weights_size(const bt_weights* w);
/* Zero-based indices. */
BT_API bt_status bt_weights_get(const bt_weights* w, size_t i, size_t j, double* out);
/* max |(U*U - I)_ij| of the sampled matrix and the largest row or column sum
 * deviation of the weights. */
BT_API bt_status bt_weights_defects(const bt_weights* w, double* unitarity, double* stochastic);
/* CSV with header i,j,w and one-based indices. */
BT_API bt_status bt_weights_csv(const bt_weights* w, char** out);
BT_API bt_status bt_weights_write_csv(const bt_weights* w, const char* path);
BT_API void bt_weights_free(bt_weights* w);

BT_API size_t bt_preset_count(void);
/* NULL when index is out of range. */
BT_API const char* bt_preset_name(size_t index);

BT_API bt_status bt_experiment_from_preset(const char* name, bt_experiment** out);
/* Defaults (n = 200, m = 20, N = 2000) overridden by the keys of a JSON object. */
BT_API bt_status bt_experiment_from_json(const char* json, bt_experiment** out);
/* Unknown keys are rejected with BT_ERR_CONFIG and leave the experiment unchanged. */
BT_API bt_status bt_experiment_apply_json(bt_experiment* e, const char* json);
BT_API bt_status bt_experiment_to_json(const bt_experiment* e, char** out);
BT_API bt_status bt_experiment_validate(const bt_experiment* e);
/* The report does not depend on the thread count. */
BT_API bt_status bt_experiment_run(const bt_experiment* e, size_t threads, bt_report** out);
BT_API void bt_experiment_free(bt_experiment* e);

/* json is an object with at least a "probe" key and a "seed". */
BT_API bt_status bt_probe_run(const char* json, size_t threads, bt_report** out);

BT_API bt_verdict bt_report_verdict(const bt_report* r);
BT_API double bt_report_max_abs_z(const bt_report* r);
BT_API bt_status bt_report_json(const bt_report* r, char** out);
BT_API bt_status bt_report_csv(const bt_report* r, char** out);
/* Either path may be NULL to skip that file. */
BT_API bt_status bt_report_write(const bt_report* r, const char* json_path, const char* csv_path);
BT_API void bt_report_free(bt_report* r);

#ifdef __cplusplus
}
#endif

#endif /* BRIDGETRUNC_BRIDGETRUNC_H_ */
