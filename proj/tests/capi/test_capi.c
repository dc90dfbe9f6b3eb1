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

/* Exercises the C interface from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "bridgetrunc/bridgetrunc.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, \
              #cond);                                             \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_weights(void) {
  bt_weights* w = NULL;
  bt_ensemble e;
  double x = 0.0, unitarity = 1.0, stochastic = 1.0;
  char* csv = NULL;
  size_t i, j;

  EXPECT(bt_ensemble_from_name("dft", &e) == BT_OK);
  EXPECT(e == BT_ENSEMBLE_DFT);
  EXPECT(bt_ensemble_from_name("gue", &e) == BT_ERR_CONFIG);
  EXPECT(strlen(bt_last_error()) > 0);

  EXPECT(bt_weights_sample(BT_ENSEMBLE_DFT, 4, 0, &w) == BT_OK);
  EXPECT(bt_weights_size(w) == 4);
  for (i = 0; i < 4; ++i) {
    for (j = 0; j < 4; ++j) {
      EXPECT(bt_weights_get(w, i, j, &x) == BT_OK);
      EXPECT(fabs(x - 0.25) < 1e-14);
    }
  }
  EXPECT(bt_weights_get(w, 4, 0, &x) == BT_ERR_INVALID_ARGUMENT);
  EXPECT(bt_weights_csv(w, &csv) == BT_OK);
  EXPECT(strncmp(csv, "i,j,w\n", 6) == 0);
  bt_string_free(csv);
  bt_weights_free(w);

  EXPECT(bt_weights_sample(BT_ENSEMBLE_UNITARY, 50, 11, &w) == BT_OK);
  EXPECT(bt_weights_defects(w, &unitarity, &stochastic) == BT_OK);
  EXPECT(unitarity < 1e-10);
  EXPECT(stochastic < 1e-12);
  EXPECT(bt_weights_write_csv(w, "/nonexistent-dir/w.csv") == BT_ERR_IO);
  bt_weights_free(w);

  w = (bt_weights*)1;
  EXPECT(bt_weights_sample(BT_ENSEMBLE_PERMUTATION, 0, 1, &w) == BT_ERR_INVALID_SIZE);
  EXPECT(w == NULL);
  EXPECT(bt_weights_sample(BT_ENSEMBLE_UNITARY, 3, 1, NULL) == BT_ERR_INVALID_ARGUMENT);
}

static void test_presets(void) {
  bt_experiment* exp = NULL;
  size_t i, count = bt_preset_count();
  EXPECT(count == 12);
  for (i = 0; i < count; ++i) {
    EXPECT(bt_experiment_from_preset(bt_preset_name(i), &exp) == BT_OK);
    /* Presets carry no seed. */
    EXPECT(bt_experiment_validate(exp) == BT_ERR_CONFIG);
    EXPECT(bt_experiment_apply_json(exp, "{\"seed\": 1}") == BT_OK);
    EXPECT(bt_experiment_validate(exp) == BT_OK);
    bt_experiment_free(exp);
  }
  EXPECT(bt_preset_name(count) == NULL);
  EXPECT(bt_experiment_from_preset("thm-0.0", &exp) == BT_ERR_UNKNOWN_PRESET);
  EXPECT(exp == NULL);
}

static void test_run(void) {
  bt_experiment* exp = NULL;
  bt_report* rep = NULL;
  char* before = NULL;
  char* after = NULL;
  char* json = NULL;
  char* csv = NULL;

  EXPECT(bt_experiment_from_json(
             "{\"ensemble\": \"dft\", \"n\": 30, \"statistic\": \"dft-annealed\", "
             "\"replicates\": 200, \"seed\": 4}",
             &exp) == BT_OK);
  EXPECT(bt_experiment_to_json(exp, &before) == BT_OK);
  /* A failed update leaves the experiment untouched. */
  EXPECT(bt_experiment_apply_json(exp, "{\"n\": 40, \"bogus\": 1}") == BT_ERR_CONFIG);
  EXPECT(bt_experiment_to_json(exp, &after) == BT_OK);
  EXPECT(strcmp(before, after) == 0);
  bt_string_free(before);
  bt_string_free(after);

  EXPECT(bt_experiment_run(exp, 2, &rep) == BT_OK);
  EXPECT(bt_report_verdict(rep) == BT_VERDICT_PASS);
  EXPECT(bt_report_max_abs_z(rep) <= 4.0);
  EXPECT(bt_report_json(rep, &json) == BT_OK);
  EXPECT(strstr(json, "\"schema\": \"bridgetrunc.report/1\"") != NULL);
  EXPECT(bt_report_csv(rep, &csv) == BT_OK);
  EXPECT(strncmp(csv, "section,", 8) == 0);
  EXPECT(bt_report_write(rep, NULL, NULL) == BT_OK);
  EXPECT(bt_report_write(rep, "/nonexistent-dir/r.json", NULL) == BT_ERR_IO);
  bt_string_free(json);
  bt_string_free(csv);
  bt_report_free(rep);
  bt_experiment_free(exp);

  EXPECT(bt_experiment_from_json("{\"n\": 1, \"seed\": 1}", &exp) == BT_OK);
  EXPECT(bt_experiment_run(exp, 1, &rep) == BT_ERR_INVALID_SIZE);
  EXPECT(rep == NULL);
  bt_experiment_free(exp);
}

static void test_probe(void) {
  bt_report* rep = NULL;
  char* csv = NULL;
  EXPECT(bt_probe_run("{\"probe\": \"conditional-variance\", \"n\": 100, \"s\": 0.5, "
                      "\"t\": 0.5, \"replicates\": 500, \"seed\": 2}",
                      1, &rep) == BT_OK);
  EXPECT(bt_report_csv(rep, &csv) == BT_OK);
  EXPECT(strstr(csv, "12.5625") != NULL);
  bt_string_free(csv);
  bt_report_free(rep);
  EXPECT(bt_probe_run("{\"probe\": \"tenth-moment\", \"seed\": 2}", 1, &rep) == BT_ERR_CONFIG);
}

int main(void) {
  EXPECT(strcmp(bt_version(), "0.1.0") == 0);
  EXPECT(strcmp(bt_status_string(BT_ERR_IO), "i/o error") == 0);
  bt_string_free(NULL);
  bt_weights_free(NULL);
  bt_report_free(NULL);
  bt_experiment_free(NULL);
  test_weights();
  test_presets();
  test_run();
  test_probe();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  puts("c api: all checks passed");
  return 0;
}
