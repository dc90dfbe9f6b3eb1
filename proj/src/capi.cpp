// Copyright 2026 The bridgetrunc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bridgetrunc/bridgetrunc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <variant>

#include "bridgetrunc/ensembles.hpp"
#include "bridgetrunc/error.hpp"
#include "bridgetrunc/experiment.hpp"
#include "bridgetrunc/presets.hpp"
#include "bridgetrunc/probes.hpp"
#include "bridgetrunc/report_io.hpp"

namespace bt = bridgetrunc;

struct bt_weights {
  bt::WeightMatrix weights;
  double unitarity_defect;
};

struct bt_experiment {
  bt::ExperimentConfig config;
};

struct bt_report {
  std::variant<bt::ExperimentReport, bt::ProbeReport> data;
};

namespace {

thread_local std::string g_last_error;

bt_status to_status(bt::ErrorCode code) {
  switch (code) {
    case bt::ErrorCode::kInvalidSize: return BT_ERR_INVALID_SIZE;
    case bt::ErrorCode::kDomain: return BT_ERR_DOMAIN;
    case bt::ErrorCode::kContract: return BT_ERR_CONTRACT;
    case bt::ErrorCode::kConfig: return BT_ERR_CONFIG;
    case bt::ErrorCode::kUnknownPreset: return BT_ERR_UNKNOWN_PRESET;
    case bt::ErrorCode::kNumerical: return BT_ERR_NUMERICAL;
    case bt::ErrorCode::kIo: return BT_ERR_IO;
  }
  return BT_ERR_INTERNAL;
}

bt_status set_error(bt_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class Body>
bt_status guarded(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return BT_OK;
  } catch (const bt::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BT_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(BT_ERR_INTERNAL, "unknown exception");
  }
}

bt_status null_argument(const char* name) {
  g_last_error = std::string("argument '") + name + "' is NULL";
  return BT_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bt::EnsembleKind to_kind(bt_ensemble e) {
  switch (e) {
    case BT_ENSEMBLE_UNITARY: return bt::EnsembleKind::kHaarUnitary;
    case BT_ENSEMBLE_ORTHOGONAL: return bt::EnsembleKind::kHaarOrthogonal;
    case BT_ENSEMBLE_DFT: return bt::EnsembleKind::kDft;
    case BT_ENSEMBLE_PERMUTATION: return bt::EnsembleKind::kPermutation;
  }
  bt::fail(bt::ErrorCode::kConfig, "unknown ensemble value");
}

std::string report_json(const bt_report* r) {
  if (const auto* e = std::get_if<bt::ExperimentReport>(&r->data)) return bt::report_to_json(*e);
  return bt::probe_to_json(std::get<bt::ProbeReport>(r->data));
}

std::string report_csv(const bt_report* r) {
  if (const auto* e = std::get_if<bt::ExperimentReport>(&r->data)) return bt::report_to_csv(*e);
  return bt::probe_to_csv(std::get<bt::ProbeReport>(r->data));
}

}  // namespace

extern "C" {

const char* bt_version(void) { return "0.1.0"; }

const char* bt_status_string(bt_status status) {
  switch (status) {
    case BT_OK: return "ok";
    case BT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BT_ERR_INVALID_SIZE: return "invalid size";
    case BT_ERR_DOMAIN: return "domain error";
    case BT_ERR_CONTRACT: return "contract violation";
    case BT_ERR_CONFIG: return "config error";
    case BT_ERR_UNKNOWN_PRESET: return "unknown preset";
    case BT_ERR_NUMERICAL: return "numerical error";
    case BT_ERR_IO: return "i/o error";
    case BT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bt_last_error(void) { return g_last_error.c_str(); }

void bt_string_free(char* s) { std::free(s); }

bt_status bt_ensemble_from_name(const char* name, bt_ensemble* out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  return guarded([&] {
    switch (bt::parse_ensemble(name)) {
      case bt::EnsembleKind::kHaarUnitary: *out = BT_ENSEMBLE_UNITARY; break;
      case bt::EnsembleKind::kHaarOrthogonal: *out = BT_ENSEMBLE_ORTHOGONAL; break;
      case bt::EnsembleKind::kDft: *out = BT_ENSEMBLE_DFT; break;
      case bt::EnsembleKind::kPermutation: *out = BT_ENSEMBLE_PERMUTATION; break;
    }
  });
}

bt_status bt_weights_sample(bt_ensemble ensemble, size_t n, uint64_t seed, bt_weights** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const bt::EnsembleSpec spec{to_kind(ensemble), n};
    auto rng = bt::RngStream::derive(seed, bt::StreamTag::kMatrix, 0);
    const bt::GenericMatrix m = bt::sample_matrix(spec, rng);
    const double defect = m.unitarity_defect();
    *out = new bt_weights{bt::squared_moduli(m), defect};
  });
}

size_t bt_weights_size(const bt_weights* w) { return w ? w->weights.n() : 0; }

bt_status bt_weights_get(const bt_weights* w, size_t i, size_t j, double* out) {
  if (!w) return null_argument("w");
  if (!out) return null_argument("out");
  if (i >= w->weights.n() || j >= w->weights.n()) {
    return set_error(BT_ERR_INVALID_ARGUMENT, "index out of range");
  }
  *out = w->weights(i, j);
  g_last_error.clear();
  return BT_OK;
}

bt_status bt_weights_defects(const bt_weights* w, double* unitarity, double* stochastic) {
  if (!w) return null_argument("w");
  return guarded([&] {
    if (unitarity) *unitarity = w->unitarity_defect;
    if (stochastic) *stochastic = w->weights.stochastic_defect();
  });
}

bt_status bt_weights_csv(const bt_weights* w, char** out) {
  if (!w) return null_argument("w");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(bt::weights_to_csv(w->weights)); });
}

bt_status bt_weights_write_csv(const bt_weights* w, const char* path) {
  if (!w) return null_argument("w");
  if (!path) return null_argument("path");
  return guarded([&] { bt::write_text_file(path, bt::weights_to_csv(w->weights)); });
}

void bt_weights_free(bt_weights* w) { delete w; }

size_t bt_preset_count(void) { return bt::presets().size(); }

const char* bt_preset_name(size_t index) {
  const auto all = bt::presets();
  return index < all.size() ? all[index].name : nullptr;
}

bt_status bt_experiment_from_preset(const char* name, bt_experiment** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new bt_experiment{bt::find_preset(name).config}; });
}

bt_status bt_experiment_from_json(const char* json, bt_experiment** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    bt::ExperimentConfig config;
    bt::apply_config_json(config, json);
    *out = new bt_experiment{std::move(config)};
  });
}

bt_status bt_experiment_apply_json(bt_experiment* e, const char* json) {
  if (!e) return null_argument("e");
  if (!json) return null_argument("json");
  return guarded([&] {
    bt::ExperimentConfig updated = e->config;
    bt::apply_config_json(updated, json);
    e->config = std::move(updated);
  });
}

bt_status bt_experiment_to_json(const bt_experiment* e, char** out) {
  if (!e) return null_argument("e");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(bt::config_to_json(e->config)); });
}

bt_status bt_experiment_validate(const bt_experiment* e) {
  if (!e) return null_argument("e");
  return guarded([&] { bt::validate(e->config); });
}

bt_status bt_experiment_run(const bt_experiment* e, size_t threads, bt_report** out) {
  if (!e) return null_argument("e");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new bt_report{bt::run_experiment(e->config, threads)}; });
}

void bt_experiment_free(bt_experiment* e) { delete e; }

bt_status bt_probe_run(const char* json, size_t threads, bt_report** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    bt::ProbeConfig config;
    bt::apply_probe_config_json(config, json);
    *out = new bt_report{bt::run_probe(config, threads)};
  });
}

bt_verdict bt_report_verdict(const bt_report* r) {
  if (!r) return BT_VERDICT_FAIL;
  const bt::Verdict v = std::visit([](const auto& x) { return x.verdict; }, r->data);
  switch (v) {
    case bt::Verdict::kPass: return BT_VERDICT_PASS;
    case bt::Verdict::kFail: return BT_VERDICT_FAIL;
    case bt::Verdict::kEvidenceOnly: return BT_VERDICT_EVIDENCE_ONLY;
  }
  return BT_VERDICT_FAIL;
}

double bt_report_max_abs_z(const bt_report* r) {
  if (!r) return 0.0;
  if (const auto* e = std::get_if<bt::ExperimentReport>(&r->data)) return e->max_abs_z;
  double z = 0.0;
  const auto& p = std::get<bt::ProbeReport>(r->data);
  for (const auto& row : p.rows) {
    if (row.z) z = std::max(z, std::abs(*row.z));
  }
  for (const auto& row : p.conjecture) z = std::max(z, row.max_abs_z);
  return z;
}

bt_status bt_report_json(const bt_report* r, char** out) {
  if (!r) return null_argument("r");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(report_json(r)); });
}

bt_status bt_report_csv(const bt_report* r, char** out) {
  if (!r) return null_argument("r");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(report_csv(r)); });
}

bt_status bt_report_write(const bt_report* r, const char* json_path, const char* csv_path) {
  if (!r) return null_argument("r");
  return guarded([&] {
    if (json_path) bt::write_text_file(json_path, report_json(r));
    if (csv_path) bt::write_text_file(csv_path, report_csv(r));
  });
}

void bt_report_free(bt_report* r) { delete r; }

}  // extern "C"
