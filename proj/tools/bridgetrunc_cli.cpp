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

// bridgetrunc command-line front end.
//
//   bridgetrunc sample --ensemble E --n N --seed S [--out FILE]
//   bridgetrunc verify PRESET --seed S [overrides]
//   bridgetrunc probe KIND --seed S [--n 100,200] [--s X --t Y]
//
// Exit codes: 0 pass (or evidence only), 1 statistical failure,
// 2 configuration error, 3 I/O or runtime error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bridgetrunc/bridgetrunc.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(bt_status status) {
  switch (status) {
    case BT_OK: return kExitPass;
    case BT_ERR_INVALID_ARGUMENT:
    case BT_ERR_INVALID_SIZE:
    case BT_ERR_DOMAIN:
    case BT_ERR_CONFIG:
    case BT_ERR_UNKNOWN_PRESET: return kExitConfig;
    default: return kExitRuntime;
  }
}

struct Failure {
  int code;
  std::string message;
};

void check(bt_status status) {
  if (status != BT_OK) {
    throw Failure{exit_code_for(status),
                  std::string(bt_status_string(status)) + ": " + bt_last_error()};
  }
}

std::string take(char* s) {
  std::string out = s ? s : "";
  bt_string_free(s);
  return out;
}

struct Options {
  std::optional<std::string> ensemble;
  std::optional<std::string> n_text;
  std::optional<std::size_t> grid_m;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::optional<std::string> out_dir;
  std::optional<std::string> points;
  std::optional<double> z_threshold;
  std::optional<std::string> config_path;
  std::optional<double> s;
  std::optional<double> t;
  std::optional<std::string> out_file;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Failure{kExitConfig, "config error: bad size '" + item + "' in --n"};
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw Failure{kExitConfig, "config error: --n is empty"};
  return out;
}

// Reads --config, pulling out the CLI-only keys.
json load_config(const Options& o, std::string& out_dir, std::size_t& threads,
                 bool threads_given) {
  if (!o.config_path) return json::object();
  std::ifstream in(*o.config_path);
  if (!in) throw Failure{kExitRuntime, "i/o error: cannot read '" + *o.config_path + "'"};
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Failure{kExitConfig, "config error: " + *o.config_path + ": " + e.what()};
  }
  if (!doc.is_object()) {
    throw Failure{kExitConfig, "config error: " + *o.config_path + " is not a JSON object"};
  }
  try {
    if (doc.contains("out_dir")) {
      if (!o.out_dir) out_dir = doc["out_dir"].get<std::string>();
      doc.erase("out_dir");
    }
    if (doc.contains("threads")) {
      if (!threads_given) threads = doc["threads"].get<std::size_t>();
      doc.erase("threads");
    }
  } catch (const json::exception& e) {
    throw Failure{kExitConfig, std::string("config error: ") + e.what()};
  }
  return doc;
}

std::string resolve_out_dir(const Options& o) {
  if (o.out_dir) return *o.out_dir;
  if (const char* env = std::getenv("BRIDGE_TRUNC_OUT"); env && *env) return env;
  return ".";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{kExitRuntime, "i/o error: cannot create '" + dir + "': " + ec.message()};
}

int verdict_exit(bt_verdict v) { return v == BT_VERDICT_FAIL ? kExitFail : kExitPass; }

const char* verdict_text(bt_verdict v) {
  switch (v) {
    case BT_VERDICT_PASS: return "pass";
    case BT_VERDICT_FAIL: return "fail";
    case BT_VERDICT_EVIDENCE_ONLY: return "evidence only";
  }
  return "fail";
}

int cmd_sample(const Options& o) {
  if (!o.ensemble) throw Failure{kExitConfig, "config error: --ensemble is required"};
  if (!o.n_text) throw Failure{kExitConfig, "config error: --n is required"};
  const auto sizes = parse_sizes(*o.n_text);
  if (sizes.size() != 1) throw Failure{kExitConfig, "config error: sample takes a single --n"};
  bt_ensemble e;
  check(bt_ensemble_from_name(o.ensemble->c_str(), &e));
  // The DFT matrix is deterministic, so it is the one case without a seed.
  if (!o.seed && e != BT_ENSEMBLE_DFT) {
    throw Failure{kExitConfig, "config error: --seed is required"};
  }
  bt_weights* w = nullptr;
  check(bt_weights_sample(e, sizes[0], o.seed.value_or(0), &w));
  bt_status st = BT_OK;
  if (o.out_file) {
    st = bt_weights_write_csv(w, o.out_file->c_str());
  } else {
    char* csv = nullptr;
    st = bt_weights_csv(w, &csv);
    if (st == BT_OK) std::cout << take(csv);
  }
  bt_weights_free(w);
  check(st);
  return kExitPass;
}

int cmd_verify(const std::string& preset, const Options& o, bool threads_given) {
  std::string out_dir = resolve_out_dir(o);
  std::size_t threads = o.threads;
  json overrides = load_config(o, out_dir, threads, threads_given);
  if (o.ensemble) overrides["ensemble"] = *o.ensemble;
  if (o.n_text) {
    const auto sizes = parse_sizes(*o.n_text);
    if (sizes.size() != 1) throw Failure{kExitConfig, "config error: verify takes a single --n"};
    overrides["n"] = sizes[0];
  }
  if (o.grid_m) overrides["grid_m"] = *o.grid_m;
  if (o.replicates) overrides["replicates"] = *o.replicates;
  if (o.seed) overrides["seed"] = *o.seed;
  if (o.points) overrides["points"] = *o.points;
  if (o.z_threshold) overrides["z_threshold"] = *o.z_threshold;

  bt_experiment* exp = nullptr;
  check(bt_experiment_from_preset(preset.c_str(), &exp));
  bt_report* report = nullptr;
  bt_status st = bt_experiment_apply_json(exp, overrides.dump().c_str());
  if (st == BT_OK) st = bt_experiment_validate(exp);
  if (st == BT_OK) st = bt_experiment_run(exp, threads, &report);
  bt_experiment_free(exp);
  check(st);

  ensure_dir(out_dir);
  const std::filesystem::path base = std::filesystem::path(out_dir) / preset;
  const std::string json_path = base.string() + ".json";
  const std::string csv_path = base.string() + ".csv";
  st = bt_report_write(report, json_path.c_str(), csv_path.c_str());
  const bt_verdict v = bt_report_verdict(report);
  const double z = bt_report_max_abs_z(report);
  bt_report_free(report);
  check(st);
  std::printf("%s: %s (max |z| = %.3f)\n", preset.c_str(), verdict_text(v), z);
  std::printf("wrote %s\nwrote %s\n", json_path.c_str(), csv_path.c_str());
  return verdict_exit(v);
}

int cmd_probe(const std::string& kind, const Options& o, bool threads_given) {
  std::string out_dir = resolve_out_dir(o);
  std::size_t threads = o.threads;
  json cfg = load_config(o, out_dir, threads, threads_given);
  cfg["probe"] = kind;
  if (o.ensemble) cfg["ensemble"] = *o.ensemble;
  if (o.n_text) cfg["n"] = parse_sizes(*o.n_text);
  if (o.grid_m) cfg["grid_m"] = *o.grid_m;
  if (o.replicates) cfg["replicates"] = *o.replicates;
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.s) cfg["s"] = *o.s;
  if (o.t) cfg["t"] = *o.t;
  if (o.z_threshold) cfg["z_threshold"] = *o.z_threshold;
  if (o.points) throw Failure{kExitConfig, "config error: probes take --s/--t, not --points"};

  bt_report* report = nullptr;
  check(bt_probe_run(cfg.dump().c_str(), threads, &report));
  ensure_dir(out_dir);
  const std::filesystem::path base = std::filesystem::path(out_dir) / ("probe-" + kind);
  const std::string json_path = base.string() + ".json";
  const std::string csv_path = base.string() + ".csv";
  char* csv = nullptr;
  bt_status st = bt_report_write(report, json_path.c_str(), csv_path.c_str());
  if (st == BT_OK) st = bt_report_csv(report, &csv);
  const bt_verdict v = bt_report_verdict(report);
  bt_report_free(report);
  check(st);
  if (v == BT_VERDICT_EVIDENCE_ONLY) {
    std::cout << "# EVIDENCE ONLY: conjecture probe, not a pass/fail check\n";
  }
  std::cout << take(csv);
  std::fprintf(stderr, "wrote %s\nwrote %s\n", json_path.c_str(), csv_path.c_str());
  return verdict_exit(v);
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--ensemble,--group", o.ensemble, "unitary, orthogonal, dft or permutation");
  cmd->add_option("--n", o.n_text, "matrix size (probes accept a list: 100,200,400)");
  cmd->add_option("--seed", o.seed, "master seed (required)");
}

void add_run(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid-m", o.grid_m, "grid resolution m");
  cmd->add_option("--replicates", o.replicates, "Monte Carlo replicates N");
  cmd->add_option("--threads", o.threads, "worker threads; never changes output");
  cmd->add_option("--out-dir", o.out_dir, "output directory (default $BRIDGE_TRUNC_OUT or .)");
  cmd->add_option("--z-threshold", o.z_threshold, "|z| pass threshold");
  cmd->add_option("--config", o.config_path, "JSON config; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncations of random unitary matrices: simulation and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bt_version());

  Options o;
  std::string preset;
  std::string probe_kind;

  auto* sample = app.add_subcommand("sample", "write the squared moduli |U_ij|^2 as CSV");
  add_common(sample, o);
  sample->add_option("--out", o.out_file, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run a preset and write a JSON+CSV report");
  verify->add_option("preset", preset, "preset name")->required();
  add_common(verify, o);
  add_run(verify, o);
  verify->add_option("--points", o.points, "test points s:t,... (s,... for one-parameter)");

  auto* probe = app.add_subcommand("probe", "moment and conjecture probes");
  probe->add_option("kind", probe_kind, "probe kind")->required();
  add_common(probe, o);
  add_run(probe, o);
  probe->add_option("--s", o.s, "first coordinate of the probe point");
  probe->add_option("--t", o.t, "second coordinate of the probe point");
  probe->add_option("--points", o.points, "not accepted by probes");

  auto* list = app.add_subcommand("presets", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*list) {
      for (std::size_t i = 0; i < bt_preset_count(); ++i) std::puts(bt_preset_name(i));
      return kExitPass;
    }
    if (*sample) return cmd_sample(o);
    const bool threads_given = (*verify && verify->count("--threads") > 0) ||
                               (*probe && probe->count("--threads") > 0);
    if (*verify) return cmd_verify(preset, o, threads_given);
    return cmd_probe(probe_kind, o, threads_given);
  } catch (const Failure& f) {
    std::fprintf(stderr, "bridgetrunc: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bridgetrunc: %s\n", e.what());
    return kExitRuntime;
  }
}
