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

#include "bridgetrunc/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bridgetrunc/error.hpp"
#include "json.hpp"

namespace bridgetrunc {
namespace {

using nlohmann::json;

json parse_object(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kConfig, "config must be a JSON object");
  return doc;
}

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  fail(ErrorCode::kConfig, "config key '" + key + "' must be " + expected);
}

std::string get_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad_type(key, "a string");
  return v.get<std::string>();
}

std::size_t get_size(const std::string& key, const json& v) {
  if (!v.is_number_unsigned()) bad_type(key, "a nonnegative integer");
  return v.get<std::size_t>();
}

std::uint64_t get_u64(const std::string& key, const json& v) {
  if (!v.is_number_unsigned()) bad_type(key, "a nonnegative integer");
  return v.get<std::uint64_t>();
}

double get_double(const std::string& key, const json& v) {
  if (!v.is_number()) bad_type(key, "a number");
  return v.get<double>();
}

std::vector<Point> get_points(const std::string& key, const json& v) {
  if (v.is_string()) return parse_points(v.get<std::string>());
  if (!v.is_array()) bad_type(key, "an array of [s, t] pairs or an \"s:t,...\" string");
  std::vector<Point> out;
  for (const auto& e : v) {
    if (e.is_number()) {
      out.push_back({e.get<double>(), 0.0});
    } else if (e.is_array() && (e.size() == 1 || e.size() == 2) && e[0].is_number() &&
               (e.size() == 1 || e[1].is_number())) {
      out.push_back({e[0].get<double>(), e.size() == 2 ? e[1].get<double>() : 0.0});
    } else {
      bad_type(key, "an array of [s, t] pairs");
    }
  }
  return out;
}

json point_json(Point p, bool one) {
  return one ? json::array({p.s}) : json::array({p.s, p.t});
}

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

json config_json(const ExperimentConfig& c) {
  const bool one = is_one_parameter(c.statistic);
  json points = json::array();
  for (const auto& p : c.points) points.push_back(point_json(p, one));
  json j;
  j["preset"] = c.preset;
  j["ensemble"] = ensemble_name(c.ensemble.kind);
  j["n"] = c.ensemble.n;
  j["statistic"] = statistic_name(c.statistic);
  j["mode"] = mode_name(c.mode);
  j["grid_m"] = c.grid_m;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["points"] = points;
  j["z_threshold"] = c.z_threshold;
  j["se_method"] = se_method_name(c.se_method);
  j["batches"] = c.batches;
  j["fixed_matrix"] = fixed_matrix_name(c.fixed_matrix);
  return j;
}

json probe_config_json(const ProbeConfig& c) {
  json j;
  j["probe"] = probe_name(c.kind);
  j["ensemble"] = ensemble_name(c.ensemble);
  j["n"] = c.sizes;
  j["replicates"] = c.replicates ? json(*c.replicates) : json(nullptr);
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["s"] = c.point.s;
  j["t"] = c.point.t;
  j["sweep"] = c.sweep;
  j["grid_m"] = c.grid_m;
  j["z_threshold"] = c.z_threshold;
  j["se_method"] = se_method_name(c.se_method);
  return j;
}

std::string csv_number(double x) {
  if (std::isfinite(x)) return format_double(x);
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string csv_optional(const std::optional<double>& x) { return x ? csv_number(*x) : ""; }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

void apply_config_json(ExperimentConfig& c, std::string_view text) {
  const json doc = parse_object(text);
  for (const auto& [key, v] : doc.items()) {
    if (key == "preset") {
      c.preset = get_string(key, v);
    } else if (key == "ensemble") {
      c.ensemble.kind = parse_ensemble(get_string(key, v));
    } else if (key == "n") {
      c.ensemble.n = get_size(key, v);
    } else if (key == "statistic") {
      c.statistic = parse_statistic(get_string(key, v));
    } else if (key == "mode") {
      c.mode = parse_mode(get_string(key, v));
    } else if (key == "grid_m") {
      c.grid_m = get_size(key, v);
    } else if (key == "replicates") {
      c.replicates = get_size(key, v);
    } else if (key == "seed") {
      c.seed = get_u64(key, v);
    } else if (key == "points") {
      c.points = get_points(key, v);
    } else if (key == "z_threshold") {
      c.z_threshold = get_double(key, v);
    } else if (key == "se_method") {
      c.se_method = parse_se_method(get_string(key, v));
    } else if (key == "batches") {
      c.batches = get_size(key, v);
    } else if (key == "fixed_matrix") {
      c.fixed_matrix = parse_fixed_matrix(get_string(key, v));
    } else {
      fail(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  }
}

std::string probe_config_to_json(const ProbeConfig& config) {
  return probe_config_json(config).dump(2);
}

void apply_probe_config_json(ProbeConfig& c, std::string_view text) {
  const json doc = parse_object(text);
  for (const auto& [key, v] : doc.items()) {
    if (key == "probe") {
      c.kind = parse_probe(get_string(key, v));
    } else if (key == "ensemble") {
      c.ensemble = parse_ensemble(get_string(key, v));
    } else if (key == "n") {
      c.sizes.clear();
      if (v.is_array()) {
        for (const auto& e : v) c.sizes.push_back(get_size(key, e));
      } else {
        c.sizes.push_back(get_size(key, v));
      }
    } else if (key == "replicates") {
      if (v.is_null()) {
        c.replicates.reset();
      } else {
        c.replicates = get_size(key, v);
      }
    } else if (key == "seed") {
      c.seed = get_u64(key, v);
    } else if (key == "s") {
      c.point.s = get_double(key, v);
    } else if (key == "t") {
      c.point.t = get_double(key, v);
    } else if (key == "sweep") {
      if (!v.is_array()) bad_type(key, "an array of numbers");
      c.sweep.clear();
      for (const auto& e : v) c.sweep.push_back(get_double(key, e));
    } else if (key == "grid_m") {
      c.grid_m = get_size(key, v);
    } else if (key == "z_threshold") {
      c.z_threshold = get_double(key, v);
    } else if (key == "se_method") {
      c.se_method = parse_se_method(get_string(key, v));
    } else {
      fail(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  }
}

std::vector<Point> parse_points(std::string_view text) {
  std::vector<Point> out;
  std::size_t start = 0;
  auto number = [&](std::string_view s) {
    const std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (str.empty() || used != str.size()) {
      fail(ErrorCode::kConfig, "malformed point coordinate '" + str + "'");
    }
    return v;
  };
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      out.push_back({number(item), 0.0});
    } else {
      out.push_back({number(item.substr(0, colon)), number(item.substr(colon + 1))});
    }
    start = end + 1;
  }
  return out;
}

std::string report_to_json(const ExperimentReport& r) {
  const bool one = is_one_parameter(r.config.statistic);
  json j;
  j["schema"] = kReportSchema;
  j["kind"] = "experiment";
  j["preset"] = r.config.preset;
  j["config"] = config_json(r.config);
  j["statistic"] = r.statistic_label;
  json target;
  target["finite_n"] = r.finite_target;
  target["kernel"] = r.limit_kernel ? json(kernel_name(r.limit_kernel->kind)) : json(nullptr);
  target["prefactor"] = r.limit_kernel ? json(r.limit_kernel->prefactor) : json(nullptr);
  j["target"] = target;
  j["se_method"] = se_method_name(r.config.se_method);
  json comps = json::array();
  for (const auto& c : r.comparisons) {
    json e;
    e["section"] = c.section;
    e["p"] = point_json(c.p, one);
    e["q"] = point_json(c.q, one);
    e["emp"] = c.emp;
    e["se"] = c.se;
    e["target"] = c.target;
    e["z"] = c.z;
    e["limit"] = optional_number(c.limit);
    e["z_limit"] = optional_number(c.z_limit);
    e["gate_limit"] = c.gate_limit;
    e["pass"] = c.pass;
    comps.push_back(e);
  }
  j["comparisons"] = comps;
  json ks = json::array();
  for (const auto& k : r.ks) {
    ks.push_back({{"point", point_json(k.p, false)},
                  {"statistic", k.statistic},
                  {"p_value", k.p_value},
                  {"alpha", kKsAlpha},
                  {"pass", k.pass}});
  }
  j["ks"] = ks;
  if (r.fourth_moment) {
    j["fourth_moment"] = {{"point", point_json(r.config.points.front(), one)},
                          {"value", r.fourth_moment->value},
                          {"se", r.fourth_moment->se},
                          {"gaussian", 3.0}};
  } else {
    j["fourth_moment"] = nullptr;
  }
  j["degenerate"] = r.degenerate;
  j["warnings"] = r.warnings;
  j["max_abs_z"] = r.max_abs_z;
  j["verdict"] = verdict_name(r.verdict);
  j["note"] = r.note;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& r) {
  const bool one = is_one_parameter(r.config.statistic);
  std::ostringstream out;
  out << "section,s1,t1,s2,t2,emp,se,target,z,limit,z_limit,p_value,pass\n";
  auto t = [&](double x) { return one ? std::string() : csv_number(x); };
  for (const auto& c : r.comparisons) {
    out << c.section << ',' << csv_number(c.p.s) << ',' << t(c.p.t) << ',' << csv_number(c.q.s)
        << ',' << t(c.q.t) << ',' << csv_number(c.emp) << ',' << csv_number(c.se) << ','
        << csv_number(c.target) << ',' << csv_number(c.z) << ',' << csv_optional(c.limit) << ','
        << csv_optional(c.z_limit) << ",," << (c.pass ? 1 : 0) << '\n';
  }
  for (const auto& k : r.ks) {
    out << "ks," << csv_number(k.p.s) << ',' << csv_number(k.p.t) << ",,,"
        << csv_number(k.statistic) << ",,,,,," << csv_number(k.p_value) << ','
        << (k.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string probe_to_json(const ProbeReport& r) {
  json j;
  j["schema"] = kProbeSchema;
  j["kind"] = probe_name(r.config.kind);
  j["config"] = probe_config_json(r.config);
  j["quantity"] = r.quantity;
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"point", point_json(row.p, false)},
                    {"estimate", row.estimate},
                    {"se", row.se},
                    {"target", optional_number(row.target)},
                    {"z", optional_number(row.z)},
                    {"limit", optional_number(row.limit)},
                    {"z_limit", optional_number(row.z_limit)},
                    {"gate_limit", row.gate_limit},
                    {"pass", row.pass}});
  }
  j["rows"] = rows;
  json conj = json::array();
  for (const auto& row : r.conjecture) {
    conj.push_back({{"n", row.n},
                    {"comparisons", row.comparisons},
                    {"max_abs_z", row.max_abs_z},
                    {"max_abs_z_limit", row.max_abs_z_limit},
                    {"fourth_moment", row.fourth_moment.value},
                    {"fourth_moment_se", row.fourth_moment.se},
                    {"verdict", verdict_name(row.verdict)}});
  }
  j["conjecture"] = conj;
  j["warnings"] = r.warnings;
  j["verdict"] = verdict_name(r.verdict);
  j["note"] = r.note;
  return j.dump(2) + "\n";
}

std::string probe_to_csv(const ProbeReport& r) {
  std::ostringstream out;
  const char* name = probe_name(r.config.kind);
  if (r.config.kind == ProbeKind::kConjecture1 || r.config.kind == ProbeKind::kConjecture2) {
    out << "probe,n,comparisons,max_abs_z,max_abs_z_limit,fourth_moment,fourth_moment_se,verdict\n";
    for (const auto& row : r.conjecture) {
      out << name << ',' << row.n << ',' << row.comparisons << ',' << csv_number(row.max_abs_z)
          << ',' << csv_number(row.max_abs_z_limit) << ',' << csv_number(row.fourth_moment.value)
          << ',' << csv_number(row.fourth_moment.se) << ',' << verdict_name(row.verdict) << '\n';
    }
    return out.str();
  }
  out << "probe,n,s,t,estimate,se,target,z,limit,z_limit,pass\n";
  for (const auto& row : r.rows) {
    out << name << ',' << row.n << ',' << csv_number(row.p.s) << ',' << csv_number(row.p.t) << ','
        << csv_number(row.estimate) << ',' << csv_number(row.se) << ',' << csv_optional(row.target)
        << ',' << csv_optional(row.z) << ',' << csv_optional(row.limit) << ','
        << csv_optional(row.z_limit) << ',' << (row.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string weights_to_csv(const WeightMatrix& w) {
  std::ostringstream out;
  out << "i,j,w\n";
  const std::size_t n = w.n();
  if (w.is_permutation()) {
    for (std::size_t i = 0; i < n; ++i) out << i + 1 << ',' << w.permutation()[i] + 1 << ",1\n";
    return out.str();
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out << i + 1 << ',' << j + 1 << ',' << format_double(w(i, j)) << '\n';
    }
  }
  return out.str();
}

std::string path_to_csv(const GridPath2& path) {
  std::ostringstream out;
  out << "s,t,value\n";
  const Grid& g = path.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t l = 0; l < g.size(); ++l) {
      out << format_double(g.level(k)) << ',' << format_double(g.level(l)) << ','
          << format_double(path.at(k, l)) << '\n';
    }
  }
  return out.str();
}

std::string path_to_csv(const GridPath1& path) {
  std::ostringstream out;
  out << "s,value\n";
  const Grid& g = path.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    out << format_double(g.level(k)) << ',' << format_double(path[k]) << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace bridgetrunc
