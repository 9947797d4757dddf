// Copyright 2026 The lindfloq Authors
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

#include "cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lindfloq::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidInput, what); }

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scalar_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return number_text(v.get<double>());
  bad(key + ": expected a scalar value");
}

std::string value_text(const std::string& key, const nlohmann::json& v) {
  if (!v.is_array()) return scalar_text(key, v);
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += scalar_text(key, v[i]);
  }
  return out;
}

nlohmann::json numbers(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

Scenario custom_scenario() {
  Scenario s;
  s.name = "custom";
  s.description = "parameters from the config file and overrides";
  return s;
}

void apply_document(RunConfig& cfg, const nlohmann::json& doc, bool allow_scenario) {
  if (!doc.is_object()) bad("config: top level must be an object");
  if (allow_scenario && doc.contains("scenario")) {
    if (!doc["scenario"].is_string()) bad("config: 'scenario' must be a string");
    cfg.scenario = find_scenario(doc["scenario"].get<std::string>());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario" || key == "description") continue;
    if (key == "output") {
      if (!value.is_string()) bad("config: 'output' must be a string");
      cfg.out_dir = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        bad("config: 'seed' must be a non-negative integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "workers") {
      if (!value.is_number_integer() || value.get<long long>() < 1) bad("config: 'workers' must be >= 1");
      cfg.workers = value.get<unsigned>();
    } else if (value.is_object()) {
      for (const auto& [field, v] : value.items()) {
        const std::string dotted = key + "." + field;
        apply_override(cfg.scenario, dotted, value_text(dotted, v));
      }
    } else {
      bad("config: unknown key '" + key + "'");
    }
  }
}

RunConfig load_config(const CommandLine& cl) {
  RunConfig cfg;
  cfg.scenario = custom_scenario();
  if (cl.scenario) cfg.scenario = find_scenario(*cl.scenario);

  if (cl.config) {
    std::ifstream in(*cl.config);
    if (!in) bad("cannot read config file " + cl.config->string());
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      bad("config " + cl.config->string() + ": " + e.what());
    }
    // A manifest from an earlier run carries its full config under "config".
    if (doc.is_object() && doc.contains("tool") && doc.contains("config")) {
      doc = nlohmann::json(doc["config"]);
    }
    apply_document(cfg, doc, !cl.scenario);
  }
  if (cl.tol) {
    apply_override(cfg.scenario, "tolerances.integration", number_text(*cl.tol));
    apply_override(cfg.scenario, "tolerances.sweep", number_text(*cl.tol));
  }
  for (const auto& item : cl.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) bad("override '" + item + "' is not key=value");
    apply_override(cfg.scenario, item.substr(0, eq), item.substr(eq + 1));
  }
  if (cl.out) cfg.out_dir = *cl.out;
  if (cl.workers) {
    if (*cl.workers < 1) bad("--workers must be >= 1");
    cfg.workers = *cl.workers;
  }
  if (cl.seed) cfg.seed = *cl.seed;
  cfg.scenario.validate();
  return cfg;
}

nlohmann::json to_document(const Scenario& s, std::uint64_t seed) {
  using nlohmann::json;
  json directions = json::array();
  for (Direction d : s.directions) directions.push_back(std::string(to_string(d)));
  json doc = json::object();
  doc["scenario"] = s.name;
  doc["description"] = s.description;
  doc["seed"] = seed;
  doc["waveform"] = {
      {"family", std::string(to_string(s.waveform.family))},
      {"j_max", s.waveform.j_max},
      {"j_min", s.waveform.j_min},
      {"delta_max", s.waveform.delta_max},
      {"direction", std::string(to_string(s.waveform.direction))},
      {"period", s.waveform.period},
  };
  doc["dissipation"] = {{"gamma_e", s.dissipation.gamma_e}, {"gamma_phi", s.dissipation.gamma_phi}};
  doc["evolution"] = {
      {"initial_state", s.initial_state},
      {"n_periods", s.n_periods},
      {"samples_per_period", s.samples_per_period},
      {"shots", s.shots},
  };
  // Order matters on reload: waveform.direction/period reset these lists.
  doc["grids"] = {
      {"t_grid", numbers(s.t_grid)},
      {"series_periods", numbers(s.series_periods)},
      {"t0_fractions", numbers(s.t0_fractions)},
      {"t0_points", s.t0_points},
      {"directions", directions},
  };
  doc["ness"] = {{"mode", std::string(to_string(s.ness_mode))}, {"periods", s.ness_periods}};
  doc["tolerances"] = {
      {"integration", s.propagator.tol},
      {"sweep", s.sweep_tol},
      {"eigen_residual", s.propagator.eigen_residual_tol},
      {"max_slices", s.propagator.max_slices},
  };
  doc["ep"] = {{"min_overlap", s.ep.min_overlap},
               {"min_condition", s.ep.min_condition},
               {"t_tol", s.ep.t_tol}};
  doc["stages"] = {{"spectrum", s.run_spectrum},
                   {"evolve", s.run_evolve},
                   {"micromotion", s.run_micromotion},
                   {"fits", s.run_fits},
                   {"sweep", s.run_sweep}};
  return doc;
}

}  // namespace lindfloq::cli
