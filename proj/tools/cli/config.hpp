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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lindfloq/experiments.hpp"

namespace lindfloq::cli {

/// Everything a run needs. Precedence, lowest first: registry scenario,
/// config file, --tol, --override (in order), then --out/--workers/--seed.
struct RunConfig {
  Scenario scenario;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct CommandLine {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> scenario;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::vector<std::string> overrides;  // key=value
};

/// Parameters used when neither --scenario nor the config names one.
Scenario custom_scenario();

/// Throws Error(kInvalidInput) on unreadable files, malformed JSON, unknown
/// keys or invalid values.
RunConfig load_config(const CommandLine& cl);

/// Applies a parsed config document (sections of key/value pairs plus the
/// top-level "scenario", "output", "seed", "workers") on top of `cfg`.
void apply_document(RunConfig& cfg, const nlohmann::json& doc, bool allow_scenario);

/// Full effective configuration in the config-file layout; feeding it back
/// through --config reproduces the run.
nlohmann::json to_document(const Scenario& s, std::uint64_t seed);

}  // namespace lindfloq::cli
