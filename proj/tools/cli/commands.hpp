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

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cli/config.hpp"

namespace lindfloq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitPartial = 4,
};

/// Exit code for an error escaping a run.
int exit_code_for(const Error& e);

/// "spectrum", "evolve", "sweep" or "run" (every stage the scenario enables).
/// Writes the command's tables plus manifest.json and run_info.json into
/// cfg.out_dir and returns the exit code.
int run_command(std::string_view command, const RunConfig& cfg, std::ostream& log);

/// Table files for the stages present in `bundle`; returns their names.
std::vector<std::string> write_tables(const ResultBundle& bundle,
                                      const std::filesystem::path& dir);

void list_scenarios(std::ostream& out);

}  // namespace lindfloq::cli
