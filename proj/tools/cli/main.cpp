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

#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "lindfloq/version.hpp"

namespace {

using lindfloq::cli::CommandLine;

void add_run_options(CLI::App* sub, CommandLine& cl) {
  sub->add_option("--config", cl.config, "JSON config file (or a manifest.json from a previous run)")
      ->check(CLI::ExistingFile);
  sub->add_option("--scenario", cl.scenario, "registered scenario to start from");
  sub->add_option("--out", cl.out, "output directory (default: out)");
  sub->add_option("--workers", cl.workers, "worker threads for scans and sweeps")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", cl.seed, "seed for shot-noise sampling (default: 0)");
  sub->add_option("--tol", cl.tol, "integration and sweep tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--override", cl.overrides, "key=value, repeatable (see list-scenarios --keys)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet-Lindblad simulator for a periodically driven dissipative qubit"};
  app.set_version_flag("--version", std::string(lindfloq::kVersion));
  app.require_subcommand(1);

  CommandLine cl;
  std::vector<CLI::App*> runs;
  runs.push_back(app.add_subcommand("spectrum", "Floquet spectrum over the period grid, with EP candidates"));
  runs.push_back(app.add_subcommand("evolve", "stroboscopic series, micromotion and transient fits"));
  runs.push_back(app.add_subcommand("sweep", "NESS tables over (period, start phase), chirality map"));
  runs.push_back(app.add_subcommand("run", "every stage the scenario enables"));
  for (auto* sub : runs) add_run_options(sub, cl);

  bool show_keys = false;
  auto* list = app.add_subcommand("list-scenarios", "registered scenarios and their stages");
  list->add_flag("--keys", show_keys, "also print every config/override key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lindfloq::cli::kExitConfig;
  }

  if (list->parsed()) {
    lindfloq::cli::list_scenarios(std::cout);
    if (show_keys) {
      for (const auto& key : lindfloq::override_keys()) std::cout << key << '\n';
    }
    return 0;
  }

  lindfloq::cli::RunConfig cfg;
  try {
    cfg = lindfloq::cli::load_config(cl);
  } catch (const lindfloq::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lindfloq::cli::kExitConfig;
  }

  for (auto* sub : runs) {
    if (!sub->parsed()) continue;
    try {
      return lindfloq::cli::run_command(sub->get_name(), cfg, std::cerr);
    } catch (const lindfloq::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return lindfloq::cli::exit_code_for(e);
    }
  }
  return lindfloq::cli::kExitConfig;
}
