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

#include "cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <thread>

#include "cli/writers.hpp"
#include "lindfloq/version.hpp"

namespace lindfloq::cli {

namespace {

using nlohmann::json;

std::string dir_text(Direction d) { return std::string(to_string(d)); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void write_spectrum(const ResultBundle& b, const std::filesystem::path& dir,
                    std::vector<std::string>& files) {
  CsvTable t({"T_us", "branch", "re_lambda", "im_lambda", "min_gap", "eigvec_cond", "warnings"});
  for (const auto& pt : b.scan->points) {
    for (int label = 0; label < 4; ++label) {
      if (!pt.spectrum) {
        t.add({fmt(pt.period), std::to_string(label), "nan", "nan", "nan", "nan", csv_text(pt.error)});
        continue;
      }
      const FloquetSpectrum& s = *pt.spectrum;
      const auto slot = static_cast<std::size_t>(pt.slot_of(label));
      std::string warn;
      if (s.zone_edge) warn = "zone-edge folding";
      t.add({fmt(pt.period), std::to_string(label), fmt(s.eigenvalues[slot].real()),
             fmt(s.eigenvalues[slot].imag()), fmt(s.min_gap), fmt(s.eigvec_condition), warn});
    }
  }
  write_text(dir / "spectrum.csv", t.str());
  files.push_back("spectrum.csv");

  json eps = json::object();
  json list = json::array();
  for (const auto& c : b.eps) {
    list.push_back({{"t_star_us", c.t_star},
                    {"branches", {c.pair[0], c.pair[1]}},
                    {"gap", c.gap},
                    {"overlap", c.overlap},
                    {"eigvec_cond", c.condition}});
  }
  eps["candidates"] = list;
  eps["error"] = b.ep_error.empty() ? json(nullptr) : json(b.ep_error);
  eps["thresholds"] = {{"min_overlap", b.scenario.ep.min_overlap},
                       {"min_condition", b.scenario.ep.min_condition},
                       {"t_tol_us", b.scenario.ep.t_tol}};
  write_json(dir / "eps.json", eps);
  files.push_back("eps.json");
}

json fit_json(const std::optional<TransientFit>& fit, const std::string& error) {
  if (!fit) return {{"error", error}};
  json params = json::object();
  for (std::size_t i = 0; i < fit->params.size(); ++i) params[fit->names[i]] = fit->params[i];
  json cov = json::array();
  for (Eigen::Index r = 0; r < fit->covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < fit->covariance.cols(); ++c) row.push_back(fit->covariance(r, c));
    cov.push_back(row);
  }
  return {{"params", params}, {"covariance", cov}, {"rms", fit->rms}, {"points", fit->points}};
}

void write_evolve(const ResultBundle& b, const std::filesystem::path& dir,
                  std::vector<std::string>& files) {
  if (!b.series.empty()) {
    std::vector<std::string> header{"direction", "T_us", "t0_frac", "n", "t_us", "x", "y", "z",
                                    "entropy", "purity"};
    const bool noisy = b.scenario.shots > 0;
    if (noisy) header.insert(header.end(), {"x_hat", "y_hat", "z_hat"});
    CsvTable t(header);
    for (const auto& run : b.series) {
      for (std::size_t i = 0; i < run.series.records.size(); ++i) {
        const auto& r = run.series.records[i];
        std::vector<std::string> row{dir_text(run.direction), fmt(run.period), fmt(run.t0_fraction),
                                     std::to_string(r.n), fmt(r.bloch.t), fmt(r.bloch.x),
                                     fmt(r.bloch.y), fmt(r.bloch.z), fmt(r.bloch.entropy),
                                     fmt(r.bloch.purity)};
        if (noisy) {
          const BlochVector& s = run.sampled.at(i);
          row.insert(row.end(), {fmt(s.x), fmt(s.y), fmt(s.z)});
        }
        t.add(std::move(row));
      }
    }
    write_text(dir / "stroboscopic.csv", t.str());
    files.push_back("stroboscopic.csv");
  }

  if (!b.micromotion.empty()) {
    CsvTable t({"direction", "T_us", "t_us", "x", "y", "z", "entropy", "loop_distance"});
    for (const auto& run : b.micromotion) {
      for (std::size_t i = 0; i < run.samples.size(); ++i) {
        const BlochRecord& r = run.samples[i];
        t.add({dir_text(run.direction), fmt(run.period), fmt(r.t), fmt(r.x), fmt(r.y), fmt(r.z),
               fmt(r.entropy), fmt(run.loop_distance[i])});
      }
    }
    write_text(dir / "micromotion.csv", t.str());
    files.push_back("micromotion.csv");
  }

  if (b.scenario.run_fits && !b.series.empty()) {
    json list = json::array();
    for (const auto& run : b.series) {
      json entry = {{"direction", dir_text(run.direction)},
                    {"T_us", run.period},
                    {"t0_frac", run.t0_fraction}};
      if (run.spectrum) {
        const Complex slow = run.spectrum->eigenvalues[static_cast<std::size_t>(run.spectrum->slowest())];
        entry["slowest_eigenvalue"] = {{"re", slow.real()}, {"im", slow.imag()}};
      }
      json fits = json::array();
      for (const auto& [component, sel] : run.fits) {
        fits.push_back({{"component", std::string(to_string(component))},
                        {"chosen", std::string(to_string(sel.chosen))},
                        {"improvement", sel.improvement},
                        {"overdamped", fit_json(sel.overdamped, sel.overdamped_error)},
                        {"underdamped", fit_json(sel.underdamped, sel.underdamped_error)}});
      }
      entry["fits"] = fits;
      entry["errors"] = run.fit_errors;
      list.push_back(entry);
    }
    write_json(dir / "fits.json", list);
    files.push_back("fits.json");
  }
}

void write_sweep(const ResultBundle& b, const std::filesystem::path& dir,
                 std::vector<std::string>& files) {
  for (const auto& table : b.sweeps) {
    CsvTable t({"T_us", "t0_frac", "x", "y", "z", "entropy", "purity", "residual", "slices", "status"});
    for (const auto& c : table.cells) {
      if (c.ness) {
        const BlochRecord& r = c.ness->bloch;
        t.add({fmt(c.period), fmt(c.t0_fraction), fmt(r.x), fmt(r.y), fmt(r.z), fmt(r.entropy),
               fmt(r.purity), fmt(c.ness->residual), std::to_string(c.slices), "ok"});
      } else {
        t.add({fmt(c.period), fmt(c.t0_fraction), "nan", "nan", "nan", "nan", "nan", "nan",
               std::to_string(c.slices), csv_text(c.error)});
      }
    }
    const std::string name = "ness_" + lower(to_string(table.direction)) + ".csv";
    write_text(dir / name, t.str());
    files.push_back(name);
  }
  if (b.chirality) {
    const ChiralityMap& m = *b.chirality;
    CsvTable t({"T_us", "t0_frac", "C"});
    for (std::size_t i = 0; i < m.periods.size(); ++i) {
      for (std::size_t j = 0; j < m.t0_fractions.size(); ++j) {
        t.add({fmt(m.periods[i]), fmt(m.t0_fractions[j]), fmt(m.at(i, j))});
      }
    }
    write_text(dir / "chirality.csv", t.str());
    files.push_back("chirality.csv");
  }
  if (!b.statics.empty()) {
    CsvTable t({"direction", "t0_frac", "J", "delta", "x", "y", "z", "entropy", "status"});
    for (const auto& p : b.statics) {
      if (p.rho) {
        t.add({dir_text(p.direction), fmt(p.t0_fraction), fmt(p.control.j), fmt(p.control.delta),
               fmt(p.bloch.x), fmt(p.bloch.y), fmt(p.bloch.z), fmt(p.bloch.entropy), "ok"});
      } else {
        t.add({dir_text(p.direction), fmt(p.t0_fraction), fmt(p.control.j), fmt(p.control.delta),
               "nan", "nan", "nan", "nan", csv_text(p.error)});
      }
    }
    write_text(dir / "static_reference.csv", t.str());
    files.push_back("static_reference.csv");
  }
}

}  // namespace

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kInvalidInput ? kExitConfig : kExitNumerical;
}

std::vector<std::string> write_tables(const ResultBundle& bundle,
                                      const std::filesystem::path& dir) {
  std::vector<std::string> files;
  if (bundle.scan) write_spectrum(bundle, dir, files);
  write_evolve(bundle, dir, files);
  if (!bundle.sweeps.empty()) write_sweep(bundle, dir, files);
  return files;
}

int run_command(std::string_view command, const RunConfig& cfg, std::ostream& log) {
  Scenario s = cfg.scenario;
  if (command == "spectrum") {
    s.run_spectrum = true;
    s.run_evolve = s.run_micromotion = s.run_sweep = s.run_fits = false;
  } else if (command == "evolve") {
    s.run_evolve = s.run_micromotion = true;
    s.run_spectrum = s.run_sweep = false;
  } else if (command == "sweep") {
    s.run_sweep = true;
    s.run_spectrum = s.run_evolve = s.run_micromotion = s.run_fits = false;
  } else if (command != "run") {
    throw Error(ErrorCode::kInvalidInput, "unknown command '" + std::string(command) + "'");
  }
  s.validate();

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::kInvalidInput, "cannot create " + cfg.out_dir.string() + ": " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  const ResultBundle bundle = run_scenario(s, cfg.workers, cfg.seed);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::string> files = write_tables(bundle, cfg.out_dir);
  files.push_back("manifest.json");

  json manifest = {{"tool", "lindfloq"},
                   {"version", std::string(kVersion)},
                   {"command", std::string(command)},
                   {"config", to_document(s, cfg.seed)},
                   {"files", files},
                   {"failures", bundle.failures()},
                   {"warnings", bundle.warnings}};
  write_json(cfg.out_dir / "manifest.json", manifest);

  // Kept apart from the manifest so that every other file is byte-stable.
  json info = {{"command", std::string(command)},
               {"workers", cfg.workers},
               {"hardware_threads", std::thread::hardware_concurrency()},
               {"wall_clock_s", elapsed}};
  write_json(cfg.out_dir / "run_info.json", info);

  for (const auto& w : bundle.warnings) log << "warning: " << w << '\n';
  log << command << ": wrote " << files.size() + 1 << " files to " << cfg.out_dir.string()
      << " in " << fmt(elapsed) << " s\n";
  return bundle.failures() > 0 ? kExitPartial : kExitOk;
}

void list_scenarios(std::ostream& out) {
  for (const auto& s : scenario_registry()) {
    std::string stages;
    auto add = [&stages](bool on, const char* name) {
      if (!on) return;
      if (!stages.empty()) stages += ",";
      stages += name;
    };
    add(s.run_spectrum, "spectrum");
    add(s.run_evolve, "evolve");
    add(s.run_micromotion, "micromotion");
    add(s.run_fits, "fits");
    add(s.run_sweep, "sweep");
    out << s.name << "\t" << stages << "\t" << s.description << '\n';
  }
}

}  // namespace lindfloq::cli
