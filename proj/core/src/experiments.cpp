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

#include "lindfloq/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "lindfloq/parallel.hpp"

namespace lindfloq {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidInput, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    bad(std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

long long parse_int(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    bad(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int32(std::string_view key, std::string_view text) {
  const long long v = parse_int(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    bad(std::string(key) + ": integer out of range");
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  bad(std::string(key) + ": expected true or false, got '" + t + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(key, item));
  return out;
}

// "a,b,c" or "start:stop:step".
std::vector<double> parse_grid(std::string_view key, std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) bad(std::string(key) + ": range must be start:stop:step");
    return arithmetic_grid(parse_double(key, parts[0]), parse_double(key, parts[1]),
                           parse_double(key, parts[2]));
  }
  return parse_list(key, text);
}

void require_increasing(const std::string& name, const std::vector<double>& v, bool positive) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || (positive && !(v[i] > 0.0))) bad(name + ": entries must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) bad(name + ": entries must be strictly increasing");
  }
}

using Setter = void (*)(Scenario&, std::string_view key, std::string_view value);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"waveform.family", [](Scenario& s, auto, auto v) { s.waveform.family = parse_path_family(trim(v)); }},
      {"waveform.j_max", [](Scenario& s, auto k, auto v) { s.waveform.j_max = parse_double(k, v); }},
      {"waveform.j_min", [](Scenario& s, auto k, auto v) { s.waveform.j_min = parse_double(k, v); }},
      {"waveform.delta_max", [](Scenario& s, auto k, auto v) { s.waveform.delta_max = parse_double(k, v); }},
      {"waveform.direction", [](Scenario& s, auto, auto v) { s.waveform.direction = parse_direction(trim(v)); }},
      {"waveform.period", [](Scenario& s, auto k, auto v) { s.waveform.period = parse_double(k, v); }},
      {"dissipation.gamma_e", [](Scenario& s, auto k, auto v) { s.dissipation.gamma_e = parse_double(k, v); }},
      {"dissipation.gamma_phi", [](Scenario& s, auto k, auto v) { s.dissipation.gamma_phi = parse_double(k, v); }},
      {"evolution.initial_state", [](Scenario& s, auto, auto v) {
         if (trim(v) != "ness") named_state(trim(v));
         s.initial_state = trim(v);
       }},
      {"evolution.n_periods", [](Scenario& s, auto k, auto v) { s.n_periods = parse_int32(k, v); }},
      {"evolution.samples_per_period", [](Scenario& s, auto k, auto v) { s.samples_per_period = parse_int32(k, v); }},
      {"evolution.shots", [](Scenario& s, auto k, auto v) { s.shots = parse_int(k, v); }},
      {"grids.t_grid", [](Scenario& s, auto k, auto v) { s.t_grid = parse_grid(k, v); }},
      {"grids.series_periods", [](Scenario& s, auto k, auto v) { s.series_periods = parse_list(k, v); }},
      {"grids.t0_fractions", [](Scenario& s, auto k, auto v) { s.t0_fractions = parse_list(k, v); }},
      {"grids.t0_points", [](Scenario& s, auto k, auto v) { s.t0_points = parse_int32(k, v); }},
      {"grids.directions", [](Scenario& s, auto, auto v) {
         s.directions.clear();
         for (const auto& item : split(v, ',')) s.directions.push_back(parse_direction(item));
       }},
      {"ness.mode", [](Scenario& s, auto, auto v) { s.ness_mode = parse_ness_mode(trim(v)); }},
      {"ness.periods", [](Scenario& s, auto k, auto v) { s.ness_periods = parse_int32(k, v); }},
      {"tolerances.integration", [](Scenario& s, auto k, auto v) { s.propagator.tol = parse_double(k, v); }},
      {"tolerances.sweep", [](Scenario& s, auto k, auto v) { s.sweep_tol = parse_double(k, v); }},
      {"tolerances.eigen_residual", [](Scenario& s, auto k, auto v) { s.propagator.eigen_residual_tol = parse_double(k, v); }},
      {"tolerances.max_slices", [](Scenario& s, auto k, auto v) { s.propagator.max_slices = parse_int32(k, v); }},
      {"ep.min_overlap", [](Scenario& s, auto k, auto v) { s.ep.min_overlap = parse_double(k, v); }},
      {"ep.min_condition", [](Scenario& s, auto k, auto v) { s.ep.min_condition = parse_double(k, v); }},
      {"ep.t_tol", [](Scenario& s, auto k, auto v) { s.ep.t_tol = parse_double(k, v); }},
      {"stages.spectrum", [](Scenario& s, auto k, auto v) { s.run_spectrum = parse_bool(k, v); }},
      {"stages.evolve", [](Scenario& s, auto k, auto v) { s.run_evolve = parse_bool(k, v); }},
      {"stages.micromotion", [](Scenario& s, auto k, auto v) { s.run_micromotion = parse_bool(k, v); }},
      {"stages.fits", [](Scenario& s, auto k, auto v) { s.run_fits = parse_bool(k, v); }},
      {"stages.sweep", [](Scenario& s, auto k, auto v) { s.run_sweep = parse_bool(k, v); }},
  };
  return table;
}

// Shortcuts that set a field together with the lists that depend on it.
const std::map<std::string, Setter, std::less<>>& shortcuts() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"direction", [](Scenario& s, auto, auto v) {
         s.waveform.direction = parse_direction(trim(v));
         s.directions = {s.waveform.direction};
       }},
      {"period", [](Scenario& s, auto k, auto v) {
         s.waveform.period = parse_double(k, v);
         s.series_periods = {s.waveform.period};
       }},
      {"tol", [](Scenario& s, auto k, auto v) {
         s.propagator.tol = parse_double(k, v);
         s.sweep_tol = s.propagator.tol;
       }},
  };
  return table;
}

// Last dotted segment when it is unambiguous and not a shortcut.
const std::map<std::string, std::string, std::less<>>& aliases() {
  static const std::map<std::string, std::string, std::less<>> table = [] {
    std::map<std::string, int> count;
    for (const auto& [key, _] : setters()) ++count[key.substr(key.find('.') + 1)];
    std::map<std::string, std::string, std::less<>> out;
    for (const auto& [key, _] : setters()) {
      const std::string tail = key.substr(key.find('.') + 1);
      if (count[tail] == 1 && !shortcuts().contains(tail)) out.emplace(tail, key);
    }
    return out;
  }();
  return table;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Scenario base_scenario(std::string name, std::string description) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.waveform.family = PathFamily::kCircle;
  s.waveform.j_max = 20.0;
  s.waveform.delta_max = 2.0 * kPi;
  s.waveform.direction = Direction::kCW;
  s.waveform.period = 0.2;
  s.dissipation = {4.0, 0.0};
  s.initial_state = "+x";
  s.directions = {Direction::kCW};
  return s;
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> out;

  Scenario fig1 = base_scenario("fig1", "spectrum vs period and stroboscopic x at T = 0.2, 0.6 us");
  fig1.t_grid = arithmetic_grid(0.15, 0.65, 0.01);
  fig1.series_periods = {0.2, 0.6};
  fig1.t0_fractions = {0.0};
  fig1.run_spectrum = true;
  fig1.run_evolve = true;
  fig1.run_fits = true;
  out.push_back(fig1);

  Scenario fig2 = base_scenario("fig2", "micromotion at T = 0.2 us and shifted stroboscopic series with fits");
  fig2.dissipation = {4.7, 0.3};
  fig2.series_periods = {0.2};
  fig2.t0_fractions = {0.2, 0.5, 0.8};
  fig2.run_evolve = true;
  fig2.run_micromotion = true;
  fig2.run_fits = true;
  out.push_back(fig2);

  Scenario fig2_si = fig2;
  fig2_si.name = "fig2_si";
  fig2_si.description = "micromotion at T = 0.6 us and shifted stroboscopic series with fits";
  fig2_si.waveform.period = 0.6;
  fig2_si.series_periods = {0.6};
  fig2_si.t0_fractions = {0.1, 0.4, 0.7};
  out.push_back(fig2_si);

  Scenario fig3 = base_scenario("fig3", "NESS sweeps over period and start phase, both directions");
  fig3.t_grid = arithmetic_grid(0.15, 0.65, 0.01);
  fig3.t0_points = 50;
  fig3.directions = {Direction::kCCW, Direction::kCW};
  fig3.run_sweep = true;
  out.push_back(fig3);

  Scenario fig3_si = fig3;
  fig3_si.name = "fig3_si";
  fig3_si.description = "NESS sweeps on a finer period and phase grid";
  fig3_si.t_grid = arithmetic_grid(0.15, 0.65, 0.005);
  fig3_si.t0_points = 100;
  out.push_back(fig3_si);

  Scenario fig4 = base_scenario("fig4", "cos-squared loop at T = 1 us from |-x>, six periods, both directions");
  fig4.waveform.family = PathFamily::kCosSquared;
  fig4.waveform.j_max = 18.0;
  fig4.waveform.j_min = 0.1;
  fig4.waveform.delta_max = 10.0 * kPi;
  fig4.waveform.period = 1.0;
  fig4.dissipation = {4.7, 0.3};
  fig4.initial_state = "-x";
  fig4.n_periods = 6;
  fig4.samples_per_period = 100;
  fig4.series_periods = {1.0};
  fig4.t0_fractions = {0.0};
  fig4.directions = {Direction::kCCW, Direction::kCW};
  fig4.run_evolve = true;
  fig4.run_micromotion = true;
  out.push_back(fig4);

  return out;
}

}  // namespace

std::string_view to_string(NessMode mode) {
  return mode == NessMode::kExact ? "exact" : "tenth_period";
}

NessMode parse_ness_mode(std::string_view text) {
  if (text == "exact") return NessMode::kExact;
  if (text == "tenth_period") return NessMode::kTenthPeriod;
  bad("unknown NESS mode '" + std::string(text) + "'");
}

Operator named_state(std::string_view label) {
  if (label == "+x") return states::plus_x();
  if (label == "-x") return states::minus_x();
  if (label == "g") return states::ground();
  if (label == "e") return states::excited();
  if (label == "mixed") return states::maximally_mixed();
  bad("unknown initial state '" + std::string(label) + "' (use +x, -x, g, e, mixed)");
}

Operator Scenario::initial_rho() const {
  if (initial_state == "ness") bad("the 'ness' initial state depends on the propagator");
  return named_state(initial_state);
}

Operator Scenario::initial_rho(const PropagatorResult& p) const {
  if (initial_state == "ness") return ness_from_propagator(p, propagator.eigen_residual_tol).rho;
  return named_state(initial_state);
}

void Scenario::validate() const {
  waveform.validate();
  dissipation.validate();
  if (initial_state != "ness") named_state(initial_state);
  if (initial_state == "ness" && run_sweep && ness_mode == NessMode::kTenthPeriod) {
    bad("evolution.initial_state 'ness' cannot seed the tenth-period sweep");
  }
  if (n_periods < 0) bad("evolution.n_periods must be >= 0");
  if (samples_per_period < 2) bad("evolution.samples_per_period must be >= 2");
  if (shots < 0) bad("evolution.shots must be >= 0");
  require_increasing("grids.t_grid", t_grid, true);
  for (double t : series_periods) {
    if (!std::isfinite(t) || !(t > 0.0)) bad("grids.series_periods: entries must be positive");
  }
  for (double f : t0_fractions) {
    if (!std::isfinite(f) || f < 0.0 || f >= 1.0) bad("grids.t0_fractions: entries must lie in [0, 1)");
  }
  if (t0_points < 1) bad("grids.t0_points must be >= 1");
  if (directions.empty()) bad("grids.directions must not be empty");
  if (std::set<Direction>(directions.begin(), directions.end()).size() != directions.size()) {
    bad("grids.directions has duplicates");
  }
  if (ness_periods < 0) bad("ness.periods must be >= 0");
  if (!(propagator.tol > 0.0)) bad("tolerances.integration must be > 0");
  if (!(sweep_tol > 0.0)) bad("tolerances.sweep must be > 0");
  if (!(propagator.eigen_residual_tol > 0.0)) bad("tolerances.eigen_residual must be > 0");
  if (propagator.max_slices < propagator.initial_slices) bad("tolerances.max_slices too small");
  if (!(ep.min_overlap > 0.0) || !(ep.min_condition > 0.0) || !(ep.t_tol > 0.0)) {
    bad("ep thresholds must be > 0");
  }
  if ((run_spectrum || run_sweep) && t_grid.empty()) bad("grids.t_grid is empty");
  if (run_evolve && (series_periods.empty() || t0_fractions.empty())) {
    bad("evolve needs grids.series_periods and grids.t0_fractions");
  }
  if (run_micromotion && series_periods.empty()) bad("micromotion needs grids.series_periods");
}

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

const Scenario& find_scenario(std::string_view name) {
  for (const auto& s : scenario_registry()) {
    if (s.name == name) return s;
  }
  bad("unknown scenario '" + std::string(name) + "'");
}

void apply_override(Scenario& s, std::string_view key, std::string_view value) {
  std::string canonical(trim(key));
  if (const auto sc = shortcuts().find(canonical); sc != shortcuts().end()) {
    sc->second(s, canonical, value);
    return;
  }
  if (const auto a = aliases().find(canonical); a != aliases().end()) canonical = a->second;
  const auto it = setters().find(canonical);
  if (it == setters().end()) bad("unknown key '" + std::string(key) + "'");
  it->second(s, canonical, value);
}

const std::vector<std::string>& override_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [key, _] : setters()) out.push_back(key);
    return out;
  }();
  return keys;
}

std::vector<double> arithmetic_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !(step > 0.0) || stop < start) {
    bad("grid range needs finite start <= stop and step > 0");
  }
  const double count = std::round((stop - start) / step);
  if (count > 1e6) bad("grid range has too many points");
  std::vector<double> out;
  for (long long k = 0; k <= static_cast<long long>(count); ++k) {
    out.push_back(start + static_cast<double>(k) * step);
  }
  return out;
}

std::vector<double> make_t0_grid(int n) {
  if (n < 1) bad("t0 grid needs at least one point");
  std::vector<double> f(static_cast<std::size_t>(n), 0.0);
  for (int j = (n + 1) / 2; j < n; ++j) {
    f[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(n);
  }
  for (int j = 1; j < (n + 1) / 2; ++j) {
    f[static_cast<std::size_t>(j)] = 1.0 - f[static_cast<std::size_t>(n - j)];
  }
  return f;
}

std::size_t SweepTable::failed() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return !c.ness; }));
}

SweepTable ness_sweep(const DriveWaveform& shape, const DissipationParams& d,
                      const std::vector<double>& t_grid, const std::vector<double>& t0_grid,
                      Direction direction, NessMode mode, const PropagatorOptions& opts,
                      unsigned workers, const Operator& rho0, int ness_periods) {
  require_increasing("t_grid", t_grid, true);
  if (t0_grid.empty()) bad("t0 grid is empty");
  for (double f : t0_grid) {
    if (!std::isfinite(f) || f < 0.0 || f >= 1.0) bad("t0 fractions must lie in [0, 1)");
  }
  d.validate();
  if (mode == NessMode::kTenthPeriod) validate_state(rho0);

  SweepTable table;
  table.direction = direction;
  table.mode = mode;
  table.periods = t_grid;
  table.t0_fractions = t0_grid;
  table.cells.resize(t_grid.size() * t0_grid.size());

  parallel_for(table.cells.size(), workers, [&](std::size_t idx) {
    SweepCell& cell = table.cells[idx];
    cell.period = t_grid[idx / t0_grid.size()];
    cell.t0_fraction = t0_grid[idx % t0_grid.size()];
    try {
      const DriveWaveform w = shape.with_period(cell.period).with_direction(direction);
      const PropagatorResult p = propagate_from_phase(w, d, cell.t0_fraction, opts);
      cell.slices = p.slices;
      cell.ness = mode == NessMode::kExact
                      ? ness_from_propagator(p, opts.eigen_residual_tol)
                      : tenth_period_ness(p, rho0, ness_periods);
    } catch (const Error& e) {
      cell.error = e.what();
    }
  });
  return table;
}

ChiralityMap chirality_map(const SweepTable& ccw, const SweepTable& cw) {
  if (ccw.direction != Direction::kCCW || cw.direction != Direction::kCW) {
    bad("chirality map needs a CCW and a CW table");
  }
  if (ccw.periods != cw.periods || ccw.t0_fractions != cw.t0_fractions) {
    bad("chirality map needs tables on identical axes");
  }
  const auto& f = ccw.t0_fractions;
  std::vector<std::size_t> partner(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double target = f[j] == 0.0 ? 0.0 : 1.0 - f[j];
    const auto it = std::find(f.begin(), f.end(), target);
    if (it == f.end()) bad("t0 grid is not closed under f -> (1 - f) mod 1");
    partner[j] = static_cast<std::size_t>(it - f.begin());
  }

  ChiralityMap map;
  map.periods = ccw.periods;
  map.t0_fractions = f;
  map.values.resize(ccw.cells.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < ccw.periods.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const SweepCell& a = ccw.at(i, j);
      const SweepCell& b = cw.at(i, partner[j]);
      if (a.ness && b.ness) map.values[i * f.size() + j] = trace_distance(a.ness->rho, b.ness->rho);
    }
  }
  return map;
}

std::vector<StaticPoint> static_reference(const DriveWaveform& shape, const DissipationParams& d,
                                          const std::vector<double>& t0_grid,
                                          Direction direction) {
  const DriveWaveform w = shape.with_direction(direction);
  const LiouvillianParts parts(d);
  std::vector<StaticPoint> out;
  for (double f : t0_grid) {
    StaticPoint pt;
    pt.direction = direction;
    pt.t0_fraction = f;
    pt.control = drive_at_phase(w, f);
    try {
      pt.rho = static_steady_state(parts.at(pt.control));
      pt.bloch = make_bloch_record(*pt.rho, f * w.period);
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<double> loop_distances(const std::vector<BlochRecord>& samples,
                                   int samples_per_period) {
  if (samples_per_period < 1) bad("samples_per_period must be >= 1");
  const auto lag = static_cast<std::size_t>(samples_per_period);
  std::vector<double> out(samples.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = lag; i < samples.size(); ++i) {
    const BlochRecord& a = samples[i];
    const BlochRecord& b = samples[i - lag];
    out[i] = 0.5 * std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                             (a.z - b.z) * (a.z - b.z));
  }
  return out;
}

std::size_t ResultBundle::failures() const {
  std::size_t n = 0;
  if (scan) {
    for (const auto& p : scan->points) n += p.spectrum ? 0 : 1;
  }
  for (const auto& t : sweeps) n += t.failed();
  return n;
}

void run_spectrum(const Scenario& s, ResultBundle& out, unsigned workers) {
  out.scan = period_scan(s.waveform, s.dissipation, s.t_grid, 0.0, s.propagator, workers);
  for (const auto& p : out.scan->points) {
    if (!p.spectrum) out.warnings.push_back("spectrum at T=" + std::to_string(p.period) + ": " + p.error);
  }
  try {
    out.eps = find_ep(*out.scan, s.waveform, s.dissipation, 0.0, s.propagator, s.ep);
  } catch (const Error& e) {
    out.ep_error = e.what();
    out.warnings.push_back("ep search: " + out.ep_error);
  }
}

void run_evolve(const Scenario& s, ResultBundle& out, std::uint64_t seed) {
  std::uint64_t run_index = 0;
  for (Direction dir : s.directions) {
    for (double period : s.series_periods) {
      const DriveWaveform w = s.waveform.with_period(period).with_direction(dir);
      for (double f : s.t0_fractions) {
        SeriesRun run;
        run.direction = dir;
        run.period = period;
        run.t0_fraction = f;
        const PropagatorResult p = propagate_from_phase(w, s.dissipation, f, s.propagator);
        run.slices = p.slices;
        run.series = stroboscopic_evolve(p, s.initial_rho(p), s.n_periods);
        try {
          run.spectrum = effective_spectrum(p, s.propagator.eigen_residual_tol);
        } catch (const Error& e) {
          out.warnings.push_back("spectrum of series: " + std::string(e.what()));
        }
        if (s.shots > 0) {
          for (const auto& rec : run.series.records) {
            const std::uint64_t stream =
                splitmix(seed ^ splitmix(run_index * 0x100000001ULL + static_cast<std::uint64_t>(rec.n)));
            run.sampled.push_back(sample_tomography(rec.rho, s.shots, stream));
          }
        }
        if (s.run_fits) {
          std::vector<Complex> seeds;
          if (run.spectrum) {
            for (int k : run.spectrum->nontrivial()) seeds.push_back(run.spectrum->eigenvalues[static_cast<std::size_t>(k)]);
          }
          for (Component c : {Component::kX, Component::kY, Component::kZ}) {
            try {
              run.fits.emplace_back(c, select_transient_model(run.series, c, seeds));
            } catch (const Error& e) {
              run.fit_errors.push_back(std::string(to_string(c)) + ": " + e.what());
            }
          }
        }
        out.series.push_back(std::move(run));
        ++run_index;
      }
    }
  }
  if (s.run_micromotion) {
    for (Direction dir : s.directions) {
      for (double period : s.series_periods) {
        const DriveWaveform w = s.waveform.with_period(period).with_direction(dir);
        MicromotionRun run;
        run.direction = dir;
        run.period = period;
        run.samples_per_period = s.samples_per_period;
        const Operator rho0 = s.initial_state == "ness"
                                  ? s.initial_rho(propagate_period(w, s.dissipation, 0.0, s.propagator))
                                  : s.initial_rho();
        run.samples = micromotion(w, s.dissipation, rho0, s.n_periods, s.samples_per_period,
                                  s.propagator, 0.0);
        run.loop_distance = loop_distances(run.samples, s.samples_per_period);
        out.micromotion.push_back(std::move(run));
      }
    }
  }
}

void run_sweep(const Scenario& s, ResultBundle& out, unsigned workers) {
  const std::vector<double> t0_grid = make_t0_grid(s.t0_points);
  PropagatorOptions opts = s.propagator;
  opts.tol = s.sweep_tol;
  const Operator rho0 = s.initial_state == "ness" ? states::plus_x() : s.initial_rho();
  for (Direction dir : s.directions) {
    SweepTable table = ness_sweep(s.waveform, s.dissipation, s.t_grid, t0_grid, dir,
                                  s.ness_mode, opts, workers, rho0, s.ness_periods);
    table.scenario = s.name;
    for (const auto& c : table.cells) {
      if (!c.ness) {
        out.warnings.push_back("sweep " + std::string(to_string(dir)) + " T=" +
                               std::to_string(c.period) + " f=" + std::to_string(c.t0_fraction) +
                               ": " + c.error);
      }
    }
    out.sweeps.push_back(std::move(table));
    auto statics = static_reference(s.waveform, s.dissipation, t0_grid, dir);
    out.statics.insert(out.statics.end(), statics.begin(), statics.end());
  }
  const SweepTable* ccw = nullptr;
  const SweepTable* cw = nullptr;
  for (const auto& t : out.sweeps) (t.direction == Direction::kCCW ? ccw : cw) = &t;
  if (ccw && cw) out.chirality = chirality_map(*ccw, *cw);
}

ResultBundle run_scenario(const Scenario& s, unsigned workers, std::uint64_t seed) {
  s.validate();
  ResultBundle out;
  out.scenario = s;
  if (s.run_spectrum) run_spectrum(s, out, workers);
  if (s.run_evolve || s.run_micromotion) {
    Scenario e = s;
    if (!s.run_evolve) e.t0_fractions.clear();
    run_evolve(e, out, seed);
  }
  if (s.run_sweep) run_sweep(s, out, workers);
  return out;
}

ResultBundle run_scenario(std::string_view name,
                          const std::vector<std::pair<std::string, std::string>>& overrides,
                          unsigned workers, std::uint64_t seed) {
  Scenario s = find_scenario(name);
  for (const auto& [k, v] : overrides) apply_override(s, k, v);
  return run_scenario(s, workers, seed);
}

}  // namespace lindfloq
