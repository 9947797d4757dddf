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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lindfloq/analysis.hpp"
#include "lindfloq/floquet.hpp"

namespace lindfloq {

enum class NessMode { kExact, kTenthPeriod };

std::string_view to_string(NessMode mode);
NessMode parse_ness_mode(std::string_view text);

/// A named parameter set plus the runs to perform with it.
///   spectrum:      period scan over t_grid at phase 0, with EP candidates
///   evolve:        stroboscopic series for each (direction, series period,
///                  start fraction), micromotion from phase 0, optional fits
///   sweep:         NESS tables over t_grid x t0_grid for every direction,
///                  chirality map and the static steady-state reference
struct Scenario {
  std::string name;
  std::string description;
  DriveWaveform waveform;  // `period` and `direction` are defaults for evolve
  DissipationParams dissipation;
  std::string initial_state = "+x";  // a named_state label, or "ness"
  int n_periods = 10;
  int samples_per_period = 50;
  std::vector<double> t_grid;           // us
  std::vector<double> series_periods{0.2};  // us
  std::vector<double> t0_fractions{0.0};    // starts of the stroboscopic series
  int t0_points = 50;                   // sweep phase grid
  std::vector<Direction> directions{Direction::kCW};
  NessMode ness_mode = NessMode::kExact;
  int ness_periods = 10;                // tenth-period mode depth
  long long shots = 0;                  // 0: exact expectations only
  PropagatorOptions propagator;
  double sweep_tol = 1e-6;
  EpOptions ep;
  bool run_spectrum = false;
  bool run_evolve = false;
  bool run_micromotion = false;
  bool run_fits = false;
  bool run_sweep = false;

  /// Throws kInvalidInput naming the offending field.
  void validate() const;
  /// Throws for "ness", which needs a propagator.
  Operator initial_rho() const;
  /// "ness" resolves to the exact fixed point of `p`.
  Operator initial_rho(const PropagatorResult& p) const;
};

/// Named states: "+x", "-x", "g", "e", "mixed".
Operator named_state(std::string_view label);

const std::vector<Scenario>& scenario_registry();
const Scenario& find_scenario(std::string_view name);

/// Applies key=value with dotted keys mirroring the config layout, e.g.
/// "waveform.direction=CCW", "grids.t_grid=0.15:0.65:0.01",
/// "tolerances.integration=1e-8". An unambiguous last segment ("j_max") is
/// accepted as an alias. Shortcuts: "direction" also restricts the run to
/// that direction, "period" also sets the series period, "tol" sets both
/// integration and sweep tolerances. Throws kInvalidInput on unknown keys
/// or malformed values.
void apply_override(Scenario& s, std::string_view key, std::string_view value);

/// All keys apply_override understands, in canonical dotted form.
const std::vector<std::string>& override_keys();

/// Inclusive arithmetic grid start + k step, k = 0..round((stop-start)/step).
std::vector<double> arithmetic_grid(double start, double stop, double step);

/// n start fractions k/n, built so that (1 - f) mod 1 of every entry is
/// again an entry, bit for bit.
std::vector<double> make_t0_grid(int n);

struct SweepCell {
  double period = 0.0;
  double t0_fraction = 0.0;
  std::optional<NessRecord> ness;
  int slices = 0;
  std::string error;
};

struct SweepTable {
  std::string scenario;
  Direction direction = Direction::kCW;
  NessMode mode = NessMode::kExact;
  std::vector<double> periods;
  std::vector<double> t0_fractions;
  std::vector<SweepCell> cells;  // row-major: period index, then t0 index

  const SweepCell& at(std::size_t period_index, std::size_t t0_index) const {
    return cells.at(period_index * t0_fractions.size() + t0_index);
  }
  std::size_t failed() const;
};

/// NESS for every (T, t0) cell, independently and in deterministic order.
/// In tenth-period mode the state is G^ness_periods applied to rho0.
SweepTable ness_sweep(const DriveWaveform& shape, const DissipationParams& d,
                      const std::vector<double>& t_grid, const std::vector<double>& t0_grid,
                      Direction direction, NessMode mode, const PropagatorOptions& opts,
                      unsigned workers = 1, const Operator& rho0 = states::plus_x(),
                      int ness_periods = 10);

struct ChiralityMap {
  std::vector<double> periods;
  std::vector<double> t0_fractions;  // of the CCW table
  std::vector<double> values;        // NaN where either cell failed

  double at(std::size_t period_index, std::size_t t0_index) const {
    return values.at(period_index * t0_fractions.size() + t0_index);
  }
};

/// C(T, f) = trace distance between rho_ccw(T, f) and rho_cw(T, (1 - f) mod 1):
/// the two states sit at the same (J, Delta) point of the loop.
ChiralityMap chirality_map(const SweepTable& ccw, const SweepTable& cw);

struct StaticPoint {
  Direction direction = Direction::kCW;
  double t0_fraction = 0.0;
  ControlPoint control;
  std::optional<Operator> rho;
  BlochRecord bloch;
  std::string error;
};

/// Steady states of the frozen generator L(t0) along the loop.
std::vector<StaticPoint> static_reference(const DriveWaveform& shape, const DissipationParams& d,
                                          const std::vector<double>& t0_grid,
                                          Direction direction);

struct SeriesRun {
  Direction direction = Direction::kCW;
  double period = 0.0;
  double t0_fraction = 0.0;
  int slices = 0;
  StroboscopicSeries series;
  std::optional<FloquetSpectrum> spectrum;
  std::vector<BlochVector> sampled;  // shot-noise estimates when shots > 0
  std::vector<std::pair<Component, ModelSelection>> fits;
  std::vector<std::string> fit_errors;
};

struct MicromotionRun {
  Direction direction = Direction::kCW;
  double period = 0.0;
  int samples_per_period = 0;
  std::vector<BlochRecord> samples;
  /// Trace distance between the states at t and t - T; NaN in the first period.
  std::vector<double> loop_distance;
};

/// Trace distance (half the Bloch distance) between each sample and the one a
/// period earlier, for a trajectory sampled `samples_per_period` times per period.
std::vector<double> loop_distances(const std::vector<BlochRecord>& samples,
                                   int samples_per_period);

struct ResultBundle {
  Scenario scenario;
  std::optional<PeriodScan> scan;
  std::vector<EpCandidate> eps;
  std::string ep_error;
  std::vector<SeriesRun> series;
  std::vector<MicromotionRun> micromotion;
  std::vector<SweepTable> sweeps;
  std::optional<ChiralityMap> chirality;
  std::vector<StaticPoint> statics;
  std::vector<std::string> warnings;

  /// Failed scan points plus failed sweep cells.
  std::size_t failures() const;
};

void run_spectrum(const Scenario& s, ResultBundle& out, unsigned workers = 1);
void run_evolve(const Scenario& s, ResultBundle& out, std::uint64_t seed = 0);
void run_sweep(const Scenario& s, ResultBundle& out, unsigned workers = 1);

/// Runs every stage the scenario enables.
ResultBundle run_scenario(const Scenario& s, unsigned workers = 1, std::uint64_t seed = 0);
ResultBundle run_scenario(std::string_view name,
                          const std::vector<std::pair<std::string, std::string>>& overrides,
                          unsigned workers = 1, std::uint64_t seed = 0);

}  // namespace lindfloq
