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

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lindfloq/lindblad.hpp"
#include "lindfloq/observables.hpp"

namespace lindfloq {

/// Slice-doubling control for the time-ordered product. The product is
/// refined from `initial_slices` by doubling until two successive products
/// differ by less than `tol` (Frobenius).
struct PropagatorOptions {
  double tol = 1e-9;
  int initial_slices = 64;
  int max_slices = 1 << 20;
  double eigen_residual_tol = 1e-10;
};

/// One-period map G(t0, t0 + T) acting on column-stacked density matrices.
struct PropagatorResult {
  Superoperator g;
  DriveWaveform waveform;
  DissipationParams dissipation;
  double t0 = 0.0;     // us
  double phase = 0.0;  // t0 / T in turns, in [0, 1)
  int slices = 0;
  double error_estimate = 0.0;

  double period() const { return waveform.period; }
};

/// Ordered product of midpoint exponentials expm(dt L(t_k + dt/2)) over
/// `slices` equal slices covering [phase_start, phase_start + phase_span)
/// turns of the drive.
Superoperator slice_product(const DriveWaveform& w, const DissipationParams& d,
                            double phase_start, double phase_span, int slices);

PropagatorResult propagate_period(const DriveWaveform& w, const DissipationParams& d,
                                  double t0, const PropagatorOptions& opts = {});

/// Same as propagate_period with the start given in turns.
PropagatorResult propagate_from_phase(const DriveWaveform& w, const DissipationParams& d,
                                      double phase, const PropagatorOptions& opts = {});

/// One-period propagator started at t0; its spectrum does not depend on t0.
PropagatorResult shifted_propagator(const DriveWaveform& w, const DissipationParams& d,
                                    double t0, const PropagatorOptions& opts = {});

/// G(t_start, t_end) for an arbitrary window, with the same refinement rule.
PropagatorResult propagate_interval(const DriveWaveform& w, const DissipationParams& d,
                                    double t_start, double t_end,
                                    const PropagatorOptions& opts = {});

/// Eigendata of the effective Floquet Liouvillian, principal branch.
struct FloquetSpectrum {
  double period = 0.0;
  double t0 = 0.0;
  std::array<Complex, 4> eigenvalues{};   // 1/us
  std::array<Complex, 4> multipliers{};   // eigenvalues of G
  Superoperator eigenvectors;             // unit columns, same order
  int ness_index = 0;
  double min_gap = 0.0;           // among the three nontrivial modes
  double eigvec_condition = 1.0;  // of the three nontrivial eigenvector columns
  bool zone_edge = false;         // some |Im lambda| sits at pi/T (branch folding)

  std::array<int, 3> nontrivial() const;
  /// Nontrivial mode with the largest real part.
  int slowest() const;
};

FloquetSpectrum effective_spectrum(const PropagatorResult& p, double eigen_residual_tol = 1e-10);

/// Dense V log(Lambda) V^-1; refused (kNumericalFailure) when the full
/// eigenvector matrix has condition number >= 1e6.
Superoperator effective_generator(const FloquetSpectrum& s);

struct ScanPoint {
  double period = 0.0;
  std::optional<FloquetSpectrum> spectrum;
  std::string error;
  /// branch[i] is the branch label carried by eigenvalue slot i.
  std::array<int, 4> branch{0, 1, 2, 3};

  /// Slot carrying `label`, or -1.
  int slot_of(int label) const;
};

struct PeriodScan {
  std::vector<ScanPoint> points;
};

/// Permutation perm with perm[j] = slot in `from` matched to slot j in `to`,
/// maximizing the summed eigenvector overlaps.
std::array<int, 4> match_by_overlap(const Superoperator& from, const Superoperator& to);

/// Spectrum for every period of t_grid (strictly increasing, positive).
/// Grid points are independent and may run on `workers` threads; failed
/// points carry an error message instead of a spectrum.
PeriodScan period_scan(const DriveWaveform& shape, const DissipationParams& d,
                       std::span<const double> t_grid, double t0,
                       const PropagatorOptions& opts = {}, unsigned workers = 1);

struct EpOptions {
  double min_overlap = 0.99;
  double min_condition = 1e3;
  double t_tol = 1e-4;     // us, bracket width always reached
  double t_floor = 1e-11;  // us, narrowest bracket tried while thresholds fail
  int max_iterations = 200;
};

struct EpCandidate {
  double t_star = 0.0;
  std::array<int, 2> pair{0, 0};  // branch labels
  double gap = 0.0;
  double overlap = 0.0;
  double condition = 0.0;
};

using SpectrumEvaluator = std::function<FloquetSpectrum(double period)>;

std::vector<EpCandidate> find_ep(const PeriodScan& scan, const SpectrumEvaluator& evaluate,
                                 const EpOptions& opts = {});

std::vector<EpCandidate> find_ep(const PeriodScan& scan, const DriveWaveform& shape,
                                 const DissipationParams& d, double t0,
                                 const PropagatorOptions& popts = {},
                                 const EpOptions& opts = {});

struct StroboscopicPoint {
  int n = 0;
  BlochRecord bloch;
  Operator rho;
};

struct StroboscopicSeries {
  double t0 = 0.0;
  double period = 0.0;
  std::vector<StroboscopicPoint> records;
};

StroboscopicSeries stroboscopic_evolve(const PropagatorResult& p, const ComplexMatrix& rho0,
                                       int n_periods);

/// Dense trajectory from t0 to t0 + n_periods T, sampled `samples_per_period`
/// times per period plus the final point. Uses the slice count of the
/// converged one-period product; samples falling inside a slice are reached
/// with a partial midpoint step.
std::vector<BlochRecord> micromotion(const DriveWaveform& w, const DissipationParams& d,
                                     const ComplexMatrix& rho0, int n_periods,
                                     int samples_per_period,
                                     const PropagatorOptions& opts = {}, double t0 = 0.0);

}  // namespace lindfloq
