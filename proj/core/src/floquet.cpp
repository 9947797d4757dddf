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

#include "lindfloq/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "lindfloq/parallel.hpp"

namespace lindfloq {

namespace {

double reduce_turns(double phase) {
  double p = phase - std::floor(phase);
  return p >= 1.0 ? 0.0 : p;
}

PropagatorResult refine(const DriveWaveform& w, const DissipationParams& d, double phase_start,
                        double phase_span, const PropagatorOptions& opts) {
  w.validate();
  d.validate();
  if (!(opts.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "integration tolerance must be positive");
  }
  if (opts.initial_slices < 1 || opts.max_slices < opts.initial_slices) {
    throw Error(ErrorCode::kInvalidInput, "invalid slice limits");
  }

  PropagatorResult out;
  out.waveform = w;
  out.dissipation = d;
  out.phase = phase_start;
  out.t0 = phase_start * w.period;

  int slices = opts.initial_slices;
  Superoperator coarse = slice_product(w, d, phase_start, phase_span, slices);
  double diff = std::numeric_limits<double>::infinity();
  while (slices <= opts.max_slices / 2) {
    slices *= 2;
    Superoperator fine = slice_product(w, d, phase_start, phase_span, slices);
    diff = (fine - coarse).norm();
    coarse = fine;
    if (diff < opts.tol) {
      out.g = fine;
      out.slices = slices;
      out.error_estimate = diff;
      return out;
    }
  }
  throw Error(ErrorCode::kIntegrationFailure,
              "slice product did not converge within " + std::to_string(opts.max_slices) +
                  " slices",
              {diff, static_cast<double>(slices), opts.tol});
}

// Nontrivial pair whose eigenvectors are most nearly parallel: the pair
// that coalesces at an EP. Distinct from the closest pair, which may be an
// ordinary crossing with orthogonal-ish eigenvectors.
std::array<int, 2> coalescing_pair(const FloquetSpectrum& s, double* overlap = nullptr) {
  const auto modes = s.nontrivial();
  std::array<int, 2> best{modes[0], modes[1]};
  double most = -1.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double ov = std::abs(s.eigenvectors.col(modes[a]).dot(s.eigenvectors.col(modes[b])));
      if (ov > most) {
        most = ov;
        best = {modes[a], modes[b]};
      }
    }
  }
  if (overlap) *overlap = most;
  return best;
}

double pair_gap(const FloquetSpectrum& s) {
  const auto pair = coalescing_pair(s);
  return std::abs(s.eigenvalues[pair[0]] - s.eigenvalues[pair[1]]);
}

}  // namespace

Superoperator slice_product(const DriveWaveform& w, const DissipationParams& d,
                            double phase_start, double phase_span, int slices) {
  const LiouvillianParts parts(d);
  const double dt = phase_span * w.period / slices;
  Superoperator g = Superoperator::Identity();
  for (int k = 0; k < slices; ++k) {
    const double phase = phase_start + phase_span * ((k + 0.5) / slices);
    const Superoperator step = expm(Superoperator(dt * parts.at(drive_at_phase(w, phase))));
    g = step * g;
  }
  return g;
}

PropagatorResult propagate_from_phase(const DriveWaveform& w, const DissipationParams& d,
                                      double phase, const PropagatorOptions& opts) {
  if (!std::isfinite(phase)) throw Error(ErrorCode::kInvalidInput, "non-finite start phase");
  return refine(w, d, reduce_turns(phase), 1.0, opts);
}

PropagatorResult propagate_period(const DriveWaveform& w, const DissipationParams& d, double t0,
                                  const PropagatorOptions& opts) {
  w.validate();
  if (!std::isfinite(t0)) throw Error(ErrorCode::kInvalidInput, "non-finite start time");
  double reduced = std::fmod(t0, w.period);
  if (reduced < 0.0) reduced += w.period;
  return propagate_from_phase(w, d, reduced / w.period, opts);
}

PropagatorResult shifted_propagator(const DriveWaveform& w, const DissipationParams& d, double t0,
                                    const PropagatorOptions& opts) {
  return propagate_period(w, d, t0, opts);
}

PropagatorResult propagate_interval(const DriveWaveform& w, const DissipationParams& d,
                                    double t_start, double t_end,
                                    const PropagatorOptions& opts) {
  w.validate();
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw Error(ErrorCode::kInvalidInput, "interval must be finite with t_end > t_start");
  }
  PropagatorResult out =
      refine(w, d, t_start / w.period, (t_end - t_start) / w.period, opts);
  out.t0 = t_start;
  return out;
}

std::array<int, 3> FloquetSpectrum::nontrivial() const {
  std::array<int, 3> out{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (i != ness_index) out[k++] = i;
  }
  return out;
}

int FloquetSpectrum::slowest() const {
  const auto modes = nontrivial();
  int best = modes[0];
  for (int m : modes) {
    if (eigenvalues[m].real() > eigenvalues[best].real()) best = m;
  }
  return best;
}

FloquetSpectrum effective_spectrum(const PropagatorResult& p, double eigen_residual_tol) {
  const EigenDecomposition dec = eig(ComplexMatrix(p.g), eigen_residual_tol);
  const double period = p.period();
  const auto logs = principal_log_eigenvalues(dec.eigenvalues, period);
  const auto order = spectral_order(logs);

  FloquetSpectrum s;
  s.period = period;
  s.t0 = p.t0;
  for (int k = 0; k < 4; ++k) {
    s.eigenvalues[k] = logs[order[k]];
    s.multipliers[k] = dec.eigenvalues[order[k]];
    s.eigenvectors.col(k) = dec.right_eigenvectors.col(order[k]);
  }

  double nearest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const double dist = std::abs(s.multipliers[k] - 1.0);
    if (dist < nearest) {
      nearest = dist;
      s.ness_index = k;
    }
  }
  if (nearest > 1e-4) {
    throw Error(ErrorCode::kNoSteadyState, "no Floquet multiplier near 1", {nearest});
  }

  const auto modes = s.nontrivial();
  s.min_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      s.min_gap = std::min(s.min_gap, std::abs(s.eigenvalues[modes[a]] - s.eigenvalues[modes[b]]));
    }
  }
  Eigen::Matrix<Complex, 4, 3> sub;
  for (int a = 0; a < 3; ++a) sub.col(a) = s.eigenvectors.col(modes[a]);
  s.eigvec_condition = condition_number(ComplexMatrix(sub));

  const double edge = std::numbers::pi / period;
  for (int m : modes) {
    if (std::abs(s.eigenvalues[m].imag()) > edge * (1.0 - 1e-6)) s.zone_edge = true;
  }
  return s;
}

Superoperator effective_generator(const FloquetSpectrum& s) {
  const double cond = condition_number(ComplexMatrix(s.eigenvectors));
  if (!(cond < 1e6)) {
    throw Error(ErrorCode::kNumericalFailure,
                "eigenvector matrix too ill-conditioned for a dense logarithm", {cond});
  }
  Eigen::Vector4cd lambda;
  for (int k = 0; k < 4; ++k) lambda(k) = s.eigenvalues[k];
  return s.eigenvectors * lambda.asDiagonal() * s.eigenvectors.inverse();
}

int ScanPoint::slot_of(int label) const {
  for (int i = 0; i < 4; ++i) {
    if (branch[i] == label) return i;
  }
  return -1;
}

std::array<int, 4> match_by_overlap(const Superoperator& from, const Superoperator& to) {
  Eigen::Matrix4d overlap;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) overlap(i, j) = std::abs(from.col(i).dot(to.col(j)));
  }
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<int, 4> best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (int j = 0; j < 4; ++j) score += overlap(perm[j], j);
    if (score > best_score + 1e-12) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

PeriodScan period_scan(const DriveWaveform& shape, const DissipationParams& d,
                       std::span<const double> t_grid, double t0,
                       const PropagatorOptions& opts, unsigned workers) {
  if (t_grid.empty()) throw Error(ErrorCode::kInvalidInput, "empty period grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw Error(ErrorCode::kInvalidInput, "period grid must be positive and increasing");
    }
  }

  PeriodScan scan;
  scan.points.resize(t_grid.size());
  parallel_for(t_grid.size(), workers, [&](std::size_t i) {
    ScanPoint& pt = scan.points[i];
    pt.period = t_grid[i];
    try {
      pt.spectrum = effective_spectrum(propagate_period(shape.with_period(t_grid[i]), d, t0, opts),
                                       opts.eigen_residual_tol);
    } catch (const Error& e) {
      pt.error = e.what();
    }
  });

  // Carry labels forward from the last successful point.
  const ScanPoint* previous = nullptr;
  for (ScanPoint& pt : scan.points) {
    if (!pt.spectrum) continue;
    if (previous) {
      const auto perm = match_by_overlap(previous->spectrum->eigenvectors, pt.spectrum->eigenvectors);
      for (int j = 0; j < 4; ++j) pt.branch[j] = previous->branch[perm[j]];
    }
    previous = &pt;
  }
  return scan;
}

std::vector<EpCandidate> find_ep(const PeriodScan& scan, const SpectrumEvaluator& evaluate,
                                 const EpOptions& opts) {
  std::vector<const ScanPoint*> valid;
  for (const auto& pt : scan.points) {
    if (pt.spectrum) valid.push_back(&pt);
  }
  if (scan.points.size() < 3 || valid.size() < 3) {
    throw Error(ErrorCode::kInvalidInput, "EP search needs at least three valid scan points");
  }

  std::vector<EpCandidate> out;
  for (std::size_t k = 1; k + 1 < valid.size(); ++k) {
    const double left = valid[k - 1]->spectrum->min_gap;
    const double mid = valid[k]->spectrum->min_gap;
    const double right = valid[k + 1]->spectrum->min_gap;
    if (!(mid <= left && mid <= right)) continue;
    if (mid == left && mid == right) continue;  // flat: degenerate, not a coalescence

    // Golden-section search inside the neighbouring grid cell on the gap of
    // the coalescing pair, which vanishes at the EP but not at a plain
    // crossing with a third mode.
    constexpr double inv_phi = 0.6180339887498949;
    double a = valid[k - 1]->period;
    double b = valid[k + 1]->period;
    try {
      auto accepted = [&](const FloquetSpectrum& s, double& overlap) {
        coalescing_pair(s, &overlap);
        return overlap > opts.min_overlap && s.eigvec_condition > opts.min_condition;
      };
      double c = b - inv_phi * (b - a);
      double e = a + inv_phi * (b - a);
      FloquetSpectrum sc = evaluate(c);
      FloquetSpectrum se = evaluate(e);
      double fc = pair_gap(sc);
      double fe = pair_gap(se);
      double overlap = 0.0;
      // Bracket to t_tol, then keep shrinking (down to t_floor) only while the
      // coalescence thresholds are not yet met: the eigenvector condition
      // grows like |T - T*|^(-1/2), so t_tol alone rarely reaches it.
      for (int it = 0; it < opts.max_iterations; ++it) {
        if ((b - a) <= opts.t_tol &&
            ((b - a) <= opts.t_floor || accepted(fc <= fe ? sc : se, overlap))) {
          break;
        }
        if (fc <= fe) {
          b = e;
          e = c;
          se = std::move(sc);
          fe = fc;
          c = b - inv_phi * (b - a);
          sc = evaluate(c);
          fc = pair_gap(sc);
        } else {
          a = c;
          c = e;
          sc = std::move(se);
          fc = fe;
          e = a + inv_phi * (b - a);
          se = evaluate(e);
          fe = pair_gap(se);
        }
      }
      const bool left_best = fc <= fe;
      const double t_star = left_best ? c : e;
      const FloquetSpectrum& s = left_best ? sc : se;
      if (!accepted(s, overlap)) continue;
      const auto pair = coalescing_pair(s);

      const auto perm = match_by_overlap(valid[k]->spectrum->eigenvectors, s.eigenvectors);
      EpCandidate cand;
      cand.t_star = t_star;
      cand.pair = {valid[k]->branch[perm[pair[0]]], valid[k]->branch[perm[pair[1]]]};
      if (cand.pair[0] > cand.pair[1]) std::swap(cand.pair[0], cand.pair[1]);
      cand.gap = left_best ? fc : fe;
      cand.overlap = overlap;
      cand.condition = s.eigvec_condition;
      out.push_back(cand);
    } catch (const Error&) {
      continue;  // an unevaluable bracket yields no candidate
    }
  }
  return out;
}

std::vector<EpCandidate> find_ep(const PeriodScan& scan, const DriveWaveform& shape,
                                 const DissipationParams& d, double t0,
                                 const PropagatorOptions& popts, const EpOptions& opts) {
  return find_ep(
      scan,
      [&](double period) {
        return effective_spectrum(propagate_period(shape.with_period(period), d, t0, popts),
                                  popts.eigen_residual_tol);
      },
      opts);
}

StroboscopicSeries stroboscopic_evolve(const PropagatorResult& p, const ComplexMatrix& rho0,
                                       int n_periods) {
  validate_state(rho0);
  if (n_periods < 0) throw Error(ErrorCode::kInvalidInput, "n_periods must be >= 0");

  StroboscopicSeries series;
  series.t0 = p.t0;
  series.period = p.period();
  series.records.reserve(static_cast<std::size_t>(n_periods) + 1);

  StateVector v = vec(rho0);
  for (int n = 0; n <= n_periods; ++n) {
    if (n > 0) v = p.g * v;
    Operator rho = unvec(v);
    series.records.push_back({n, make_bloch_record(rho, p.t0 + n * p.period()), rho});
  }
  return series;
}

std::vector<BlochRecord> micromotion(const DriveWaveform& w, const DissipationParams& d,
                                     const ComplexMatrix& rho0, int n_periods,
                                     int samples_per_period, const PropagatorOptions& opts,
                                     double t0) {
  validate_state(rho0);
  if (samples_per_period < 2) {
    throw Error(ErrorCode::kInvalidInput, "samples_per_period must be >= 2");
  }
  if (n_periods < 0) throw Error(ErrorCode::kInvalidInput, "n_periods must be >= 0");

  const PropagatorResult reference = propagate_period(w, d, t0, opts);
  const int slices = reference.slices;
  const double period = w.period;
  const double phase0 = reference.phase;
  const double dt = period / slices;
  const LiouvillianParts parts(d);

  // Sample j (0 < j < s) lies in slice floor(j n / s), offset (j n mod s) / (n s) turns.
  struct Sample {
    long long slice;
    long long offset;
  };
  const long long n = slices;
  const long long s = samples_per_period;
  std::vector<Sample> samples;
  for (long long j = 1; j < s; ++j) samples.push_back({(j * n) / s, (j * n) % s});

  std::vector<BlochRecord> out;
  out.reserve(static_cast<std::size_t>(n_periods * samples_per_period + 1));
  StateVector v = vec(rho0);
  out.push_back(make_bloch_record(unvec(v), t0));

  for (int p = 0; p < n_periods; ++p) {
    const double t_period = t0 + p * period;
    std::size_t next = 0;
    for (long long k = 0; k < n; ++k) {
      while (next < samples.size() && samples[next].slice == k) {
        const Sample& smp = samples[next];
        const double frac = static_cast<double>(smp.offset) / static_cast<double>(n * s);
        StateVector at = v;
        if (smp.offset != 0) {
          const double delta = frac * period;
          const double mid = phase0 + static_cast<double>(k) / n + 0.5 * frac;
          at = expm(Superoperator(delta * parts.at(drive_at_phase(w, mid)))) * v;
        }
        const double t = t_period + (static_cast<double>(k) / n + frac) * period;
        out.push_back(make_bloch_record(unvec(at), t));
        ++next;
      }
      const double mid = phase0 + (k + 0.5) / n;
      v = expm(Superoperator(dt * parts.at(drive_at_phase(w, mid)))) * v;
    }
    out.push_back(make_bloch_record(unvec(v), t0 + (p + 1) * period));
  }
  return out;
}

}  // namespace lindfloq
