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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lindfloq/analysis.hpp"
#include "lindfloq/experiments.hpp"
#include "lindfloq/floquet.hpp"
#include "oracles/oracles.hpp"

namespace lindfloq {
namespace {

constexpr double kPi = std::numbers::pi;

DriveWaveform loop(double period, Direction dir = Direction::kCW) {
  DriveWaveform w;
  w.j_max = 20.0;
  w.delta_max = 2.0 * kPi;
  w.direction = dir;
  w.period = period;
  return w;
}

DriveWaveform constant_drive(double j, double period) {
  DriveWaveform w;
  w.family = PathFamily::kCosSquared;
  w.j_max = j;
  w.j_min = j;
  w.delta_max = 0.0;
  w.period = period;
  return w;
}

const DissipationParams kFig1{4.0, 0.0};

std::vector<Complex> as_vector(const std::array<Complex, 4>& a) { return {a.begin(), a.end()}; }

TEST(Propagator, ConstantDriveCollapsesToSingleExponential) {
  for (double j : {0.0, 0.7, 5.0}) {
    const DriveWaveform w = constant_drive(j, 0.3);
    const DissipationParams d{4.7, 0.3};
    const PropagatorResult p = propagate_period(w, d, 0.0);
    const Superoperator ref = expm(Superoperator(0.3 * liouvillian({j, 0.0}, d)));
    EXPECT_LT((p.g - ref).norm(), 1e-9) << j;
  }
}

TEST(Propagator, ClosedSystemIsUnitary) {
  const PropagatorResult p = propagate_period(loop(0.2), {0.0, 0.0}, 0.0);
  const Eigen::JacobiSVD<ComplexMatrix> svd(ComplexMatrix(p.g));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(svd.singularValues()(i), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(p.g.determinant()), 1.0, 1e-8);
}

TEST(Propagator, MatchesAdaptiveOdeOracle) {
  const PropagatorResult p = propagate_period(loop(0.2), kFig1, 0.0);
  const oracle::Drive drive{false, 20.0, 0.0, 2.0 * kPi, -1.0, 0.2};
  const oracle::Mat4 ref = oracle::propagator_by_ode(drive, 4.0, 0.0, 0.0);
  EXPECT_LT((p.g - ref).norm(), 1e-7);
  EXPECT_LT(p.error_estimate, 1e-9);
  EXPECT_GE(p.slices, 128);
}

TEST(Propagator, MapInvariants) {
  const DissipationParams d{4.7, 0.3};
  StateVector id;
  id << 1.0, 0.0, 0.0, 1.0;
  for (double t : {0.15, 0.35, 0.6}) {
    const PropagatorResult p = propagate_period(loop(t, Direction::kCCW), d, 0.0);
    EXPECT_LT((id.adjoint() * p.g - id.adjoint()).norm(), 1e-9);
    const double det = std::exp(-2.0 * (d.gamma_e + d.gamma_phi) * t);
    EXPECT_LT(std::abs(p.g.determinant() - det), 1e-8 * det);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
      Operator h = oracle::random_matrix(rng, 2);
      h = (h + h.adjoint()).eval();
      const Operator out = unvec(p.g * vec(h));
      EXPECT_LT(hermitian_defect(out), 1e-9);
    }
  }
}

TEST(Propagator, SemigroupSplit) {
  const DriveWaveform w = loop(0.35, Direction::kCCW);
  const DissipationParams d{4.7, 0.3};
  PropagatorOptions opts;
  opts.tol = 1e-10;
  const PropagatorResult full = propagate_period(w, d, 0.05, opts);
  for (double s : {0.07, 0.175, 0.3}) {
    const PropagatorResult first = propagate_interval(w, d, 0.05, 0.05 + s, opts);
    const PropagatorResult second = propagate_interval(w, d, 0.05 + s, 0.05 + 0.35, opts);
    EXPECT_LT((second.g * first.g - full.g).norm(), 1e-8) << s;
  }
}

TEST(Propagator, ShiftedStartsShareSpectrum) {
  const DriveWaveform w = loop(0.2);
  const DissipationParams d{4.7, 0.3};
  const PropagatorResult base = propagate_period(w, d, 0.0);
  EXPECT_EQ(shifted_propagator(w, d, 0.0).g, base.g);
  const auto ref = as_vector(effective_spectrum(base).eigenvalues);
  for (double f : {0.2, 0.5, 0.8}) {
    const auto other = as_vector(effective_spectrum(shifted_propagator(w, d, f * 0.2)).eigenvalues);
    EXPECT_LT(eigenvalue_set_distance(ref, other), 1e-7) << f;
  }
}

TEST(Propagator, ShiftByWholePeriodIsIdentical) {
  const DriveWaveform w = loop(0.25);
  const PropagatorResult a = shifted_propagator(w, kFig1, 0.0625);
  const PropagatorResult b = shifted_propagator(w, kFig1, 0.0625 + 0.25);
  EXPECT_EQ(a.g, b.g);
}

TEST(Propagator, SliceCapIsReported) {
  PropagatorOptions opts;
  opts.tol = 1e-15;
  opts.max_slices = 256;
  try {
    propagate_period(loop(0.2), kFig1, 0.0, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrationFailure);
    EXPECT_FALSE(e.diagnostics().empty());
  }
}

TEST(Spectrum, DriveOffAnalytic) {
  const FloquetSpectrum s = effective_spectrum(propagate_period(constant_drive(0.0, 0.2), kFig1, 0.0));
  const std::vector<Complex> expected{0.0, -2.0, -2.0, -4.0};
  EXPECT_LT(eigenvalue_set_distance(as_vector(s.eigenvalues), expected), 1e-9);
  EXPECT_LT(std::abs(s.eigenvalues[s.ness_index]), 1e-12);
}

TEST(Spectrum, RegimesAtShortAndLongPeriod) {
  const FloquetSpectrum fast = effective_spectrum(propagate_period(loop(0.2), kFig1, 0.0));
  EXPECT_GT(std::abs(fast.eigenvalues[fast.slowest()].imag()), 1.0);
  const FloquetSpectrum slow = effective_spectrum(propagate_period(loop(0.6), kFig1, 0.0));
  for (const Complex& z : slow.eigenvalues) EXPECT_LT(std::abs(z.imag()), 1e-6);
}

TEST(Spectrum, Invariants) {
  for (double t : {0.15, 0.2, 0.35, 0.5, 0.6}) {
    const FloquetSpectrum s = effective_spectrum(propagate_period(loop(t), {4.7, 0.3}, 0.0));
    int near_zero = 0;
    std::vector<Complex> conj;
    for (const Complex& z : s.eigenvalues) {
      if (std::abs(z) <= 1e-8) ++near_zero;
      EXPECT_LE(z.real(), 1e-8);
      EXPECT_GT(z.imag(), -kPi / t);
      EXPECT_LE(z.imag(), kPi / t);
      conj.push_back(std::conj(z));
    }
    EXPECT_EQ(near_zero, 1);
    EXPECT_LT(eigenvalue_set_distance(as_vector(s.eigenvalues), conj), 1e-8);
  }
}

TEST(Spectrum, DenseGeneratorReproducesMap) {
  const PropagatorResult p = propagate_period(loop(0.2), kFig1, 0.0);
  const Superoperator l = effective_generator(effective_spectrum(p));
  EXPECT_LT((expm(Superoperator(0.2 * l)) - p.g).norm(), 1e-10);
}

TEST(Scan, DriveOffGivesFlatBranches) {
  const std::vector<double> grid{0.15, 0.2, 0.25, 0.3};
  const PeriodScan scan = period_scan(constant_drive(0.0, 1.0), kFig1, grid, 0.0);
  const std::vector<Complex> expected{0.0, -2.0, -2.0, -4.0};
  for (const ScanPoint& pt : scan.points) {
    ASSERT_TRUE(pt.spectrum);
    EXPECT_LT(eigenvalue_set_distance(as_vector(pt.spectrum->eigenvalues), expected), 1e-9);
  }
  EXPECT_TRUE(find_ep(scan, constant_drive(0.0, 1.0), kFig1, 0.0).empty());
}

TEST(Scan, RejectsBadGrid) {
  const std::vector<double> grid{0.2, 0.2};
  EXPECT_THROW(period_scan(loop(0.2), kFig1, grid, 0.0), Error);
  EXPECT_THROW(period_scan(loop(0.2), kFig1, std::vector<double>{}, 0.0), Error);
}

TEST(Scan, ParallelMatchesSerial) {
  const std::vector<double> grid = arithmetic_grid(0.15, 0.65, 0.05);
  PropagatorOptions opts;
  opts.tol = 1e-7;
  const PeriodScan a = period_scan(loop(0.2), kFig1, grid, 0.0, opts, 1);
  const PeriodScan b = period_scan(loop(0.2), kFig1, grid, 0.0, opts, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(a.points[i].spectrum->eigenvalues, b.points[i].spectrum->eigenvalues);
    EXPECT_EQ(a.points[i].branch, b.points[i].branch);
  }
}

TEST(Scan, ImaginaryPartsMergeWithinRange) {
  const std::vector<double> grid = arithmetic_grid(0.15, 0.65, 0.01);
  PropagatorOptions opts;
  opts.tol = 1e-7;
  const PeriodScan scan = period_scan(loop(0.2), kFig1, grid, 0.0, opts);
  bool oscillating_before = false;
  bool merged_after = false;
  for (const ScanPoint& pt : scan.points) {
    ASSERT_TRUE(pt.spectrum);
    double max_im = 0.0;
    for (const Complex& z : pt.spectrum->eigenvalues) max_im = std::max(max_im, std::abs(z.imag()));
    if (pt.period <= 0.3 && max_im > 1.0) oscillating_before = true;
    if (oscillating_before && pt.period > 0.3 && max_im < 1e-6) merged_after = true;
  }
  EXPECT_TRUE(oscillating_before);
  EXPECT_TRUE(merged_after);
}

TEST(Scan, BranchLabelsStableUnderGridRefinement) {
  PropagatorOptions opts;
  opts.tol = 1e-7;
  const std::vector<double> coarse = arithmetic_grid(0.15, 0.65, 0.02);
  const std::vector<double> fine = arithmetic_grid(0.15, 0.65, 0.01);
  const PeriodScan a = period_scan(loop(0.2), kFig1, coarse, 0.0, opts);
  const PeriodScan b = period_scan(loop(0.2), kFig1, fine, 0.0, opts);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    ASSERT_EQ(b.points[2 * i].period, a.points[i].period);
    EXPECT_EQ(b.points[2 * i].branch, a.points[i].branch) << a.points[i].period;
  }
}

// Constant resonant drive J at gamma_e = 4: the coherent Rabi pair meets the
// population-decay mode at J = gamma_e / 8, where the Bloch generator has a
// square-root branch point.
TEST(ExceptionalPoint, SyntheticConstantDriveRecovered) {
  const DissipationParams d{4.0, 0.0};
  const double t = 0.2;
  auto evaluate = [&](double j) {
    PropagatorResult p;
    p.g = expm(Superoperator(t * liouvillian({j, 0.0}, d)));
    p.waveform = constant_drive(j, t);
    p.dissipation = d;
    return effective_spectrum(p);
  };
  PeriodScan scan;
  for (double j = 0.3; j <= 0.7 + 1e-12; j += 0.02) {
    ScanPoint pt;
    pt.period = j;
    pt.spectrum = evaluate(j);
    if (!scan.points.empty()) {
      const auto perm = match_by_overlap(scan.points.back().spectrum->eigenvectors,
                                         pt.spectrum->eigenvectors);
      for (int k = 0; k < 4; ++k) pt.branch[k] = scan.points.back().branch[perm[k]];
    }
    scan.points.push_back(pt);
  }
  const std::vector<EpCandidate> eps = find_ep(scan, evaluate);
  ASSERT_EQ(eps.size(), 1u);
  EXPECT_NEAR(eps[0].t_star, 0.5, 1e-3);
  EXPECT_GT(eps[0].overlap, 0.99);
  EXPECT_GT(eps[0].condition, 1e3);
}

TEST(ExceptionalPoint, LoopScanFindsCandidateBetweenRegimes) {
  PropagatorOptions opts;
  opts.tol = 1e-7;
  const std::vector<double> grid = arithmetic_grid(0.15, 0.65, 0.01);
  const PeriodScan scan = period_scan(loop(0.2), kFig1, grid, 0.0, opts);
  const std::vector<EpCandidate> eps = find_ep(scan, loop(0.2), kFig1, 0.0, opts);
  ASSERT_FALSE(eps.empty());
  bool inside = false;
  for (const EpCandidate& c : eps) inside = inside || (c.t_star > 0.2 && c.t_star < 0.6);
  EXPECT_TRUE(inside);
}

TEST(ExceptionalPoint, TooFewPointsRejected) {
  PeriodScan scan;
  EXPECT_THROW(find_ep(scan, loop(0.2), kFig1, 0.0), Error);
}

TEST(Stroboscopic, ZeroPeriodsAndFixedPoint) {
  const PropagatorResult p = propagate_period(loop(0.2), {4.7, 0.3}, 0.0);
  const StroboscopicSeries s0 = stroboscopic_evolve(p, states::plus_x(), 0);
  ASSERT_EQ(s0.records.size(), 1u);
  EXPECT_NEAR(s0.records[0].bloch.x, 1.0, 1e-15);
  const NessRecord ness = ness_from_propagator(p);
  const StroboscopicSeries s = stroboscopic_evolve(p, ness.rho, 20);
  for (const auto& r : s.records) EXPECT_LT((r.rho - ness.rho).norm(), 1e-8);
  EXPECT_THROW(stroboscopic_evolve(p, states::ground() * 2.0, 3), Error);
}

TEST(Stroboscopic, OscillatoryVersusMonotoneDecay) {
  const PropagatorResult fast = propagate_period(loop(0.2), kFig1, 0.0);
  const StroboscopicSeries a = stroboscopic_evolve(fast, states::plus_x(), 10);
  const double xf = ness_from_propagator(fast).bloch.x;
  // About 0.64 rad of phase per period: two crossings of the fixed point in ten periods.
  int crossings = 0;
  for (std::size_t n = 1; n < a.records.size(); ++n) {
    if ((a.records[n].bloch.x - xf) * (a.records[n - 1].bloch.x - xf) < 0) ++crossings;
  }
  EXPECT_GE(crossings, 2);

  const PropagatorResult slow = propagate_period(loop(0.6), kFig1, 0.0);
  const StroboscopicSeries b = stroboscopic_evolve(slow, states::plus_x(), 10);
  const double xs = ness_from_propagator(slow).bloch.x;
  for (std::size_t n = 2; n < b.records.size(); ++n) {
    EXPECT_LE(std::abs(b.records[n].bloch.x - xs), std::abs(b.records[n - 1].bloch.x - xs) + 1e-12);
    EXPECT_GT((b.records[n].bloch.x - xs) * (b.records[n - 1].bloch.x - xs), 0.0);
  }
}

TEST(Stroboscopic, PositivityOnRandomStates) {
  const PropagatorResult p = propagate_period(loop(0.35, Direction::kCCW), {4.7, 0.3}, 0.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Operator rho = i % 2 ? oracle::random_state(rng) : oracle::random_pure_state(rng);
    const StroboscopicSeries s = stroboscopic_evolve(p, rho, 5);
    for (const auto& r : s.records) EXPECT_LE(r.bloch.bloch().norm(), 1.0 + 1e-9);
  }
}

// Oscillation in the series (more than two sign changes of x - x_inf, counted
// while the signal stands above round-off) iff the slow pair is complex.
TEST(Stroboscopic, ClassificationMatchesOscillations) {
  for (double t : {0.2, 0.35, 0.6}) {
    const PropagatorResult p = propagate_period(loop(t), kFig1, 0.0);
    const FloquetSpectrum s = effective_spectrum(p);
    const double x_inf = ness_from_propagator(p).bloch.x;
    const StroboscopicSeries series = stroboscopic_evolve(p, states::plus_x(), 30);
    int crossings = 0;
    double previous = 0.0;
    for (const auto& r : series.records) {
      const double v = r.bloch.x - x_inf;
      if (std::abs(v) < 1e-10) break;
      if (previous != 0.0 && v * previous < 0) ++crossings;
      previous = v;
    }
    bool complex_pair = false;
    for (int m : s.nontrivial()) {
      complex_pair = complex_pair || std::abs(s.eigenvalues[m].imag()) > 1e-3 * 2.0 * kPi / t;
    }
    EXPECT_EQ(crossings > 2, complex_pair) << t << " crossings " << crossings;
  }
}

TEST(Micromotion, DriveOffDecay) {
  const DissipationParams d{4.0, 0.0};
  const auto samples = micromotion(constant_drive(0.0, 0.25), d, states::excited(), 4, 10);
  ASSERT_EQ(samples.size(), 41u);
  for (const BlochRecord& r : samples) {
    EXPECT_NEAR(r.z, 1.0 - 2.0 * std::exp(-4.0 * r.t), 1e-10) << r.t;
  }
}

TEST(Micromotion, AgreesWithStroboscopicAtPeriodMultiples) {
  const DriveWaveform w = loop(0.2);
  const DissipationParams d{4.7, 0.3};
  const int spp = 16;
  for (double t0 : {0.0, 0.04}) {
    const auto samples = micromotion(w, d, states::plus_x(), 10, spp, {}, t0);
    const StroboscopicSeries s = stroboscopic_evolve(propagate_period(w, d, t0), states::plus_x(), 10);
    for (int n = 0; n <= 10; ++n) {
      const BlochRecord& a = samples[static_cast<std::size_t>(n * spp)];
      const BlochRecord& b = s.records[static_cast<std::size_t>(n)].bloch;
      EXPECT_NEAR(a.t, b.t, 1e-12);
      EXPECT_LT(std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z), 1e-8);
    }
  }
}

TEST(Micromotion, IntermediateSamplesMatchOde) {
  const DriveWaveform w = loop(0.2);
  const oracle::Drive drive{false, 20.0, 0.0, 2.0 * kPi, -1.0, 0.2};
  const auto samples = micromotion(w, kFig1, states::plus_x(), 1, 7);
  for (const BlochRecord& r : samples) {
    const oracle::Mat2 rho = oracle::rkf45(drive, 4.0, 0.0, states::plus_x(), 0.0, r.t);
    const BlochVector b = bloch_from_rho(rho);
    EXPECT_LT(std::abs(b.x - r.x) + std::abs(b.y - r.y) + std::abs(b.z - r.z), 1e-7) << r.t;
  }
}

}  // namespace
}  // namespace lindfloq
