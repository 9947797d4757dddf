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

std::vector<Complex> as_vector(const std::array<Complex, 4>& a) { return {a.begin(), a.end()}; }

// Series whose x component follows `model(t)`; y and z stay zero.
template <typename Model>
StroboscopicSeries synthetic_series(double period, int n_periods, Model model) {
  StroboscopicSeries s;
  s.period = period;
  for (int n = 0; n <= n_periods; ++n) {
    StroboscopicPoint p;
    p.n = n;
    p.bloch.t = n * period;
    p.bloch.x = model(n * period);
    s.records.push_back(p);
  }
  return s;
}

TEST(Ness, DriveOffIsGround) {
  const PropagatorResult p = propagate_period(constant_drive(0.0, 0.2), {4.0, 0.0}, 0.0);
  const NessRecord n = ness_from_propagator(p);
  EXPECT_LT((n.rho - states::ground()).norm(), 1e-12);
  EXPECT_LT(n.bloch.entropy, 1e-9);
}

TEST(Ness, RecordInvariantsAndFixedPoint) {
  for (double t : {0.15, 0.2, 0.35, 0.54, 0.65}) {
    for (Direction dir : {Direction::kCCW, Direction::kCW}) {
      const PropagatorResult p = propagate_period(loop(t, dir), {4.0, 0.0}, 0.3 * t);
      const NessRecord n = ness_from_propagator(p);
      EXPECT_NEAR(n.rho.trace().real(), 1.0, 1e-12);
      EXPECT_NEAR(n.rho.trace().imag(), 0.0, 1e-12);
      EXPECT_LT(hermitian_defect(n.rho), 1e-10);
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<Operator>(n.rho).eigenvalues().minCoeff(), -1e-8);
      EXPECT_LE(n.residual, 1e-8);
      EXPECT_LT((p.g * vec(n.rho) - vec(n.rho)).norm(), 1e-8);
      EXPECT_NEAR(n.t0_fraction, 0.3, 1e-12);
      EXPECT_EQ(n.direction, dir);
    }
  }
}

TEST(Ness, PowerIterationFromMixedStateConverges) {
  for (double t : {0.2, 0.35, 0.54}) {
    const PropagatorResult p = propagate_period(loop(t), {4.0, 0.0}, 0.0);
    const FloquetSpectrum s = effective_spectrum(p);
    if (std::abs(s.eigenvalues[s.slowest()].real()) * 50 * t <= 5.0) continue;
    const NessRecord n = ness_from_propagator(p);
    const NessRecord iterated = tenth_period_ness(p, states::maximally_mixed(), 50);
    EXPECT_LT(trace_distance(iterated.rho, n.rho), 1e-6) << t;
  }
}

TEST(Ness, TenthPeriodAgreesWithExactWhenDecayed) {
  int checked = 0;
  for (double t = 0.15; t <= 0.65 + 1e-9; t += 0.05) {
    for (double f : {0.0, 0.25, 0.5, 0.75}) {
      const PropagatorResult p = propagate_period(loop(t, Direction::kCCW), {4.0, 0.0}, f * t);
      const FloquetSpectrum s = effective_spectrum(p);
      if (std::abs(s.eigenvalues[s.slowest()].real()) * 10 * t <= 3.0) continue;
      ++checked;
      const NessRecord exact = ness_from_propagator(p);
      const NessRecord tenth = tenth_period_ness(p, states::plus_x(), 10);
      EXPECT_LT(trace_distance(exact.rho, tenth.rho), 0.05) << t << " " << f;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(StaticSteadyState, Examples) {
  for (double delta : {0.0, 3.0, -40.0}) {
    const Operator rho = static_steady_state(liouvillian({0.0, delta}, {4.0, 0.0}));
    EXPECT_LT((rho - states::ground()).norm(), 1e-12) << delta;
  }
  const Operator resonant = static_steady_state(liouvillian({20.0, 0.0}, {4.0, 0.0}));
  EXPECT_GE(entropy(resonant), 0.9);
}

TEST(StaticSteadyState, ResidualAndValidity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    const Superoperator l = liouvillian({u(rng), u(rng)}, {4.7, 0.3});
    const Operator rho = static_steady_state(l);
    EXPECT_LE((l * vec(rho)).norm(), 1e-9);
    EXPECT_NO_THROW(validate_state(rho, 1e-8));
  }
}

TEST(StaticSteadyState, MatchesLongTimeEvolution) {
  const double gamma_e = 4.0;
  const double t_end = 20.0 / gamma_e;
  const DissipationParams d{gamma_e, 0.0};
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-25.0, 25.0);
  for (int i = 0; i < 5; ++i) {
    // Detuned: exact exponential by the series oracle.
    const double j = u(rng), delta = u(rng);
    const Superoperator l = liouvillian({j, delta}, d);
    const Operator late = unvec(oracle::series_expm(ComplexMatrix(t_end * l)) * vec(states::ground()));
    EXPECT_LT(trace_distance(late, static_steady_state(l)), 1e-5) << j << " " << delta;

    // Resonant: dense trajectory of a constant drive.
    const double a = std::abs(j);
    const auto samples = micromotion(constant_drive(a, t_end / 20), d, states::ground(), 20, 4);
    const BlochRecord& last = samples.back();
    EXPECT_NEAR(last.t, t_end, 1e-12);
    const Operator ss = static_steady_state(liouvillian({a, 0.0}, d));
    EXPECT_LT(trace_distance(states::from_bloch(last.x, last.y, last.z), ss), 1e-5) << a;
  }
}

TEST(StaticSteadyState, DegenerateNullSpaceIsAmbiguous) {
  try {
    static_steady_state(liouvillian({0.0, 1.0}, {0.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAmbiguousSteadyState);
  }
}

TEST(StaticSteadyState, EqualsNessForConstantDrive) {
  const DissipationParams d{4.7, 0.3};
  for (double j : {0.0, 0.4, 3.0, 20.0}) {
    const Operator ss = static_steady_state(liouvillian({j, 0.0}, d));
    for (double t : {0.1, 0.6, 2.0}) {
      const NessRecord n = ness_from_propagator(propagate_period(constant_drive(j, t), d, 0.0));
      EXPECT_LT(trace_distance(ss, n.rho), 1e-9) << j << " " << t;
    }
  }
}

TEST(Fit, RecoversNoiselessDampedCosine) {
  const double amp = 0.8, kappa = 2.5, omega = 3.2, phi = 0.3, offset = 0.1;
  const auto series = synthetic_series(0.2, 20, [&](double t) {
    return amp * std::exp(-kappa * t) * std::cos(omega * t + phi) + offset;
  });
  const TransientFit fit = fit_transient(series, Component::kX, TransientKind::kUnderdamped);
  ASSERT_EQ(fit.params.size(), 5u);
  EXPECT_NEAR(fit.amplitude(), amp, 1e-6);
  EXPECT_NEAR(fit.decay(), kappa, 1e-6);
  EXPECT_NEAR(fit.frequency(), omega, 1e-6);
  EXPECT_NEAR(fit.params[3], phi, 1e-6);
  EXPECT_NEAR(fit.offset(), offset, 1e-6);
  EXPECT_LT(fit.rms, 1e-9);
  EXPECT_EQ(fit.points, 21);
  EXPECT_EQ(fit.covariance.rows(), 5);
}

TEST(Fit, RecoversNoiselessDecay) {
  const auto series = synthetic_series(0.6, 10, [](double t) { return 0.7 * std::exp(-1.3 * t) - 0.2; });
  const TransientFit fit = fit_transient(series, Component::kX, TransientKind::kOverdamped);
  ASSERT_EQ(fit.params.size(), 3u);
  EXPECT_NEAR(fit.amplitude(), 0.7, 1e-6);
  EXPECT_NEAR(fit.decay(), 1.3, 1e-6);
  EXPECT_NEAR(fit.offset(), -0.2, 1e-6);
}

TEST(Fit, TooFewSamplesFails) {
  const auto series = synthetic_series(0.2, 4, [](double t) { return std::exp(-t); });
  try {
    fit_transient(series, Component::kX, TransientKind::kUnderdamped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFitFailure);
  }
}

TEST(Fit, StroboscopicSeriesMatchesSlowEigenvalue) {
  const PropagatorResult p = propagate_period(loop(0.2), {4.7, 0.3}, 0.0);
  const FloquetSpectrum s = effective_spectrum(p);
  const Complex slow = s.eigenvalues[s.slowest()];
  const StroboscopicSeries series = stroboscopic_evolve(p, states::plus_x(), 10);
  const auto seeds = as_vector(s.eigenvalues);
  const ModelSelection sel = select_transient_model(series, Component::kX, seeds);
  ASSERT_EQ(sel.chosen, TransientKind::kUnderdamped);
  EXPECT_NEAR(sel.best().decay(), -slow.real(), 0.05 * std::abs(slow.real()));
  EXPECT_NEAR(sel.best().frequency(), std::abs(slow.imag()), 0.05 * std::abs(slow.imag()));
}

TEST(Fit, LongPeriodSelectsPureDecay) {
  const PropagatorResult p = propagate_period(loop(0.6), {4.0, 0.0}, 0.0);
  const FloquetSpectrum s = effective_spectrum(p);
  const StroboscopicSeries series = stroboscopic_evolve(p, states::plus_x(), 10);
  const ModelSelection sel = select_transient_model(series, Component::kX, as_vector(s.eigenvalues));
  EXPECT_EQ(sel.chosen, TransientKind::kOverdamped);
  ASSERT_TRUE(sel.overdamped);
}

TEST(Tomography, ConvergesAtLargeShotCount) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 5; ++i) {
    const Operator rho = oracle::random_state(rng);
    const BlochVector exact = bloch_from_rho(rho);
    const BlochVector est = sample_tomography(rho, 1'000'000, 100 + i);
    EXPECT_NEAR(est.x, exact.x, 0.005);
    EXPECT_NEAR(est.y, exact.y, 0.005);
    EXPECT_NEAR(est.z, exact.z, 0.005);
  }
}

TEST(Tomography, DeterministicOutcomesAndSeeds) {
  for (long long shots : {1LL, 7LL, 1000LL}) {
    EXPECT_EQ(sample_tomography(states::plus_x(), shots, 5).x, 1.0);
    EXPECT_EQ(sample_tomography(states::ground(), shots, 5).z, 1.0);
  }
  const Operator rho = states::from_bloch(0.3, -0.2, 0.5);
  EXPECT_EQ(sample_tomography(rho, 500, 42), sample_tomography(rho, 500, 42));
  EXPECT_NE(sample_tomography(rho, 500, 42), sample_tomography(rho, 500, 43));
  EXPECT_THROW(sample_tomography(rho, 0, 1), Error);
}

}  // namespace
}  // namespace lindfloq
