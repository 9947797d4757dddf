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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lindfloq/experiments.hpp"

namespace {

using namespace lindfloq;

DriveWaveform loop(double period) {
  DriveWaveform w;
  w.delta_max = 2.0 * std::numbers::pi;
  w.period = period;
  return w;
}

void BM_Expm4(benchmark::State& state) {
  const Superoperator l = 0.003 * liouvillian({20.0, 3.0}, {4.7, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(expm(l));
}
BENCHMARK(BM_Expm4);

void BM_Eig4(benchmark::State& state) {
  const ComplexMatrix g = propagate_period(loop(0.2), {4.0, 0.0}, 0.0).g;
  for (auto _ : state) benchmark::DoNotOptimize(eig(g));
}
BENCHMARK(BM_Eig4);

void BM_SliceProduct(benchmark::State& state) {
  const DriveWaveform w = loop(0.2);
  const int slices = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(slice_product(w, {4.0, 0.0}, 0.0, 1.0, slices));
  state.SetItemsProcessed(state.iterations() * slices);
}
BENCHMARK(BM_SliceProduct)->Arg(256)->Arg(4096);

void BM_PropagatePeriod(benchmark::State& state) {
  PropagatorOptions opts;
  opts.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_period(loop(0.35), {4.0, 0.0}, 0.0, opts));
}
BENCHMARK(BM_PropagatePeriod)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_SweepCell(benchmark::State& state) {
  PropagatorOptions opts;
  opts.tol = 1e-6;
  for (auto _ : state) {
    const PropagatorResult p = propagate_period(loop(0.54), {4.0, 0.0}, 0.1, opts);
    benchmark::DoNotOptimize(ness_from_propagator(p));
  }
}
BENCHMARK(BM_SweepCell)->Unit(benchmark::kMillisecond);

void BM_SweepRow(benchmark::State& state) {
  PropagatorOptions opts;
  opts.tol = 1e-6;
  const std::vector<double> periods{0.54};
  const auto grid = make_t0_grid(50);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ness_sweep(loop(0.54), {4.0, 0.0}, periods, grid, Direction::kCCW, NessMode::kExact, opts, workers));
  }
}
BENCHMARK(BM_SweepRow)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
