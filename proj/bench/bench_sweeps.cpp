/* Copyright 2026 The prlsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <benchmark/benchmark.h>

#include <vector>

#include "prl/analysis.hpp"
#include "prl/config.hpp"

using namespace prl;

namespace {

const ExperimentConfig& config() {
  static const ExperimentConfig c =
      parse_config("[experiment]\nparam_set = nanoscale-default\n");
  return c;
}

const DetectorConfig& detector() {
  static const DetectorConfig d = calibrate_detector(config().system, config().sim, config().reference);
  return d;
}

void BM_Integrate(benchmark::State& state) {
  const auto& c = config();
  const auto stim = square_pulse(0.2e-9, 20e-12, 4600);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(stim, c.system, c.sim));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.sim.duration / c.sim.dt));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

void BM_ThresholdSweep(benchmark::State& state) {
  const auto& c = config();
  std::vector<double> amps;
  for (double a = 1000; a <= 6000; a += 50) amps.push_back(a);
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(threshold_sweep(amps, c.reference, c.system, c.sim, detector(), exec));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_ThresholdSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_NoisyRefractory(benchmark::State& state) {
  auto sim = config().sim;
  sim.noise_enabled = true;
  sim.rng_seed = 1;
  std::vector<double> seps;
  for (double s = 100e-12; s <= 500e-12; s += 50e-12) seps.push_back(s);
  RefractoryOptions o;
  o.seeds = 20;
  o.exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        refractory_sweep(seps, config().reference, config().system, sim, detector(), o));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_NoisyRefractory)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
