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
#include "prl/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prl/errors.hpp"

namespace prl {
namespace {

int count_spikes(const Stimulus& stim, const System& sys, const SimConfig& cfg,
                 const DetectorConfig& detector, Trace* keep = nullptr) {
  Trace tr = integrate(stim, sys, cfg);
  const int n = static_cast<int>(detect_spikes(tr, detector).size());
  if (keep) *keep = std::move(tr);
  return n;
}

std::string delta_label(double delta) {
  return "delta=" + std::to_string(std::llround(delta * 1e15)) + "fs";
}

}  // namespace

bool TaskReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const TaskResult& r) { return r.pass; });
}

double calibrate_and_amplitude(std::span<const double> amplitudes, double width,
                               const System& sys, const SimConfig& cfg,
                               const DetectorConfig& detector, double fraction, Execution exec) {
  ReferencePulse pulse;
  pulse.width = width;
  const ThresholdReport rep = threshold_sweep(amplitudes, pulse, sys, cfg, detector, exec);
  if (!rep.threshold) {
    throw AmplitudeMiscalibrated(
        "amplitude miscalibrated: single-pulse threshold lies outside the swept amplitudes");
  }
  return fraction * *rep.threshold;
}

TaskReport and_task(std::span<const double> deltas, const AndParams& params, const System& sys,
                    const SimConfig& cfg, const DetectorConfig& detector, Execution exec) {
  const double window = params.coincidence_window < 0.0 ? 0.5 * params.width
                                                        : params.coincidence_window;
  SimConfig probe = cfg;
  probe.noise_enabled = false;
  probe.duration = params.pulse_start + params.width + params.tail;
  if (count_spikes(square_pulse(params.pulse_start, params.width, params.amplitude), sys, probe,
                   detector) != 0) {
    throw AmplitudeMiscalibrated("amplitude miscalibrated: a single branch pulse spikes alone");
  }
  if (count_spikes(square_pulse(params.pulse_start, params.width, 2.0 * params.amplitude), sys,
                   probe, detector) == 0) {
    throw AmplitudeMiscalibrated(
        "amplitude miscalibrated: two fully overlapping pulses stay below threshold");
  }

  double reach = 0.0;
  for (double d : deltas) reach = std::max(reach, std::abs(d));
  SimConfig run = cfg;
  run.duration = params.pulse_start + reach + params.width + params.tail;

  TaskReport rep;
  rep.results.resize(deltas.size());
  rep.traces.resize(deltas.size());
  for_each_trial(deltas.size(), exec, [&](std::size_t k) {
    const double delta = deltas[k];
    const Branch branches[] = {
        {"A", square_pulse(params.pulse_start + std::max(0.0, -delta), params.width,
                           params.amplitude), 1},
        {"B", square_pulse(params.pulse_start + std::max(0.0, delta), params.width,
                           params.amplitude), 1},
    };
    SimConfig c = run;
    c.rng_seed = trajectory_seed(cfg.rng_seed, k);
    TaskResult& res = rep.results[k];
    res.label = delta_label(delta);
    res.delta = delta;
    res.spike_count = count_spikes(combine(branches), sys, c, detector, &rep.traces[k]);
    res.expected = std::abs(delta) <= window ? 1 : 0;
    res.pass = res.spike_count == res.expected;
  });
  return rep;
}

std::vector<std::vector<Branch>> xor_cases(const XorParams& params) {
  const Branch a{"A", bipolar_pulse(params.pulse_start, params.width, params.amplitude, 1),
                 params.polarity_a};
  const Branch b{"B", bipolar_pulse(params.pulse_start, params.width, params.amplitude, 1),
                 -params.polarity_a};
  return {{}, {a}, {b}, {a, b}};
}

TaskReport xor_task(const XorParams& params, const System& sys, const SimConfig& cfg,
                    const DetectorConfig& detector, Execution exec) {
  if (params.polarity_a != 1 && params.polarity_a != -1) {
    throw InvalidArgument("xor_task: polarity must be +1 or -1");
  }
  const auto cases = xor_cases(params);
  if (cancellation_residual(cases[3]) != 0.0) {
    throw InvalidArgument("xor_task: anti-phase branches do not cancel exactly");
  }

  static constexpr const char* kLabels[] = {"00", "10", "01", "11"};
  static constexpr int kExpected[] = {0, 1, 1, 0};

  SimConfig run = cfg;
  run.duration = params.pulse_start + params.width + params.tail;

  TaskReport rep;
  rep.results.resize(cases.size());
  rep.traces.resize(cases.size());
  for_each_trial(cases.size(), exec, [&](std::size_t k) {
    const Stimulus stim = cases[k].empty() ? Stimulus{} : combine(cases[k]);
    SimConfig c = run;
    c.rng_seed = trajectory_seed(cfg.rng_seed, k);
    TaskResult& res = rep.results[k];
    res.label = kLabels[k];
    res.spike_count = count_spikes(stim, sys, c, detector, &rep.traces[k]);
    res.expected = kExpected[k];
    res.pass = res.spike_count == res.expected;
  });

  if (rep.results[1].spike_count == 0 || rep.results[2].spike_count == 0) {
    throw AmplitudeMiscalibrated(
        "amplitude miscalibrated: a single bipolar branch pulse does not spike");
  }
  return rep;
}

}  // namespace prl
