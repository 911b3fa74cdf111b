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
#include "prl/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "prl/errors.hpp"

namespace prl {

void DetectorConfig::validate() const {
  if (!(lower > 0.0 && lower < upper && upper < 1.0)) {
    throw InvariantViolation("detector", "thresholds must satisfy 0 < lower < upper < 1");
  }
  if (!(std::isfinite(reference_amplitude) && reference_amplitude > 0.0)) {
    throw InvariantViolation("reference_amplitude", "must be > 0");
  }
  if (baseline && !std::isfinite(*baseline)) {
    throw InvariantViolation("baseline", "must be finite");
  }
}

SpikeTrain detect_spikes(const Trace& trace, const DetectorConfig& detector) {
  detector.validate();
  if (trace.size() < 10) throw InvalidArgument("detect_spikes: trace shorter than 10 samples");

  const auto x = trace.channel(detector.channel);
  const std::size_t n = x.size();
  const double base = detector.baseline.value_or(x[0]);
  const double hi = detector.upper * detector.reference_amplitude;
  const double lo = detector.lower * detector.reference_amplitude;
  const auto dev = [&](std::size_t k) { return std::abs(x[k] - base); };

  SpikeTrain train;
  train.detector = detector;
  std::size_t k = 0;
  std::size_t floor = 0;  // first sample the next event may claim
  while (k < n) {
    if (dev(k) <= hi) {
      ++k;
      continue;
    }
    std::size_t begin = k;
    while (begin > floor && dev(begin - 1) > lo) --begin;

    std::size_t peak = k;
    std::size_t fall = k;
    while (fall < n && dev(fall) >= lo) {
      if (dev(fall) > dev(peak)) peak = fall;
      ++fall;
    }
    const std::size_t last = std::min(fall, n - 1);

    SpikeEvent ev;
    ev.t_peak = trace.t[peak];
    ev.t_start = trace.t[begin];
    ev.t_end = trace.t[last];
    ev.window_begin = begin;

    const double half = 0.5 * dev(peak);
    std::size_t a = peak;
    std::size_t b = peak;
    while (a > begin && dev(a - 1) >= half) --a;
    while (b + 1 < n && dev(b + 1) >= half) ++b;
    ev.width = static_cast<double>(b - a + 1) * trace.dt;

    train.events.push_back(ev);
    floor = fall;
    k = fall;
  }

  for (std::size_t e = 0; e < train.events.size(); ++e) {
    auto& ev = train.events[e];
    ev.window_end = e + 1 < train.events.size() ? train.events[e + 1].window_begin - 1 : n - 1;
    const auto first = x.begin() + static_cast<std::ptrdiff_t>(ev.window_begin);
    const auto past = x.begin() + static_cast<std::ptrdiff_t>(ev.window_end) + 1;
    const auto [mn, mx] = std::minmax_element(first, past);
    ev.v_pp = *mx - *mn;
    ev.s_peak = *std::max_element(trace.s.begin() + static_cast<std::ptrdiff_t>(ev.window_begin),
                                  trace.s.begin() + static_cast<std::ptrdiff_t>(ev.window_end) + 1);
  }
  return train;
}

DetectorConfig calibrate_detector(const System& sys, const SimConfig& cfg,
                                  const ReferencePulse& pulse, double upper, double lower,
                                  Channel channel) {
  SimConfig run = cfg;
  run.noise_enabled = false;
  run.duration = pulse.start + pulse.width + pulse.tail;
  const Trace tr = integrate(square_pulse(pulse.start, pulse.width, pulse.amplitude), sys, run);
  const auto x = tr.channel(channel);
  double amp = 0.0;
  for (double v : x) amp = std::max(amp, std::abs(v - x[0]));

  DetectorConfig d;
  d.upper = upper;
  d.lower = lower;
  d.reference_amplitude = amp;
  d.baseline = x[0];
  d.channel = channel;
  d.validate();
  return d;
}

ThresholdReport threshold_sweep(std::span<const double> amplitudes, const ReferencePulse& pulse,
                                const System& sys, const SimConfig& cfg,
                                const DetectorConfig& detector, Execution exec) {
  if (!std::is_sorted(amplitudes.begin(), amplitudes.end())) {
    throw InvalidArgument("threshold_sweep: amplitudes must be sorted ascending");
  }
  ThresholdReport r;
  r.amplitudes.assign(amplitudes.begin(), amplitudes.end());
  r.spike_counts.assign(amplitudes.size(), 0);

  SimConfig run = cfg;
  run.duration = pulse.start + pulse.width + pulse.tail;
  for_each_trial(amplitudes.size(), exec, [&](std::size_t k) {
    SimConfig trial = run;
    trial.rng_seed = trajectory_seed(cfg.rng_seed, k);
    const Trace tr = integrate(square_pulse(pulse.start, pulse.width, amplitudes[k]), sys, trial);
    r.spike_counts[k] = static_cast<int>(detect_spikes(tr, detector).size());
  });

  std::optional<std::size_t> last_silent;
  std::optional<std::size_t> first_spiking;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    if (r.spike_counts[k] == 0) last_silent = k;
  }
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    if (r.spike_counts[k] > 0 && (!last_silent || k > *last_silent)) {
      first_spiking = k;
      break;
    }
  }
  if (last_silent && first_spiking) {
    r.threshold = 0.5 * (amplitudes[*last_silent] + amplitudes[*first_spiking]);
  }
  return r;
}

std::vector<double> RefractoryReport::double_spike_frequency() const {
  std::vector<double> out;
  out.reserve(spike_counts.size());
  for (const auto& trials : spike_counts) {
    const auto twos = std::count(trials.begin(), trials.end(), 2);
    out.push_back(trials.empty() ? 0.0
                                 : static_cast<double>(twos) / static_cast<double>(trials.size()));
  }
  return out;
}

RefractoryReport refractory_sweep(std::span<const double> separations,
                                  const ReferencePulse& pulse, const System& sys,
                                  const SimConfig& cfg, const DetectorConfig& detector,
                                  const RefractoryOptions& options) {
  if (separations.empty()) throw InvalidArgument("refractory_sweep: no separations");
  if (!std::is_sorted(separations.begin(), separations.end()) || separations.front() < 0.0) {
    throw InvalidArgument("refractory_sweep: separations must be >= 0 and ascending");
  }
  const std::size_t trials = cfg.noise_enabled ? std::max<std::size_t>(options.seeds, 1) : 1;

  SimConfig single = cfg;
  single.noise_enabled = false;
  single.duration = pulse.start + pulse.width + pulse.tail;
  const Trace probe = integrate(square_pulse(pulse.start, pulse.width, pulse.amplitude), sys, single);
  if (detect_spikes(probe, detector).empty()) {
    throw PulseSubThreshold("pulse sub-threshold: a single protocol pulse elicits no spike");
  }

  RefractoryReport r;
  r.separations.assign(separations.begin(), separations.end());
  r.spike_counts.assign(separations.size(), std::vector<int>(trials, 0));
  if (options.keep_traces) r.traces.resize(separations.size() * trials);

  SimConfig run = cfg;
  run.duration = pulse.start + separations.back() + pulse.width + pulse.tail;
  for_each_trial(separations.size() * trials, options.exec, [&](std::size_t idx) {
    const std::size_t k = idx / trials;
    const std::size_t trial = idx % trials;
    SimConfig c = run;
    c.rng_seed = trajectory_seed(cfg.rng_seed, idx);
    Trace tr = integrate(doublet(pulse.start, pulse.width, pulse.amplitude, separations[k]), sys, c);
    r.spike_counts[k][trial] = static_cast<int>(detect_spikes(tr, detector).size());
    if (options.keep_traces) r.traces[idx] = std::move(tr);
  });

  for (std::size_t k = 0; k < separations.size(); ++k) {
    const auto& row = r.spike_counts[k];
    if (std::all_of(row.begin(), row.end(), [](int c) { return c == 2; })) {
      r.t_ref = separations[k];
      break;
    }
  }
  return r;
}

Matrix temporal_map(std::span<const Trace> traces, Channel channel) {
  Matrix m;
  if (traces.empty()) return m;
  m.rows = traces.size();
  m.cols = traces.front().size();
  for (const auto& tr : traces) {
    if (tr.size() != m.cols || tr.dt != traces.front().dt) {
      throw InvalidArgument("temporal_map: traces differ in length or sampling interval");
    }
  }
  m.data.reserve(m.rows * m.cols);
  for (const auto& tr : traces) {
    const auto x = tr.channel(channel);
    m.data.insert(m.data.end(), x.begin(), x.end());
  }
  return m;
}

}  // namespace prl
