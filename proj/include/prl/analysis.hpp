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
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "prl/dynamics.hpp"
#include "prl/parallel.hpp"

namespace prl {

/// Schmitt-trigger spike detector. Thresholds are fractions of the
/// reference full-spike amplitude measured from the rest baseline.
struct DetectorConfig {
  double upper = 0.5;
  double lower = 0.2;
  double reference_amplitude = 0.0;
  /// Rest value of the channel; the first trace sample when absent.
  std::optional<double> baseline;
  Channel channel = Channel::V;

  void validate() const;
  bool operator==(const DetectorConfig&) const = default;
};

struct SpikeEvent {
  double t_peak = 0.0;
  /// Peak-to-peak of the detection channel over the event window.
  double v_pp = 0.0;
  double s_peak = 0.0;
  /// Time the deviation stays above half its maximum.
  double width = 0.0;
  /// Crossings of the lower threshold around the excursion.
  double t_start = 0.0;
  double t_end = 0.0;
  /// Sample range [window_begin, window_end] attributed to this event. It
  /// runs from the rising lower-threshold crossing up to the next event (or
  /// the end of the trace), so it holds the after-spike undershoot.
  std::size_t window_begin = 0;
  std::size_t window_end = 0;

  double duration() const noexcept { return t_end - t_start; }
  bool operator==(const SpikeEvent&) const = default;
};

struct SpikeTrain {
  std::vector<SpikeEvent> events;
  DetectorConfig detector;

  std::size_t size() const noexcept { return events.size(); }
  bool empty() const noexcept { return events.empty(); }
  bool operator==(const SpikeTrain&) const = default;
};

SpikeTrain detect_spikes(const Trace& trace, const DetectorConfig& detector);

/// A super-threshold square pulse used to measure the reference amplitude
/// and as the default trigger of the protocols.
struct ReferencePulse {
  double start = 0.2e-9;
  double width = 20e-12;
  double amplitude = 0.0;
  /// Simulated time after the pulse ends.
  double tail = 1.5e-9;

  bool operator==(const ReferencePulse&) const = default;
};

/// Runs `pulse` from rest (noise off) and takes the largest deviation of the
/// channel from its rest value as the reference amplitude.
DetectorConfig calibrate_detector(const System& sys, const SimConfig& cfg,
                                  const ReferencePulse& pulse, double upper = 0.5,
                                  double lower = 0.2, Channel channel = Channel::V);

struct ThresholdReport {
  std::vector<double> amplitudes;
  std::vector<int> spike_counts;
  /// Midpoint between the largest silent and the smallest spiking amplitude;
  /// empty when the transition lies outside the swept range.
  std::optional<double> threshold;

  bool operator==(const ThresholdReport&) const = default;
};

/// One simulation per amplitude of a square pulse of `width` starting at
/// `pulse.start`; `pulse.amplitude` is ignored.
ThresholdReport threshold_sweep(std::span<const double> amplitudes, const ReferencePulse& pulse,
                                const System& sys, const SimConfig& cfg,
                                const DetectorConfig& detector,
                                Execution exec = Execution::parallel);

struct RefractoryReport {
  std::vector<double> separations;
  /// spike_counts[k][trial]; one trial in deterministic mode.
  std::vector<std::vector<int>> spike_counts;
  std::optional<double> t_ref;
  /// Row-major [separation][trial] traces, only when requested.
  std::vector<Trace> traces;

  /// Fraction of trials with two spikes, per separation.
  std::vector<double> double_spike_frequency() const;
};

struct RefractoryOptions {
  /// Trials per separation when noise is enabled.
  std::size_t seeds = 20;
  bool keep_traces = false;
  Execution exec = Execution::parallel;
};

/// Pulse doublets with rising edges `separations` apart. Every trial of a
/// sweep is simulated over the same duration. Throws PulseSubThreshold when
/// a single pulse does not spike.
RefractoryReport refractory_sweep(std::span<const double> separations,
                                  const ReferencePulse& pulse, const System& sys,
                                  const SimConfig& cfg, const DetectorConfig& detector,
                                  const RefractoryOptions& options = {});

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
  bool operator==(const Matrix&) const = default;
};

/// Stacks one channel of equally sampled traces, one row per trace.
Matrix temporal_map(std::span<const Trace> traces, Channel channel = Channel::V);

}  // namespace prl
