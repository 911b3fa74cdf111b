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

#include <span>
#include <string>
#include <vector>

#include "prl/analysis.hpp"

namespace prl {

struct TaskResult {
  std::string label;
  /// Rising-edge offset of branch B relative to branch A (AND only).
  double delta = 0.0;
  int spike_count = 0;
  int expected = 0;
  bool pass = false;

  bool operator==(const TaskResult&) const = default;
};

struct TaskReport {
  std::vector<TaskResult> results;
  /// One trace per case, same order as `results`.
  std::vector<Trace> traces;

  bool all_pass() const;
};

/// Two-branch coincidence detection with square pulses.
struct AndParams {
  double pulse_start = 0.3e-9;
  double width = 60e-12;
  /// Per-branch amplitude; must be sub-threshold alone, super-threshold doubled.
  double amplitude = 0.0;
  /// Pulses whose rising edges are at most this far apart count as
  /// coincident. Negative selects half the pulse width.
  double coincidence_window = -1.0;
  double tail = 1.5e-9;
};

/// Per-branch AND amplitude: `fraction` of the single-pulse threshold found
/// by `threshold_sweep` over `amplitudes` with pulses of `width`.
double calibrate_and_amplitude(std::span<const double> amplitudes, double width,
                               const System& sys, const SimConfig& cfg,
                               const DetectorConfig& detector, double fraction = 0.7,
                               Execution exec = Execution::parallel);

/// Branch A fires at pulse_start, branch B delta later (or earlier for
/// negative delta). Throws AmplitudeMiscalibrated when the amplitude breaks
/// the precondition.
TaskReport and_task(std::span<const double> deltas, const AndParams& params, const System& sys,
                    const SimConfig& cfg, const DetectorConfig& detector,
                    Execution exec = Execution::parallel);

/// Exclusive OR with anti-phase bipolar pulses on the two branches.
struct XorParams {
  double pulse_start = 0.3e-9;
  double width = 40e-12;
  double amplitude = 0.0;
  /// Polarity of branch A; branch B always carries the opposite one.
  int polarity_a = 1;
  double tail = 1.5e-9;
};

/// The four input branch sets of the XOR truth table, in the order
/// 00, 10, 01, 11.
std::vector<std::vector<Branch>> xor_cases(const XorParams& params);

/// Cases {00, 10, 01, 11}, expected spike counts {0, 1, 1, 0}.
TaskReport xor_task(const XorParams& params, const System& sys, const SimConfig& cfg,
                    const DetectorConfig& detector, Execution exec = Execution::parallel);

}  // namespace prl
