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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prl/analysis.hpp"
#include "prl/dynamics.hpp"
#include "prl/stimulus.hpp"

namespace prl {

enum class ExperimentKind { simulate, iv, threshold, refractory, coincidence, exclusive_or, convergence };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct IvScanSpec {
  double v_min = 0.0;
  double v_max = 1.0;
  double export_step = 1e-3;
  int resolution = 20000;

  bool operator==(const IvScanSpec&) const = default;
};

struct ThresholdSpec {
  std::vector<double> amplitudes;
  double pulse_width = 20e-12;

  bool operator==(const ThresholdSpec&) const = default;
};

struct RefractorySpec {
  std::vector<double> separations;
  /// Defaults to the reference pulse when absent.
  std::optional<double> pulse_width;
  std::optional<double> amplitude;
  std::size_t seeds = 20;

  bool operator==(const RefractorySpec&) const = default;
};

struct AndSpec {
  std::vector<double> deltas;
  double pulse_width = 60e-12;
  double pulse_start = 0.3e-9;
  /// Absent: calibrate as `fraction` x the single-pulse threshold over
  /// `calibration_amplitudes`.
  std::optional<double> amplitude;
  double fraction = 0.7;
  std::vector<double> calibration_amplitudes;
  std::optional<double> coincidence_window;

  bool operator==(const AndSpec&) const = default;
};

struct XorSpec {
  double pulse_width = 40e-12;
  double pulse_start = 0.3e-9;
  std::optional<double> amplitude;  // defaults to the reference pulse amplitude
  int polarity_a = 1;

  bool operator==(const XorSpec&) const = default;
};

struct DetectorSpec {
  double upper = 0.5;
  double lower = 0.2;
  Channel channel = Channel::V;

  bool operator==(const DetectorSpec&) const = default;
};

/// A fully resolved experiment description.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  std::string param_set;
  std::string output_dir = "out";
  System system;
  /// When set, V0 was derived from it: rest voltage = fraction x NDC onset.
  std::optional<double> bias_fraction;
  SimConfig sim;
  ReferencePulse reference;
  DetectorSpec detector;
  std::vector<Branch> branches;
  IvScanSpec iv_scan;
  ThresholdSpec threshold;
  RefractorySpec refractory;
  AndSpec coincidence;
  XorSpec exclusive_or;

  /// Combined photodetector input of the declared branches.
  Stimulus stimulus() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Directories searched for `<param_set>.cfg`, in order: `extra`, the
/// PRL_PARAM_PATH environment variable, and the bundled configs directory.
std::vector<std::filesystem::path> param_search_path(
    const std::vector<std::filesystem::path>& extra = {});

ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::filesystem::path>& search = {});

ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every resolved value; parse_config of the output yields an equal config.
std::string serialize_config(const ExperimentConfig& cfg);

/// 17 significant digits; parses back to exactly `x`.
std::string format_double(double x);

}  // namespace prl
