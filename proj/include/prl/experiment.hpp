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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prl/config.hpp"
#include "prl/parallel.hpp"

namespace prl {

enum ExitCode : int {
  kExitOk = 0,
  kExitTaskFailed = 1,
  kExitConfigError = 2,
  kExitNumericalError = 3,
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  Execution exec = Execution::parallel;
};

struct RunResult {
  int exit_code = kExitOk;
  std::filesystem::path out_dir;
  /// Written files relative to out_dir, manifest.txt excluded.
  std::vector<std::string> files;
};

/// Config with the command-line overrides folded in.
ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& options);

/// Runs cfg.kind and writes its artifacts plus manifest.txt. Library errors
/// propagate as exceptions; see exit_code_for.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Samples the declared stimulus over the simulation window into stimulus.csv.
RunResult export_stimulus(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Maps a thrown exception to the CLI exit status (2 config, 3 numerical).
int exit_code_for(const std::exception& e);

}  // namespace prl
