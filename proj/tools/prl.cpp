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
#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "prl/config.hpp"
#include "prl/errors.hpp"
#include "prl/experiment.hpp"
#include "prl/io.hpp"

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool serial = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment config file")->required();
  cmd->add_option("--out-dir", c.out_dir, "Output directory (overrides the config)");
  cmd->add_option("--seed", c.seed, "Base RNG seed (overrides the config)");
  cmd->add_option("--dt", c.dt, "Integration step in seconds (overrides the config)");
  cmd->add_flag("--serial", c.serial, "Run sweeps on one thread");
}

prl::RunOptions options_from(const Common& c) {
  prl::RunOptions o;
  if (!c.out_dir.empty()) o.out_dir = c.out_dir;
  o.seed = c.seed;
  o.dt = c.dt;
  o.exec = c.serial ? prl::Execution::serial : prl::Execution::parallel;
  return o;
}

int report(const prl::RunResult& r) {
  std::cout << "wrote " << r.files.size() + 1 << " files to " << r.out_dir.string() << "\n";
  if (r.exit_code == prl::kExitTaskFailed) std::cerr << "truth table check failed\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic resonant-tunnelling neuron simulator"};
  app.set_version_flag("--version", std::string(prl::tool_version()));
  app.require_subcommand(1);

  Common common;
  std::optional<prl::ExperimentKind> kind;
  bool export_stim = false;

  const std::pair<const char*, prl::ExperimentKind> kinds[] = {
      {"simulate", prl::ExperimentKind::simulate},
      {"iv", prl::ExperimentKind::iv},
      {"threshold", prl::ExperimentKind::threshold},
      {"refractory", prl::ExperimentKind::refractory},
      {"and", prl::ExperimentKind::coincidence},
      {"xor", prl::ExperimentKind::exclusive_or},
      {"convergence", prl::ExperimentKind::convergence},
  };
  const char* help[] = {
      "Integrate the declared stimulus and write the trace",
      "Export the I-V curve and its peak/valley metadata",
      "Sweep single-pulse amplitude to locate the excitability threshold",
      "Sweep doublet separation to find the refractory period",
      "Coincidence detection truth table",
      "Exclusive-or truth table with bipolar branch encoding",
      "Compare runs at dt and dt/2",
  };
  for (std::size_t k = 0; k < std::size(kinds); ++k) {
    auto* cmd = app.add_subcommand(kinds[k].first, help[k]);
    add_common(cmd, common);
    const auto value = kinds[k].second;
    cmd->callback([&kind, value] { kind = value; });
  }
  auto* stim = app.add_subcommand("stimulus", "Stimulus utilities");
  stim->require_subcommand(1);
  auto* exp = stim->add_subcommand("export", "Write the sampled stimulus as CSV");
  add_common(exp, common);
  exp->callback([&export_stim] { export_stim = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : prl::kExitConfigError;
  }

  try {
    prl::ExperimentConfig cfg = prl::load_config(common.config);
    const auto opts = options_from(common);
    if (export_stim) return report(prl::export_stimulus(cfg, opts));
    cfg.kind = *kind;
    return report(prl::run_experiment(cfg, opts));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return prl::exit_code_for(e);
  }
}
