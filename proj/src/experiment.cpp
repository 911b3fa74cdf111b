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
#include "prl/experiment.hpp"

#include <cmath>
#include <cstdio>

#include "prl/analysis.hpp"
#include "prl/errors.hpp"
#include "prl/io.hpp"
#include "prl/iv_model.hpp"
#include "prl/stimulus.hpp"
#include "prl/tasks.hpp"

namespace prl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void text(const std::string& name, std::string_view body) {
    write_text(dir_ / name, body);
    files_.push_back(name);
  }
  void trace(const std::string& name, const Trace& tr) { text(name, format_trace_csv(tr)); }
  void report(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

  RunResult finish(ExperimentConfig cfg, int code) {
    // Location-independent, so reruns elsewhere hash the same.
    cfg.output_dir = ".";
    const std::string resolved = serialize_config(cfg);
    text("config.cfg", resolved);
    write_manifest(dir_, resolved, cfg.sim.rng_seed, files_);
    return {code, dir_, files_};
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

DetectorConfig detector_for(const ExperimentConfig& cfg) {
  if (!(cfg.reference.amplitude > 0.0)) {
    throw InvariantViolation("calibration.amplitude", "must be > 0 to calibrate the spike detector");
  }
  return calibrate_detector(cfg.system, cfg.sim, cfg.reference, cfg.detector.upper,
                            cfg.detector.lower, cfg.detector.channel);
}

void run_simulate(const ExperimentConfig& cfg, Writer& w) {
  const Trace tr = integrate(cfg.stimulus(), cfg.system, cfg.sim);
  w.trace("trace.csv", tr);
  if (cfg.reference.amplitude > 0.0) {
    w.report("spikes.json", to_json(detect_spikes(tr, detector_for(cfg))));
  }
}

void run_iv(const ExperimentConfig& cfg, Writer& w) {
  const auto& scan = cfg.iv_scan;
  const IVMetadata meta = analyze_iv(cfg.system.iv, {scan.v_min, scan.v_max}, scan.resolution);
  const auto count = static_cast<std::size_t>(std::llround((scan.v_max - scan.v_min) / scan.export_step));
  std::string csv = "V,I\n";
  for (std::size_t k = 0; k <= count; ++k) {
    const double v = scan.v_min + scan.export_step * static_cast<double>(k);
    csv += format_double(v) + "," + format_double(schulman_current(v, cfg.system.iv)) + "\n";
  }
  w.text("iv.csv", csv);
  w.report("iv_metadata.json", to_json(meta));
}

void run_threshold(const ExperimentConfig& cfg, const RunOptions& opt, Writer& w) {
  if (cfg.threshold.amplitudes.empty()) throw InvariantViolation("threshold.amplitudes", "must not be empty");
  ReferencePulse pulse = cfg.reference;
  pulse.width = cfg.threshold.pulse_width;
  const auto report = threshold_sweep(cfg.threshold.amplitudes, pulse, cfg.system, cfg.sim,
                                      detector_for(cfg), opt.exec);
  json j = to_json(report);
  j["pulse_width"] = pulse.width;
  w.report("threshold.json", j);
}

void run_refractory(const ExperimentConfig& cfg, const RunOptions& opt, Writer& w) {
  if (cfg.refractory.separations.empty()) {
    throw InvariantViolation("refractory.separations", "must not be empty");
  }
  ReferencePulse pulse = cfg.reference;
  if (cfg.refractory.pulse_width) pulse.width = *cfg.refractory.pulse_width;
  if (cfg.refractory.amplitude) pulse.amplitude = *cfg.refractory.amplitude;
  RefractoryOptions ro;
  ro.seeds = cfg.refractory.seeds;
  ro.keep_traces = true;
  ro.exec = opt.exec;
  const auto report =
      refractory_sweep(cfg.refractory.separations, pulse, cfg.system, cfg.sim, detector_for(cfg), ro);
  json j = to_json(report);
  j["pulse_width"] = pulse.width;
  j["amplitude"] = pulse.amplitude;
  j["noise"] = cfg.sim.noise_enabled;
  w.report("refractory.json", j);
  // Rows: one per separation (first trial), columns: V samples.
  std::vector<Trace> first;
  const std::size_t per = report.traces.size() / std::max<std::size_t>(1, report.separations.size());
  for (std::size_t k = 0; k < report.separations.size() && per > 0; ++k) {
    first.push_back(report.traces[k * per]);
  }
  if (!first.empty()) w.text("temporal_map.csv", format_matrix_csv(temporal_map(first)));
}

json task_summary(const TaskReport& report, const std::string& prefix, Writer& w) {
  json cases = json::array();
  for (std::size_t k = 0; k < report.results.size(); ++k) {
    const auto& r = report.results[k];
    const std::string name = prefix + "_" + std::to_string(k) + "_" + r.label + ".csv";
    w.trace(name, report.traces[k]);
    json c = to_json(r);
    c["trace"] = name;
    cases.push_back(c);
  }
  return {{"cases", cases}, {"pass", report.all_pass()}};
}

int run_and(const ExperimentConfig& cfg, const RunOptions& opt, Writer& w) {
  const auto& spec = cfg.coincidence;
  if (spec.deltas.empty()) throw InvariantViolation("and.deltas", "must not be empty");
  const DetectorConfig det = detector_for(cfg);
  AndParams p;
  p.pulse_start = spec.pulse_start;
  p.width = spec.pulse_width;
  p.tail = cfg.reference.tail;
  if (spec.coincidence_window) p.coincidence_window = *spec.coincidence_window;
  if (spec.amplitude) {
    p.amplitude = *spec.amplitude;
  } else {
    if (spec.calibration_amplitudes.empty()) {
      throw InvariantViolation("and.calibration_amplitudes", "needed when and.amplitude is absent");
    }
    p.amplitude = calibrate_and_amplitude(spec.calibration_amplitudes, spec.pulse_width, cfg.system,
                                          cfg.sim, det, spec.fraction, opt.exec);
  }
  const TaskReport report = and_task(spec.deltas, p, cfg.system, cfg.sim, det, opt.exec);
  json j = task_summary(report, "and", w);
  j["amplitude"] = p.amplitude;
  j["pulse_width"] = p.width;
  j["coincidence_window"] = p.coincidence_window >= 0.0 ? p.coincidence_window : p.width / 2.0;
  w.report("and_summary.json", j);
  return report.all_pass() ? kExitOk : kExitTaskFailed;
}

int run_xor(const ExperimentConfig& cfg, const RunOptions& opt, Writer& w) {
  const auto& spec = cfg.exclusive_or;
  XorParams p;
  p.pulse_start = spec.pulse_start;
  p.width = spec.pulse_width;
  p.amplitude = spec.amplitude.value_or(cfg.reference.amplitude);
  p.polarity_a = spec.polarity_a;
  p.tail = cfg.reference.tail;
  const TaskReport report = xor_task(p, cfg.system, cfg.sim, detector_for(cfg), opt.exec);
  json j = task_summary(report, "xor", w);
  j["amplitude"] = p.amplitude;
  j["pulse_width"] = p.width;
  j["polarity_a"] = p.polarity_a;
  w.report("xor_summary.json", j);
  return report.all_pass() ? kExitOk : kExitTaskFailed;
}

void run_convergence(const ExperimentConfig& cfg, Writer& w) {
  SimConfig sim = cfg.sim;
  Stimulus stim;
  if (cfg.branches.empty()) {
    stim = square_pulse(cfg.reference.start, cfg.reference.width, cfg.reference.amplitude);
    sim.duration = cfg.reference.start + cfg.reference.width + cfg.reference.tail;
  } else {
    stim = cfg.stimulus();
  }
  w.report("convergence.json", to_json(convergence_check(stim, cfg.system, sim)));
}

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& options) {
  if (options.out_dir) cfg.output_dir = options.out_dir->string();
  if (options.seed) cfg.sim.rng_seed = *options.seed;
  if (options.dt) {
    cfg.sim.dt = *options.dt;
    cfg.sim.validate();
  }
  return cfg;
}

RunResult run_experiment(const ExperimentConfig& base, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(base, options);
  Writer w(cfg.output_dir);
  int code = kExitOk;
  switch (cfg.kind) {
    case ExperimentKind::simulate: run_simulate(cfg, w); break;
    case ExperimentKind::iv: run_iv(cfg, w); break;
    case ExperimentKind::threshold: run_threshold(cfg, options, w); break;
    case ExperimentKind::refractory: run_refractory(cfg, options, w); break;
    case ExperimentKind::coincidence: code = run_and(cfg, options, w); break;
    case ExperimentKind::exclusive_or: code = run_xor(cfg, options, w); break;
    case ExperimentKind::convergence: run_convergence(cfg, w); break;
  }
  return w.finish(cfg, code);
}

RunResult export_stimulus(const ExperimentConfig& base, const RunOptions& options) {
  const ExperimentConfig cfg = apply_overrides(base, options);
  Writer w(cfg.output_dir);
  const double dt = cfg.sim.dt * static_cast<double>(cfg.sim.output_stride);
  const auto count = static_cast<std::size_t>(std::llround(cfg.sim.duration / dt)) + 1;
  const auto values = sample(cfg.stimulus(), dt, count);
  std::string csv = "t,S0\n";
  for (std::size_t k = 0; k < count; ++k) {
    csv += format_double(dt * static_cast<double>(k)) + "," + format_double(values[k]) + "\n";
  }
  w.text("stimulus.csv", csv);
  return w.finish(cfg, kExitOk);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumericalError;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) {
    return kExitConfigError;
  }
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitConfigError;
  return kExitNumericalError;
}

}  // namespace prl
