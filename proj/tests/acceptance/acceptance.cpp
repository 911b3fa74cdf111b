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
// Acceptance checks on the nanoscale-default parameter set. One line per
// criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "prl/analysis.hpp"
#include "prl/config.hpp"
#include "prl/experiment.hpp"
#include "prl/io.hpp"
#include "prl/tasks.hpp"

using namespace prl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, <= 0: none
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig base() {
  return parse_config("[experiment]\nparam_set = nanoscale-default\n", {PRL_SOURCE_DIR "/configs"});
}

ExperimentConfig experiment(const std::string& name) {
  return load_config(PRL_SOURCE_DIR "/experiments/" + name + ".cfg");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "prl_acceptance" / name;
  fs::remove_all(p);
  return p;
}

Trace run_pulse(const ExperimentConfig& c, double amplitude, double dt = 0.0) {
  SimConfig s = c.sim;
  if (dt > 0.0) s.dt = dt;
  s.duration = c.reference.start + c.reference.width + c.reference.tail;
  return integrate(square_pulse(c.reference.start, c.reference.width, amplitude), c.system, s);
}

double peak_to_peak(const Trace& tr) {
  const auto [lo, hi] = std::minmax_element(tr.v.begin(), tr.v.end());
  return *hi - *lo;
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<int>(std::llround((hi - lo) / step));
  for (int k = 0; k <= n; ++k) v.push_back(lo + step * k);
  return v;
}

Outcome ndc_window() {
  const auto dir = scratch("iv");
  RunOptions o;
  o.out_dir = dir;
  run_experiment(experiment("iv"), o);
  const auto meta = nlohmann::json::parse(read_text(dir / "iv_metadata.json"));
  const double lo = meta["ndc_lo"].get<double>() * 1e3;
  const double hi = meta["ndc_hi"].get<double>() * 1e3;
  return {lo >= 604 && lo <= 614 && hi >= 715 && hi <= 725,
          fmt("ndc_lo=%.2f mV ndc_hi=%.2f mV", lo, hi)};
}

Outcome single_spike() {
  const auto c = base();
  const auto d = calibrate_detector(c.system, c.sim, c.reference);
  const auto strong = detect_spikes(run_pulse(c, c.reference.amplitude), d);
  const auto weak = detect_spikes(run_pulse(c, 0.5 * c.reference.amplitude), d);
  const bool one = strong.size() == 1;
  const double vpp = one ? strong.events[0].v_pp : 0.0;
  const double dur = one ? strong.events[0].duration() : 0.0;
  return {one && vpp > 1.0 && dur < 1e-9 && weak.empty(),
          fmt("S0=%g: %zu spike, v_pp=%.3f V, duration=%.1f ps; S0=%g: %zu spikes",
              c.reference.amplitude, strong.size(), vpp, dur * 1e12, 0.5 * c.reference.amplitude,
              weak.size())};
}

Outcome refractoriness() {
  const auto c = base();
  const auto d = calibrate_detector(c.system, c.sim, c.reference);
  const auto r = refractory_sweep(range(100e-12, 500e-12, 50e-12), c.reference, c.system, c.sim, d);
  const double t = r.t_ref ? *r.t_ref * 1e12 : NAN;
  return {r.t_ref && t >= 250 && t <= 350, fmt("t_ref=%.0f ps (max rate %.2f GHz)", t, 1e3 / t)};
}

Outcome coincidence() {
  const auto c = base();
  const auto d = calibrate_detector(c.system, c.sim, c.reference);
  AndParams p;
  p.width = 60e-12;
  p.amplitude = calibrate_and_amplitude(range(1000, 2000, 10), p.width, c.system, c.sim, d);
  const std::vector<double> deltas{0, 30e-12, 90e-12, 150e-12};
  const auto rep = and_task(deltas, p, c.system, c.sim, d);
  const std::vector<int> want{1, 1, 0, 0};
  std::vector<int> got;
  for (const auto& r : rep.results) got.push_back(r.spike_count);
  return {got == want, fmt("amplitude=%.0f per branch; delta 0/30/90/150 ps -> %d %d %d %d", p.amplitude,
                           got[0], got[1], got[2], got[3])};
}

Outcome exclusive_or() {
  const auto c = base();
  const auto d = calibrate_detector(c.system, c.sim, c.reference);
  XorParams p;
  p.amplitude = c.reference.amplitude;
  const auto rep = xor_task(p, c.system, c.sim, d);
  std::vector<int> got;
  for (const auto& r : rep.results) got.push_back(r.spike_count);
  return {got == std::vector<int>{0, 1, 1, 0},
          fmt("00/10/01/11 -> %d %d %d %d", got[0], got[1], got[2], got[3])};
}

Outcome all_or_nothing() {
  const auto c = base();
  const auto d = calibrate_detector(c.system, c.sim, c.reference);
  const auto th = threshold_sweep(range(1000, 6000, 10), c.reference, c.system, c.sim, d);
  if (!th.threshold) return {false, "no threshold in sweep"};
  const double a = *th.threshold;
  std::vector<double> vpp;
  bool single = true;
  for (double k : {1.5, 2.0, 3.0}) {
    const auto s = detect_spikes(run_pulse(c, k * a), d);
    single = single && s.size() == 1;
    vpp.push_back(s.empty() ? 0.0 : s.events[0].v_pp);
  }
  const auto [mn, mx] = std::minmax_element(vpp.begin(), vpp.end());
  const double spread = (*mx - *mn) / *mx;
  const Trace sub = run_pulse(c, 0.5 * a);
  const double sub_ratio = peak_to_peak(sub) / *mn;
  const bool silent = detect_spikes(sub, d).empty();
  return {single && spread < 0.10 && silent && sub_ratio < 0.20,
          fmt("threshold=%.0f; v_pp at 1.5/2/3x = %.3f %.3f %.3f V (spread %.1f%%); 0.5x response %.1f%%",
              a, vpp[0], vpp[1], vpp[2], 100 * spread, 100 * sub_ratio)};
}

Outcome convergence() {
  const auto c = base();
  SimConfig s = c.sim;
  s.dt = 100e-15;
  s.duration = c.reference.start + c.reference.width + c.reference.tail;
  const auto r = convergence_check(square_pulse(c.reference.start, c.reference.width, c.reference.amplitude),
                                   c.system, s);
  return {std::abs(r.peak_time_shift) < 1e-12 && r.vpp_relative_change < 0.01,
          fmt("peak shift %.3f ps, v_pp change %.3f%%", r.peak_time_shift * 1e12,
              100 * r.vpp_relative_change)};
}

Outcome scaling() {
  const auto c = base();
  const double k = 1e3;
  const System big = c.system.time_scaled(k);
  const SimConfig big_sim = c.sim.time_scaled(k);
  ReferencePulse big_pulse = c.reference;
  big_pulse.start *= k;
  big_pulse.width *= k;
  big_pulse.tail *= k;

  SimConfig s = c.sim;
  s.duration = c.reference.start + c.reference.width + c.reference.tail;
  const Trace a = integrate(square_pulse(c.reference.start, c.reference.width, c.reference.amplitude), c.system, s);
  const Trace b = integrate(square_pulse(big_pulse.start, big_pulse.width, big_pulse.amplitude), big,
                            s.time_scaled(k));
  if (a.size() != b.size()) return {false, "trace lengths differ"};
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a.v[j] - b.v[j]));
  const double shape_err = worst / peak_to_peak(a);

  const auto d = calibrate_detector(c.system, c.sim, c.reference);
  const auto db = calibrate_detector(big, big_sim, big_pulse);
  const auto seps = range(100e-12, 500e-12, 50e-12);
  std::vector<double> big_seps;
  for (double x : seps) big_seps.push_back(x * k);
  const auto ra = refractory_sweep(seps, c.reference, c.system, c.sim, d);
  const auto rb = refractory_sweep(big_seps, big_pulse, big, big_sim, db);
  if (!ra.t_ref || !rb.t_ref) return {false, "t_ref not found"};
  const double ratio = *rb.t_ref / *ra.t_ref;
  return {shape_err < 0.01 && std::abs(ratio / k - 1.0) < 0.10,
          fmt("L,C x1e3 (LC x1e6), time x1e3: shape error %.2e of v_pp, t_ref %.0f ps -> %.1f ns (x%.0f)",
              shape_err, *ra.t_ref * 1e12, *rb.t_ref * 1e9, ratio)};
}

Outcome reproducibility() {
  auto cfg = experiment("simulate");
  cfg.sim.noise_enabled = true;
  cfg.sim.rng_seed = 2024;
  const auto d1 = scratch("repro_a");
  const auto d2 = scratch("repro_b");
  RunOptions o;
  o.out_dir = d1;
  run_experiment(cfg, o);
  o.out_dir = d2;
  run_experiment(cfg, o);
  const bool identical = read_text(d1 / "trace.csv") == read_text(d2 / "trace.csv");

  auto c = base();
  const auto det = calibrate_detector(c.system, c.sim, c.reference);
  const auto r = refractory_sweep(range(100e-12, 500e-12, 50e-12), c.reference, c.system, c.sim, det);
  if (!r.t_ref) return {false, "no deterministic t_ref"};
  c.sim.noise_enabled = true;
  c.sim.rng_seed = 7;
  RefractoryOptions ro;
  ro.seeds = 20;
  const std::vector<double> at{*r.t_ref + 50e-12};
  const auto noisy = refractory_sweep(at, c.reference, c.system, c.sim, det, ro);
  const double freq = noisy.double_spike_frequency()[0];
  return {identical && noisy.spike_counts[0].size() == 20 && freq == 1.0,
          fmt("seeded trace CSVs %s; %zu seeds at %.0f ps: %.0f%% double spikes",
              identical ? "byte-identical" : "DIFFER", noisy.spike_counts[0].size(), at[0] * 1e12, 100 * freq)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "NDC window", 1.0, ndc_window},
      {2, "single-spike triggering", 5.0, single_spike},
      {3, "refractoriness", 30.0, refractoriness},
      {4, "coincidence (AND)", 30.0, coincidence},
      {5, "XOR truth table", 30.0, exclusive_or},
      {6, "all-or-nothing", 0.0, all_or_nothing},
      {7, "convergence", 0.0, convergence},
      {8, "dimensional scaling", 0.0, scaling},
      {9, "reproducibility", 0.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string limit;
    if (c.time_limit > 0.0) {
      limit = fmt(" / limit %.0f s", c.time_limit);
      if (secs >= c.time_limit) {
        o.pass = false;
        o.detail += "; too slow";
      }
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] criterion %d %s: %s (%.2f s%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, limit.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(fs::temp_directory_path() / "prl_acceptance");
  return failures;
}
