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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prl/iv_model.hpp"
#include "prl/stimulus.hpp"

namespace prl {

/// RTD circuit: capacitance, inductance, series resistance, DC bias and
/// photodetector gain (A per photon-count unit of S0).
struct CircuitParams {
  double C = 0.0;
  double L = 0.0;
  double R = 0.0;
  double V0 = 0.0;
  double kappa = 0.0;

  void validate() const;
  bool operator==(const CircuitParams&) const = default;
};

/// Nanolaser rate-equation constants.
struct LaserParams {
  double gamma_m = 0.0;   // modal gain coefficient (1/s)
  double gamma_l = 0.0;   // loss into other modes (1/s)
  double gamma_nr = 0.0;  // non-radiative recombination (1/s)
  double N0 = 0.0;        // transparency carrier number
  double tau_p = 0.0;     // photon lifetime (s)
  double eta = 0.2;       // voltage-to-pump coupling efficiency
  double R0 = 50.0;       // coupling load (ohm)
  double q_e = 1.602176634e-19;

  void validate() const;
  bool operator==(const LaserParams&) const = default;
};

/// Everything the right-hand side needs.
struct System {
  SchulmanIV iv;
  CircuitParams circuit;
  LaserParams laser;

  void validate() const;

  /// The same dynamics on a time axis stretched by `factor`: L and C grow by
  /// `factor`, laser rates shrink by it. Voltages, currents and photon
  /// numbers are unchanged as functions of t / factor.
  System time_scaled(double factor) const;

  bool operator==(const System&) const = default;
};

struct State {
  double v = 0.0;
  double i = 0.0;
  double s = 0.0;
  double n = 0.0;
  double t = 0.0;

  bool operator==(const State&) const = default;
};

enum class Channel { V, I, S, N, S0 };

/// Uniformly sampled trajectory. `s0` holds the photon flux applied during
/// the step that starts at each sample.
struct Trace {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> v;
  std::vector<double> i;
  std::vector<double> s;
  std::vector<double> n;
  std::vector<double> s0;

  std::size_t size() const noexcept { return t.size(); }
  bool empty() const noexcept { return t.empty(); }
  State state(std::size_t k) const { return {v[k], i[k], s[k], n[k], t[k]}; }
  std::span<const double> channel(Channel c) const;

  bool operator==(const Trace&) const = default;
};

enum class Scheme { euler, heun };

struct SimConfig {
  double dt = 1e-13;
  std::size_t output_stride = 1;
  double duration = 1e-9;
  bool noise_enabled = false;
  std::uint64_t rng_seed = 0;
  Scheme scheme = Scheme::euler;
  std::optional<State> initial_state;

  void validate() const;
  SimConfig time_scaled(double factor) const;

  bool operator==(const SimConfig&) const = default;
};

/// Bias V0 that puts the DC rest voltage at `v_rest`.
double bias_for_rest_voltage(const SchulmanIV& iv, double R, double v_rest);

/// Bias V0 whose rest voltage sits at `fraction` of the NDC onset voltage.
double bias_for_fraction(const SchulmanIV& iv, double R, double fraction);

/// Carrier and photon numbers of the laser at constant voltage `v`.
std::pair<double, double> laser_steady_state(const LaserParams& lp, double v);

/// DC fixed point on the positive-conductance branch below the NDC onset.
/// Throws BiasBeyondPeak or NoLaserSteadyState.
State quiescent_point(const System& sys);

/// One Euler-Maruyama step. `xi` is the standard normal draw of the photon
/// noise (nullopt: deterministic). S and N are clamped at zero afterwards.
State step(const State& state, double s0_now, const System& sys, double dt,
           std::optional<double> xi = std::nullopt);

/// Deterministic Heun (trapezoidal predictor-corrector) step on the drift.
State step_heun(const State& state, double s0_now, const System& sys, double dt);

Trace integrate(const Stimulus& stimulus, const System& sys, const SimConfig& cfg);

/// Per-trajectory seed derived from a base seed (splitmix64 mixing).
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t trajectory_index);

struct ConvergenceReport {
  double dt_coarse = 0.0;
  double dt_fine = 0.0;
  // Largest deviation at common sample times.
  double max_dv = 0.0;
  double max_di = 0.0;
  double max_ds = 0.0;
  double max_dn = 0.0;
  // Time of largest |V - V(0)| in each run and their difference.
  double peak_time_coarse = 0.0;
  double peak_time_fine = 0.0;
  double peak_time_shift = 0.0;
  double vpp_coarse = 0.0;
  double vpp_fine = 0.0;
  double vpp_relative_change = 0.0;
};

/// Runs `integrate` at cfg.dt and cfg.dt / 2 (noise off) and compares them.
ConvergenceReport convergence_check(const Stimulus& stimulus, const System& sys,
                                    const SimConfig& cfg);

}  // namespace prl
