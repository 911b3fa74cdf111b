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
#include "prl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "prl/errors.hpp"

namespace prl {
namespace {

// Range scanned when locating the NDC onset of a circuit's diode.
constexpr std::pair<double, double> kIvRange{0.0, 3.0};
constexpr int kIvResolution = 30000;

void check(bool ok, const char* field, const char* why) {
  if (!ok) throw InvariantViolation(field, why);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

struct Derivative {
  double dv, di, ds, dn;
};

// Deterministic right-hand side.
Derivative drift(const State& x, double s0, const System& sys) {
  const auto& cp = sys.circuit;
  const auto& lp = sys.laser;
  const double gain = lp.gamma_m * (x.n - lp.N0);
  Derivative d;
  d.dv = (x.i - schulman_current(x.v, sys.iv)) / cp.C;
  d.di = (cp.V0 + cp.R * cp.kappa * s0 - x.v - cp.R * x.i) / cp.L;
  d.ds = (gain - 1.0 / lp.tau_p) * x.s + lp.gamma_m * x.n;
  // Stimulated recombination uses the photon number for |E|^2.
  d.dn = lp.eta * x.v / (lp.q_e * lp.R0) - (lp.gamma_l + lp.gamma_m + lp.gamma_nr) * x.n -
         gain * x.s;
  return d;
}

State finish(State next) {
  if (!std::isfinite(next.v)) throw IntegrationBlowUp("V", next.t);
  if (!std::isfinite(next.i)) throw IntegrationBlowUp("I", next.t);
  if (!std::isfinite(next.s)) throw IntegrationBlowUp("S", next.t);
  if (!std::isfinite(next.n)) throw IntegrationBlowUp("N", next.t);
  next.s = std::max(next.s, 0.0);
  next.n = std::max(next.n, 0.0);
  return next;
}

// Smallest root of V0 - V - R f(V) = 0 on [lo, hi], by grid scan + bisection.
std::optional<double> smallest_load_line_root(const System& sys, double lo, double hi) {
  const auto residual = [&](double v) {
    return sys.circuit.V0 - v - sys.circuit.R * schulman_current(v, sys.iv);
  };
  constexpr int kCells = 4000;
  const double h = (hi - lo) / kCells;
  double a = lo;
  double ra = residual(a);
  if (ra == 0.0) return a;
  for (int k = 1; k <= kCells; ++k) {
    double b = k == kCells ? hi : lo + h * k;
    const double rb = residual(b);
    if (rb == 0.0) return b;
    if ((ra > 0.0) != (rb > 0.0)) {
      while (true) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double rm = residual(mid);
        if (rm == 0.0) return mid;
        if ((rm > 0.0) == (ra > 0.0)) {
          a = mid;
          ra = rm;
        } else {
          b = mid;
        }
      }
      return std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
    }
    a = b;
    ra = rb;
  }
  return std::nullopt;
}

}  // namespace

IntegrationBlowUp::IntegrationBlowUp(std::string variable, double time)
    : NumericalError("integration blow-up: " + variable + " became non-finite at t = " +
                     std::to_string(time) + " s"),
      variable_(std::move(variable)),
      time_(time) {}

void CircuitParams::validate() const {
  check(positive(C), "C", "must be > 0");
  check(positive(L), "L", "must be > 0");
  check(positive(R), "R", "must be > 0");
  check(std::isfinite(V0), "V0", "must be finite");
  check(std::isfinite(kappa) && kappa >= 0.0, "kappa", "must be >= 0");
}

void LaserParams::validate() const {
  check(positive(gamma_m), "gamma_m", "must be > 0");
  check(positive(gamma_l), "gamma_l", "must be > 0");
  check(positive(gamma_nr), "gamma_nr", "must be > 0");
  check(std::isfinite(N0) && N0 >= 0.0, "N0", "must be >= 0");
  check(positive(tau_p), "tau_p", "must be > 0");
  check(positive(eta) && eta <= 1.0, "eta", "must lie in (0, 1]");
  check(positive(R0), "R0", "must be > 0");
  check(positive(q_e), "q_e", "must be > 0");
}

void System::validate() const {
  iv.validate();
  circuit.validate();
  laser.validate();
}

System System::time_scaled(double factor) const {
  if (!positive(factor)) throw InvalidArgument("time scale factor must be > 0");
  System out = *this;
  out.circuit.L *= factor;
  out.circuit.C *= factor;
  out.laser.gamma_m /= factor;
  out.laser.gamma_l /= factor;
  out.laser.gamma_nr /= factor;
  out.laser.tau_p *= factor;
  out.laser.R0 *= factor;
  return out;
}

std::span<const double> Trace::channel(Channel c) const {
  switch (c) {
    case Channel::V: return v;
    case Channel::I: return i;
    case Channel::S: return s;
    case Channel::N: return n;
    case Channel::S0: return s0;
  }
  return v;
}

void SimConfig::validate() const {
  check(positive(dt), "dt", "must be > 0");
  check(std::isfinite(duration) && duration >= dt, "duration", "must be >= dt");
  check(output_stride >= 1, "output_stride", "must be >= 1");
}

SimConfig SimConfig::time_scaled(double factor) const {
  if (!positive(factor)) throw InvalidArgument("time scale factor must be > 0");
  SimConfig out = *this;
  out.dt *= factor;
  out.duration *= factor;
  return out;
}

double bias_for_rest_voltage(const SchulmanIV& iv, double R, double v_rest) {
  return v_rest + R * schulman_current(v_rest, iv);
}

double bias_for_fraction(const SchulmanIV& iv, double R, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvariantViolation("bias_fraction", "must lie in (0, 1)");
  }
  const IVMetadata meta = analyze_iv(iv, kIvRange, kIvResolution);
  return bias_for_rest_voltage(iv, R, fraction * meta.ndc_lo);
}

std::pair<double, double> laser_steady_state(const LaserParams& lp, double v) {
  const double pump = lp.eta * v / (lp.q_e * lp.R0);
  if (!std::isfinite(pump) || pump < 0.0) {
    throw NoLaserSteadyState("no laser steady state: pump rate " + std::to_string(pump) +
                             " is negative");
  }
  if (pump == 0.0) return {0.0, 0.0};

  const double loss = lp.gamma_l + lp.gamma_m + lp.gamma_nr;
  const double n_threshold = lp.N0 + 1.0 / (lp.gamma_m * lp.tau_p);
  const auto photons = [&](double n) {
    return lp.gamma_m * n / (1.0 / lp.tau_p - lp.gamma_m * (n - lp.N0));
  };
  const auto residual = [&](double n) {
    return pump - loss * n - lp.gamma_m * (n - lp.N0) * photons(n);
  };

  // residual(0) = pump > 0 and residual -> -inf at the lasing threshold.
  double lo = 0.0;
  double hi = n_threshold;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double n = lo;
  const double s = photons(n);
  const double scale = pump + loss * n + std::abs(lp.gamma_m * (n - lp.N0) * s);
  if (!std::isfinite(s) || s < 0.0 || std::abs(residual(n)) > 1e-10 * scale) {
    throw NoLaserSteadyState("no laser steady state: carrier balance did not converge");
  }
  return {n, s};
}

State quiescent_point(const System& sys) {
  const IVMetadata meta = analyze_iv(sys.iv, kIvRange, kIvResolution);
  const double lo = std::min(0.0, sys.circuit.V0);
  const auto root = smallest_load_line_root(sys, lo, meta.ndc_lo);
  if (!root) {
    throw BiasBeyondPeak("bias beyond peak: load line has no root below the NDC onset (" +
                         std::to_string(meta.ndc_lo) + " V)");
  }
  State rest;
  rest.v = *root;
  rest.i = schulman_current(rest.v, sys.iv);
  const auto [n, s] = laser_steady_state(sys.laser, rest.v);
  rest.n = n;
  rest.s = s;
  return rest;
}

State step(const State& x, double s0_now, const System& sys, double dt,
           std::optional<double> xi) {
  const Derivative d = drift(x, s0_now, sys);
  State next;
  next.t = x.t + dt;
  next.v = x.v + dt * d.dv;
  next.i = x.i + dt * d.di;
  next.s = x.s + dt * d.ds;
  if (xi) {
    const double intensity = std::max(sys.laser.gamma_m * x.n * x.s, 0.0);
    next.s += std::sqrt(dt) * std::sqrt(intensity) * *xi;
  }
  next.n = x.n + dt * d.dn;
  return finish(next);
}

State step_heun(const State& x, double s0_now, const System& sys, double dt) {
  const Derivative d0 = drift(x, s0_now, sys);
  State pred{x.v + dt * d0.dv, x.i + dt * d0.di, std::max(x.s + dt * d0.ds, 0.0),
             std::max(x.n + dt * d0.dn, 0.0), x.t + dt};
  const Derivative d1 = drift(pred, s0_now, sys);
  State next;
  next.t = x.t + dt;
  next.v = x.v + 0.5 * dt * (d0.dv + d1.dv);
  next.i = x.i + 0.5 * dt * (d0.di + d1.di);
  next.s = x.s + 0.5 * dt * (d0.ds + d1.ds);
  next.n = x.n + 0.5 * dt * (d0.dn + d1.dn);
  return finish(next);
}

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t trajectory_index) {
  std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (trajectory_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Trace integrate(const Stimulus& stimulus, const System& sys, const SimConfig& cfg) {
  cfg.validate();
  if (cfg.noise_enabled && cfg.scheme == Scheme::heun) {
    throw InvalidArgument("Heun scheme is deterministic only; disable noise or use Euler");
  }
  const auto steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  const std::size_t stride = cfg.output_stride;

  State x = cfg.initial_state ? *cfg.initial_state : quiescent_point(sys);
  x.t = 0.0;

  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Photon flux applied during step k, sampled at the step midpoint.
  const auto flux = [&](std::size_t k) {
    const double t_mid = cfg.dt * (static_cast<double>(k) + 0.5);
    return std::max(stimulus.value(t_mid), 0.0);
  };

  Trace trace;
  trace.dt = cfg.dt * static_cast<double>(stride);
  const std::size_t samples = steps / stride + 1;
  for (auto* ch : {&trace.t, &trace.v, &trace.i, &trace.s, &trace.n, &trace.s0}) {
    ch->reserve(samples);
  }
  const auto record = [&](const State& st, std::size_t k) {
    trace.t.push_back(cfg.dt * static_cast<double>(k));
    trace.v.push_back(st.v);
    trace.i.push_back(st.i);
    trace.s.push_back(st.s);
    trace.n.push_back(st.n);
    trace.s0.push_back(flux(k));
  };

  record(x, 0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double s0 = flux(k);
    x.t = cfg.dt * static_cast<double>(k);
    if (cfg.scheme == Scheme::heun) {
      x = step_heun(x, s0, sys, cfg.dt);
    } else if (cfg.noise_enabled) {
      x = step(x, s0, sys, cfg.dt, normal(rng));
    } else {
      x = step(x, s0, sys, cfg.dt);
    }
    if ((k + 1) % stride == 0) record(x, k + 1);
  }
  return trace;
}

ConvergenceReport convergence_check(const Stimulus& stimulus, const System& sys,
                                    const SimConfig& cfg) {
  SimConfig coarse = cfg;
  coarse.noise_enabled = false;
  SimConfig fine = coarse;
  fine.dt = coarse.dt / 2.0;
  fine.output_stride = coarse.output_stride * 2;

  const Trace a = integrate(stimulus, sys, coarse);
  const Trace b = integrate(stimulus, sys, fine);

  ConvergenceReport r;
  r.dt_coarse = coarse.dt;
  r.dt_fine = fine.dt;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    r.max_dv = std::max(r.max_dv, std::abs(a.v[k] - b.v[k]));
    r.max_di = std::max(r.max_di, std::abs(a.i[k] - b.i[k]));
    r.max_ds = std::max(r.max_ds, std::abs(a.s[k] - b.s[k]));
    r.max_dn = std::max(r.max_dn, std::abs(a.n[k] - b.n[k]));
  }

  const auto peak = [](const Trace& tr, double& when, double& vpp) {
    const double base = tr.v.front();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      if (std::abs(tr.v[k] - base) > std::abs(tr.v[arg] - base)) arg = k;
    }
    when = tr.t[arg];
    const auto [lo, hi] = std::minmax_element(tr.v.begin(), tr.v.end());
    vpp = *hi - *lo;
  };
  peak(a, r.peak_time_coarse, r.vpp_coarse);
  peak(b, r.peak_time_fine, r.vpp_fine);
  r.peak_time_shift = r.peak_time_coarse - r.peak_time_fine;
  r.vpp_relative_change = r.vpp_fine > 0.0 ? (r.vpp_coarse - r.vpp_fine) / r.vpp_fine : 0.0;
  return r;
}

}  // namespace prl
