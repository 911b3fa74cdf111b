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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "fixture.hpp"
#include "prl/dynamics.hpp"
#include "prl/errors.hpp"
#include "prl/iv_model.hpp"

using namespace prl;

namespace {

// Brute force: smallest sign change of V0 - V - R f(V) on a fine grid.
std::optional<double> load_line_root_scan(const System& sys, double lo, double hi, int n) {
  const auto r = [&](double v) {
    return sys.circuit.V0 - v - sys.circuit.R * schulman_current(v, sys.iv);
  };
  double prev = r(lo);
  for (int k = 1; k <= n; ++k) {
    const double v = lo + (hi - lo) * k / n;
    const double cur = r(v);
    if ((prev > 0) != (cur > 0)) return v;
    prev = cur;
  }
  return std::nullopt;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

SimConfig sim(double duration, double dt = 1e-13) {
  SimConfig c;
  c.dt = dt;
  c.duration = duration;
  return c;
}

}  // namespace

TEST_CASE("quiescent point sits at the requested fraction of the NDC onset") {
  const auto sys = fixture::nanoscale();
  const auto meta = analyze_iv(sys.iv);
  const State rest = quiescent_point(sys);
  CHECK(rest.v == doctest::Approx(0.98 * meta.ndc_lo).epsilon(1e-6));
  CHECK(rest.i == doctest::Approx(schulman_current(rest.v, sys.iv)));
  const auto scan = load_line_root_scan(sys, 0.0, meta.ndc_lo, 200000);
  REQUIRE(scan);
  CHECK(fixture::near(rest.v, *scan, 1e-5));
}

TEST_CASE("bias beyond the peak has no rest state") {
  auto sys = fixture::nanoscale();
  sys.circuit.V0 = 1.5;
  const auto meta = analyze_iv(sys.iv);
  CHECK_FALSE(load_line_root_scan(sys, 0.0, meta.ndc_lo, 200000));
  CHECK_THROWS_AS(quiescent_point(sys), BiasBeyondPeak);
}

TEST_CASE("laser steady state balances the rate equations") {
  const auto lp = fixture::nanoscale().laser;
  for (double v : {0.0, 0.1, 0.6, 0.9, 1.5, 2.0}) {
    const auto [n, s] = laser_steady_state(lp, v);
    const double gain = lp.gamma_m * (n - lp.N0);
    const double ds = (gain - 1.0 / lp.tau_p) * s + lp.gamma_m * n;
    const double pump = lp.eta * v / (lp.q_e * lp.R0);
    const double dn = pump - (lp.gamma_l + lp.gamma_m + lp.gamma_nr) * n - gain * s;
    CHECK(n >= 0.0);
    CHECK(s >= 0.0);
    CHECK(std::abs(ds) <= 1e-9 * (1.0 / lp.tau_p * s + lp.gamma_m * n + 1.0));
    CHECK(std::abs(dn) <= 1e-9 * (pump + 1.0));
  }
  CHECK_THROWS_AS(laser_steady_state(lp, -0.1), NoLaserSteadyState);
}

TEST_CASE("rest state is stationary without input") {
  const auto sys = fixture::nanoscale();
  const Trace tr = integrate(Stimulus{}, sys, sim(2e-9));
  const State rest = quiescent_point(sys);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(std::abs(tr.v[k] - rest.v) < 1e-9);
    CHECK(std::abs(tr.s[k] - rest.s) <= 1e-6 * (rest.s + 1e-12));
  }
}

TEST_CASE("small perturbations decay back to rest") {
  const auto sys = fixture::nanoscale();
  State start = quiescent_point(sys);
  start.v += 0.01;
  SimConfig c = sim(3e-9);
  c.initial_state = start;
  const Trace tr = integrate(Stimulus{}, sys, c);
  CHECK(std::abs(tr.v.back() - quiescent_point(sys).v) < 1e-5);
}

TEST_CASE("one Euler step matches the hand-written update") {
  const auto sys = fixture::nanoscale();
  const State x{0.55, 0.004, 3.0, 6e6, 0.0};
  const double s0 = 1234.0;
  const double dt = 1e-13;
  const auto& cp = sys.circuit;
  const auto& lp = sys.laser;
  const double g = lp.gamma_m * (x.n - lp.N0);
  const State y = step(x, s0, sys, dt);
  CHECK(y.v == doctest::Approx(x.v + dt * (x.i - schulman_current(x.v, sys.iv)) / cp.C));
  CHECK(y.i == doctest::Approx(x.i + dt * (cp.V0 + cp.R * cp.kappa * s0 - x.v - cp.R * x.i) / cp.L));
  CHECK(y.s == doctest::Approx(x.s + dt * ((g - 1 / lp.tau_p) * x.s + lp.gamma_m * x.n)));
  CHECK(y.n == doctest::Approx(x.n + dt * (lp.eta * x.v / (lp.q_e * lp.R0) -
                                           (lp.gamma_l + lp.gamma_m + lp.gamma_nr) * x.n - g * x.s)));
  const State z = step(x, s0, sys, dt, 1.5);
  CHECK(z.s == doctest::Approx(y.s + std::sqrt(dt) * std::sqrt(lp.gamma_m * x.n * x.s) * 1.5));
  CHECK(z.v == y.v);
}

TEST_CASE("photon and carrier numbers never go negative") {
  const auto sys = fixture::nanoscale();
  SimConfig c = sim(1e-9);
  c.noise_enabled = true;
  c.rng_seed = 3;
  State start = quiescent_point(sys);
  start.s = 0.0;
  start.n = 1.0;
  c.initial_state = start;
  const Trace tr = integrate(doublet(0.1e-9, 20e-12, 4600, 0.3e-9), sys, c);
  CHECK(*std::min_element(tr.s.begin(), tr.s.end()) >= 0.0);
  CHECK(*std::min_element(tr.n.begin(), tr.n.end()) >= 0.0);
}

TEST_CASE("seeded runs are reproducible; noise reaches only the photon number directly") {
  const auto sys = fixture::nanoscale();
  SimConfig c = sim(1e-9);
  c.noise_enabled = true;
  c.rng_seed = 11;
  const auto stim = square_pulse(0.2e-9, 20e-12, 4600);
  const Trace a = integrate(stim, sys, c);
  const Trace b = integrate(stim, sys, c);
  CHECK(a == b);
  c.rng_seed = 12;
  const Trace other = integrate(stim, sys, c);
  CHECK(a.s != other.s);
  CHECK(a.v == other.v);
  c.noise_enabled = false;
  CHECK(integrate(stim, sys, c).v == a.v);
}

TEST_CASE("trajectory seeds are distinct") {
  CHECK(trajectory_seed(0, 0) != trajectory_seed(0, 1));
  CHECK(trajectory_seed(0, 1) != trajectory_seed(1, 0));
  CHECK(trajectory_seed(5, 7) == trajectory_seed(5, 7));
}

TEST_CASE("output stride decimates the full-resolution trace") {
  const auto sys = fixture::nanoscale();
  const auto stim = square_pulse(0.2e-9, 20e-12, 4600);
  SimConfig c = sim(1e-9);
  const Trace full = integrate(stim, sys, c);
  c.output_stride = 10;
  const Trace dec = integrate(stim, sys, c);
  REQUIRE(dec.size() == 1001);
  CHECK(dec.dt == doctest::Approx(1e-12));
  for (std::size_t k = 0; k < dec.size(); ++k) CHECK(dec.v[k] == full.v[10 * k]);
}

TEST_CASE("Richardson halving: Euler is first order, Heun second order") {
  const auto sys = fixture::nanoscale();
  // Sub-threshold input keeps the solution smooth between grid-aligned edges.
  const auto stim = square_pulse(0.1e-9, 20e-12, 1500);
  for (const auto [scheme, lo, hi] : {std::tuple{Scheme::euler, 1.6, 2.5}, std::tuple{Scheme::heun, 3.2, 4.8}}) {
    double prev_v = NAN;
    double prev_err = NAN;
    double ratio = NAN;
    for (double dt : {4e-14, 2e-14, 1e-14}) {
      SimConfig c = sim(0.2e-9, dt);
      c.scheme = scheme;
      const double v = integrate(stim, sys, c).v.back();
      if (!std::isnan(prev_v)) {
        const double err = std::abs(v - prev_v);
        if (!std::isnan(prev_err)) ratio = prev_err / err;
        prev_err = err;
      }
      prev_v = v;
    }
    CHECK(ratio > lo);
    CHECK(ratio < hi);
  }
}

TEST_CASE("time scaling stretches the trajectory") {
  const auto sys = fixture::nanoscale();
  const auto stim = square_pulse(0.2e-9, 20e-12, 4600);
  const SimConfig c = sim(1e-9);
  const double k = 1e3;
  const Trace a = integrate(stim, sys, c);
  const Trace b = integrate(stim.time_scaled(k), sys.time_scaled(k), c.time_scaled(k));
  REQUIRE(a.size() == b.size());
  CHECK(max_abs_diff(a.v, b.v) < 1e-6);
  CHECK(b.t.back() == doctest::Approx(k * a.t.back()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(b.s[j] == doctest::Approx(a.s[j]).epsilon(1e-5).scale(1e-3));
  }
}

TEST_CASE("divergence is reported with the offending variable") {
  const auto sys = fixture::nanoscale();
  SimConfig c = sim(1e-9, 2e-12);
  try {
    integrate(square_pulse(0.2e-9, 20e-12, 4600), sys, c);
    FAIL("expected a blow-up");
  } catch (const IntegrationBlowUp& e) {
    CHECK(e.time() > 0.0);
    CHECK(std::string(e.variable()).size() == 1);
  }
}

TEST_CASE("invalid configurations") {
  auto sys = fixture::nanoscale();
  SimConfig c = sim(1e-9);
  c.scheme = Scheme::heun;
  c.noise_enabled = true;
  CHECK_THROWS_AS(integrate(Stimulus{}, sys, c), InvalidArgument);
  c = sim(1e-9, 0.0);
  CHECK_THROWS_AS(integrate(Stimulus{}, sys, c), InvariantViolation);
  sys.circuit.C = 0.0;
  try {
    sys.validate();
    FAIL("expected invariant violation");
  } catch (const InvariantViolation& e) {
    CHECK(std::string(e.what()).find("C") != std::string::npos);
  }
}

TEST_CASE("convergence report compares dt and dt/2") {
  const auto sys = fixture::nanoscale();
  const auto r = convergence_check(square_pulse(0.2e-9, 20e-12, 4600), sys, sim(1e-9));
  CHECK(r.dt_fine == doctest::Approx(r.dt_coarse / 2));
  CHECK(r.vpp_coarse > 1.0);
  CHECK(std::abs(r.peak_time_shift) < 1e-12);
  CHECK(r.vpp_relative_change < 0.01);
}
