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

#include <cmath>
#include <random>
#include <vector>

#include "fixture.hpp"
#include "prl/analysis.hpp"
#include "prl/errors.hpp"

using namespace prl;

namespace {

Trace synthetic(const std::vector<std::pair<double, double>>& bumps, double noise = 0.0,
                std::size_t n = 2000, double dt = 1e-12) {
  Trace tr;
  tr.dt = dt;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = dt * static_cast<double>(k);
    double v = 0.5;
    for (const auto& [t0, a] : bumps) v += a * std::exp(-std::pow((t - t0) / 10e-12, 2));
    v += noise * g(rng);
    tr.t.push_back(t);
    tr.v.push_back(v);
    tr.i.push_back(0.0);
    tr.s.push_back(0.0);
    tr.n.push_back(0.0);
    tr.s0.push_back(0.0);
  }
  return tr;
}

DetectorConfig unit_detector() {
  DetectorConfig d;
  d.reference_amplitude = 1.0;
  return d;
}

int spikes_for(double amplitude, const ExperimentConfig& c, const DetectorConfig& d, double width) {
  SimConfig s = c.sim;
  s.duration = c.reference.start + width + c.reference.tail;
  const auto tr = integrate(square_pulse(c.reference.start, width, amplitude), c.system, s);
  return static_cast<int>(detect_spikes(tr, d).size());
}

}  // namespace

TEST_CASE("synthetic bumps are found at their peaks") {
  const auto tr = synthetic({{300e-12, 1.0}, {900e-12, 0.8}, {1500e-12, 0.1}});
  const auto train = detect_spikes(tr, unit_detector());
  REQUIRE(train.size() == 2);
  CHECK(fixture::near(train.events[0].t_peak, 300e-12, 1e-15));
  CHECK(fixture::near(train.events[1].t_peak, 900e-12, 1e-15));
  CHECK(train.events[0].v_pp == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(train.events[1].v_pp == doctest::Approx(0.8).epsilon(1e-3));
  // FWHM of exp(-(t/10ps)^2) is 2 sqrt(ln 2) 10 ps.
  CHECK(fixture::near(train.events[0].width, 2 * std::sqrt(std::log(2.0)) * 10e-12, 1.5e-12));
}

TEST_CASE("hysteresis keeps a noisy crossing as one event") {
  const auto tr = synthetic({{300e-12, 1.0}, {900e-12, 1.0}}, 0.03);
  CHECK(detect_spikes(tr, unit_detector()).size() == 2);
  DetectorConfig d = unit_detector();
  CHECK_THROWS_AS([&] { d.lower = 0.6; detect_spikes(tr, d); }(), InvariantViolation);
}

TEST_CASE("detection is idempotent and ignores the trailing window") {
  const auto tr = synthetic({{300e-12, 1.0}, {900e-12, 1.0}});
  const auto a = detect_spikes(tr, unit_detector());
  CHECK(detect_spikes(tr, unit_detector()) == a);
  Trace cut = tr;
  for (auto* ch : {&cut.t, &cut.v, &cut.i, &cut.s, &cut.n, &cut.s0}) ch->resize(1200);
  const auto b = detect_spikes(cut, unit_detector());
  REQUIRE(b.size() == 2);
  CHECK(b.events[0].t_peak == a.events[0].t_peak);
  CHECK(b.events[1].t_peak == a.events[1].t_peak);
}

TEST_CASE("short traces are rejected") {
  CHECK_THROWS_AS(detect_spikes(synthetic({}, 0.0, 5), unit_detector()), InvalidArgument);
}

TEST_CASE("detector calibration uses the reference spike") {
  const auto c = fixture::config();
  const auto d = fixture::detector(c);
  CHECK(d.reference_amplitude > 1.0);
  CHECK(d.baseline);
  CHECK(*d.baseline == doctest::Approx(quiescent_point(c.system).v));
}

TEST_CASE("threshold sweep agrees with a bisection oracle") {
  const auto c = fixture::config();
  const auto d = fixture::detector(c);
  const double width = 20e-12;
  double lo = 100.0;
  double hi = 10000.0;
  REQUIRE(spikes_for(lo, c, d, width) == 0);
  REQUIRE(spikes_for(hi, c, d, width) == 1);
  while (hi - lo > 1.0) {
    const double mid = 0.5 * (lo + hi);
    (spikes_for(mid, c, d, width) > 0 ? hi : lo) = mid;
  }
  std::vector<double> amps;
  for (double a = 2000; a <= 4000; a += 50) amps.push_back(a);
  ReferencePulse p = c.reference;
  p.width = width;
  const auto r = threshold_sweep(amps, p, c.system, c.sim, d);
  REQUIRE(r.threshold);
  CHECK(std::abs(*r.threshold - 0.5 * (lo + hi)) <= 25.0 + 1.0);
  for (std::size_t k = 1; k < r.spike_counts.size(); ++k) CHECK(r.spike_counts[k] >= r.spike_counts[k - 1]);
}

TEST_CASE("longer pulses need less amplitude") {
  const auto c = fixture::config();
  const auto d = fixture::detector(c);
  std::vector<double> amps;
  for (double a = 500; a <= 5000; a += 100) amps.push_back(a);
  ReferencePulse p = c.reference;
  p.width = 20e-12;
  const auto short_pulse = threshold_sweep(amps, p, c.system, c.sim, d);
  p.width = 60e-12;
  const auto long_pulse = threshold_sweep(amps, p, c.system, c.sim, d);
  REQUIRE(short_pulse.threshold);
  REQUIRE(long_pulse.threshold);
  CHECK(*long_pulse.threshold < *short_pulse.threshold);
}

TEST_CASE("refractory counts rise monotonically with separation") {
  const auto c = fixture::config();
  const auto d = fixture::detector(c);
  std::vector<double> seps;
  for (double s = 50e-12; s <= 600e-12; s += 25e-12) seps.push_back(s);
  const auto r = refractory_sweep(seps, c.reference, c.system, c.sim, d);
  REQUIRE(r.t_ref);
  for (std::size_t k = 0; k < seps.size(); ++k) {
    CHECK(r.spike_counts[k].size() == 1);
    CHECK(r.spike_counts[k][0] == (seps[k] >= *r.t_ref ? 2 : 1));
  }
  CHECK(r.double_spike_frequency().back() == 1.0);
}

TEST_CASE("refractory sweep rejects a sub-threshold protocol pulse") {
  const auto c = fixture::config();
  ReferencePulse p = c.reference;
  p.amplitude = 500;
  const std::vector<double> seps{100e-12, 400e-12};
  CHECK_THROWS_AS(refractory_sweep(seps, p, c.system, c.sim, fixture::detector(c)), PulseSubThreshold);
}

TEST_CASE("global time shift moves events and nothing else") {
  const auto c = fixture::config();
  const auto d = fixture::detector(c);
  SimConfig s = c.sim;
  s.duration = 2e-9;
  const auto a = detect_spikes(integrate(square_pulse(0.2e-9, 20e-12, 4600), c.system, s), d);
  const auto b = detect_spikes(integrate(square_pulse(0.5e-9, 20e-12, 4600), c.system, s), d);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(fixture::near(b.events[0].t_peak - a.events[0].t_peak, 0.3e-9, 1e-15));
  CHECK(b.events[0].v_pp == doctest::Approx(a.events[0].v_pp).epsilon(1e-9));
  CHECK(b.events[0].width == doctest::Approx(a.events[0].width));
}

TEST_CASE("temporal map stacks equal-length traces") {
  const auto a = synthetic({{300e-12, 1.0}}, 0.0, 50);
  const auto b = synthetic({{200e-12, 1.0}}, 0.0, 50);
  const std::vector<Trace> both{a, b};
  const auto m = temporal_map(both);
  CHECK(m.rows == 2);
  CHECK(m.cols == 50);
  CHECK(m(1, 7) == b.v[7]);
  const std::vector<Trace> mixed{a, synthetic({}, 0.0, 40)};
  CHECK_THROWS_AS(temporal_map(mixed), InvalidArgument);
}
