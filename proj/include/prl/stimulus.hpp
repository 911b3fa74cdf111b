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

namespace prl {

enum class PulseShape { square, bipolar };

/// One pulse of an optical input waveform. Amplitudes are photon-count units.
///
/// A bipolar pulse is +amplitude for the first half of `duration` and
/// -amplitude for the second half (multiplied by `polarity`).
struct Segment {
  double start = 0.0;
  double duration = 0.0;
  PulseShape shape = PulseShape::square;
  double amplitude = 0.0;
  int polarity = 1;

  double value(double t) const;

  bool operator==(const Segment&) const = default;
};

/// Optical photon-flux input S0(t) seen by the photodetector.
class Stimulus {
 public:
  Stimulus() = default;
  explicit Stimulus(std::vector<Segment> segments, double baseline = 0.0,
                    bool clip_negative = false);

  /// S0(t). When the stimulus came out of `combine`, negative light is
  /// clipped at zero.
  double value(double t) const;

  /// Signed sum before any clipping.
  double raw_value(double t) const;

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double baseline() const noexcept { return baseline_; }
  bool clips_negative() const noexcept { return clip_negative_; }

  /// Same waveform delayed by `offset` seconds.
  Stimulus shifted(double offset) const;
  /// Same waveform with every time coordinate multiplied by `factor`.
  Stimulus time_scaled(double factor) const;
  /// Sorted edge times of all segments (starts, midpoints of bipolar pulses, ends).
  std::vector<double> breakpoints() const;

  bool operator==(const Stimulus&) const = default;

 private:
  std::vector<Segment> segments_;
  double baseline_ = 0.0;
  bool clip_negative_ = false;
};

/// One optical input of the node; `polarity` selects the modulator bias point.
struct Branch {
  std::string label;
  Stimulus stimulus;
  int polarity = 1;

  bool operator==(const Branch&) const = default;
};

Stimulus square_pulse(double t0, double width, double amplitude);

/// Two identical square pulses whose rising edges are `separation` apart.
Stimulus doublet(double t0, double width, double amplitude, double separation);

Stimulus bipolar_pulse(double t0, double width, double amplitude, int polarity);

/// Incoherent sum of the branches on the photodetector, clipped at zero.
Stimulus combine(std::span<const Branch> branches);

/// Samples value() at t = k * dt for k in [0, count).
std::vector<double> sample(const Stimulus& s, double dt, std::size_t count);

/// Largest |raw S0| of the summed branches, probed on every interval between
/// breakpoints. Zero means the branches cancel exactly.
double cancellation_residual(std::span<const Branch> branches);

}  // namespace prl
