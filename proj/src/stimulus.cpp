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
#include "prl/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "prl/errors.hpp"

namespace prl {
namespace {

void check_pulse(double t0, double width, double amplitude) {
  if (!std::isfinite(t0)) throw InvalidArgument("pulse start must be finite");
  if (!(std::isfinite(width) && width > 0.0)) throw InvalidArgument("pulse width must be > 0");
  if (!std::isfinite(amplitude)) throw InvalidArgument("pulse amplitude must be finite");
}

void check_polarity(int polarity) {
  if (polarity != 1 && polarity != -1) throw InvalidArgument("polarity must be +1 or -1");
}

}  // namespace

double Segment::value(double t) const {
  if (t < start || t >= start + duration) return 0.0;
  double v = amplitude * polarity;
  if (shape == PulseShape::bipolar && t >= start + 0.5 * duration) v = -v;
  return v;
}

Stimulus::Stimulus(std::vector<Segment> segments, double baseline, bool clip_negative)
    : segments_(std::move(segments)), baseline_(baseline), clip_negative_(clip_negative) {
  if (!std::isfinite(baseline_)) throw InvalidArgument("stimulus baseline must be finite");
  for (const auto& s : segments_) {
    check_pulse(s.start, s.duration, s.amplitude);
    check_polarity(s.polarity);
  }
}

double Stimulus::raw_value(double t) const {
  double v = baseline_;
  for (const auto& s : segments_) v += s.value(t);
  return v;
}

double Stimulus::value(double t) const {
  const double v = raw_value(t);
  return clip_negative_ ? std::max(v, 0.0) : v;
}

Stimulus Stimulus::shifted(double offset) const {
  auto segs = segments_;
  for (auto& s : segs) s.start += offset;
  return Stimulus(std::move(segs), baseline_, clip_negative_);
}

Stimulus Stimulus::time_scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("time scale factor must be > 0");
  auto segs = segments_;
  for (auto& s : segs) {
    s.start *= factor;
    s.duration *= factor;
  }
  return Stimulus(std::move(segs), baseline_, clip_negative_);
}

std::vector<double> Stimulus::breakpoints() const {
  std::set<double> pts;
  for (const auto& s : segments_) {
    pts.insert(s.start);
    pts.insert(s.start + s.duration);
    if (s.shape == PulseShape::bipolar) pts.insert(s.start + 0.5 * s.duration);
  }
  return {pts.begin(), pts.end()};
}

Stimulus square_pulse(double t0, double width, double amplitude) {
  check_pulse(t0, width, amplitude);
  return Stimulus({Segment{t0, width, PulseShape::square, amplitude, 1}});
}

Stimulus doublet(double t0, double width, double amplitude, double separation) {
  check_pulse(t0, width, amplitude);
  if (!(std::isfinite(separation) && separation >= 0.0)) {
    throw InvalidArgument("doublet separation must be >= 0");
  }
  return Stimulus({Segment{t0, width, PulseShape::square, amplitude, 1},
                   Segment{t0 + separation, width, PulseShape::square, amplitude, 1}});
}

Stimulus bipolar_pulse(double t0, double width, double amplitude, int polarity) {
  check_pulse(t0, width, amplitude);
  check_polarity(polarity);
  return Stimulus({Segment{t0, width, PulseShape::bipolar, amplitude, polarity}});
}

Stimulus combine(std::span<const Branch> branches) {
  if (branches.empty()) throw InvalidArgument("combine: at least one branch required");
  std::set<std::string> labels;
  std::vector<Segment> segs;
  double baseline = 0.0;
  for (const auto& br : branches) {
    check_polarity(br.polarity);
    if (!labels.insert(br.label).second) {
      throw InvalidArgument("combine: duplicate branch label '" + br.label + "'");
    }
    baseline += br.polarity * br.stimulus.baseline();
    for (auto s : br.stimulus.segments()) {
      s.polarity *= br.polarity;
      segs.push_back(s);
    }
  }
  return Stimulus(std::move(segs), baseline, true);
}

std::vector<double> sample(const Stimulus& s, double dt, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = s.value(dt * static_cast<double>(k));
  return out;
}

double cancellation_residual(std::span<const Branch> branches) {
  const Stimulus sum = combine(branches);
  const auto pts = sum.breakpoints();
  double worst = std::abs(sum.raw_value(pts.empty() ? 0.0 : pts.front() - 1.0));
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    worst = std::max(worst, std::abs(sum.raw_value(0.5 * (pts[k] + pts[k + 1]))));
  }
  if (!pts.empty()) worst = std::max(worst, std::abs(sum.raw_value(pts.back() + 1.0)));
  return worst;
}

}  // namespace prl
