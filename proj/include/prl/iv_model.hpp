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

#include <utility>

namespace prl {

/// Parameters of the Schulman resonant-tunnelling current model.
///
///   f(V) = a * ln[(1 + e^{(b - c + n1 V)/VT}) / (1 + e^{(b - c - n1 V)/VT})]
///            * [pi/2 + atan((c - n1 V)/d)]
///        + h * (e^{n2 V/VT} - 1)
///
/// All voltages in volts, currents in amperes.
struct SchulmanIV {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
  double n1 = 1.0;
  double n2 = 1.0;
  double h = 0.0;
  double thermal_voltage = 0.025852;

  /// Throws InvariantViolation naming the first offending field.
  void validate() const;

  /// Multiplies both current scales (a, h) by `factor`.
  SchulmanIV scaled_current(double factor) const;

  bool operator==(const SchulmanIV&) const = default;
};

struct IVMetadata {
  double v_peak = 0.0;
  double i_peak = 0.0;
  double v_valley = 0.0;
  double i_valley = 0.0;
  double pvcr = 0.0;
  double ndc_lo = 0.0;
  double ndc_hi = 0.0;
};

/// f(v). Throws InvalidArgument on non-finite input or parameters.
double schulman_current(double v, const SchulmanIV& p);

/// Analytic df/dv.
double schulman_conductance(double v, const SchulmanIV& p);

/// Locates the current peak and valley inside `v_range` by a grid scan of the
/// conductance sign followed by bisection. Throws NoNdcFound when the
/// conductance never turns negative in range.
IVMetadata analyze_iv(const SchulmanIV& p, std::pair<double, double> v_range = {0.0, 2.0},
                      int resolution = 20000);

}  // namespace prl
