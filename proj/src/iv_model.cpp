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
#include "prl/iv_model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "prl/errors.hpp"

namespace prl {
namespace {

// Exponents above this are evaluated through logarithms.
constexpr double kLogSpaceExponent = 350.0;

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// h * (e^x - 1) without spurious overflow for large x.
double diode_term(double h, double x) {
  if (h == 0.0) return 0.0;
  if (x > kLogSpaceExponent) return std::exp(std::log(h) + x) - h;
  return h * std::expm1(x);
}

double diode_slope(double h, double x, double scale) {
  if (h == 0.0) return 0.0;
  if (x > kLogSpaceExponent) return std::exp(std::log(h * scale) + x);
  return h * scale * std::exp(x);
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw InvalidArgument(std::string("non-finite ") + name);
}

void require_finite(const SchulmanIV& p) {
  require_finite(p.a, "a");
  require_finite(p.b, "b");
  require_finite(p.c, "c");
  require_finite(p.d, "d");
  require_finite(p.n1, "n1");
  require_finite(p.n2, "n2");
  require_finite(p.h, "h");
  require_finite(p.thermal_voltage, "thermal_voltage");
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Bisects a sign change of the conductance bracketed by [lo, hi].
double refine_extremum(const SchulmanIV& p, double lo, double hi) {
  const int s_lo = sign(schulman_conductance(lo, p));
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sign(schulman_conductance(mid, p)) == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void SchulmanIV::validate() const {
  auto check = [](bool ok, const char* field, const char* why) {
    if (!ok) throw InvariantViolation(field, why);
  };
  check(std::isfinite(a) && a > 0.0, "a", "must be > 0");
  check(std::isfinite(b), "b", "must be finite");
  check(std::isfinite(c), "c", "must be finite");
  check(std::isfinite(d) && d > 0.0, "d", "must be > 0");
  check(std::isfinite(n1) && n1 > 0.0, "n1", "must be > 0");
  check(std::isfinite(n2) && n2 > 0.0, "n2", "must be > 0");
  check(std::isfinite(h) && h >= 0.0, "h", "must be >= 0");
  check(std::isfinite(thermal_voltage) && thermal_voltage > 0.0, "thermal_voltage",
        "must be > 0");
}

SchulmanIV SchulmanIV::scaled_current(double factor) const {
  SchulmanIV out = *this;
  out.a *= factor;
  out.h *= factor;
  return out;
}

double schulman_current(double v, const SchulmanIV& p) {
  require_finite(v, "voltage");
  require_finite(p);
  const double vt = p.thermal_voltage;
  const double x1 = (p.b - p.c + p.n1 * v) / vt;
  const double x2 = (p.b - p.c - p.n1 * v) / vt;
  const double log_term = softplus(x1) - softplus(x2);
  const double atan_term = std::numbers::pi / 2.0 + std::atan((p.c - p.n1 * v) / p.d);
  return p.a * log_term * atan_term + diode_term(p.h, p.n2 * v / vt);
}

double schulman_conductance(double v, const SchulmanIV& p) {
  require_finite(v, "voltage");
  require_finite(p);
  const double vt = p.thermal_voltage;
  const double x1 = (p.b - p.c + p.n1 * v) / vt;
  const double x2 = (p.b - p.c - p.n1 * v) / vt;
  const double log_term = softplus(x1) - softplus(x2);
  const double log_slope = (p.n1 / vt) * (logistic(x1) + logistic(x2));
  const double u = (p.c - p.n1 * v) / p.d;
  const double atan_term = std::numbers::pi / 2.0 + std::atan(u);
  const double atan_slope = -(p.n1 / p.d) / (1.0 + u * u);
  return p.a * (log_slope * atan_term + log_term * atan_slope) +
         diode_slope(p.h, p.n2 * v / vt, p.n2 / vt);
}

IVMetadata analyze_iv(const SchulmanIV& p, std::pair<double, double> v_range, int resolution) {
  const auto [lo, hi] = v_range;
  if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
    throw InvalidArgument("analyze_iv: empty voltage range");
  }
  if (resolution < 1000) throw InvalidArgument("analyze_iv: resolution must be >= 1000");
  require_finite(p);

  const double step = (hi - lo) / resolution;
  std::vector<double> grid(static_cast<std::size_t>(resolution) + 1);
  std::vector<int> slope_sign(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = lo + step * static_cast<double>(k);
    slope_sign[k] = sign(schulman_conductance(grid[k], p));
  }

  std::size_t peak_cell = grid.size();
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    if (slope_sign[k] > 0 && slope_sign[k + 1] <= 0) {
      peak_cell = k;
      break;
    }
  }
  if (peak_cell == grid.size()) throw NoNdcFound();

  std::size_t valley_cell = grid.size();
  for (std::size_t k = peak_cell + 1; k + 1 < grid.size(); ++k) {
    if (slope_sign[k] < 0 && slope_sign[k + 1] >= 0) {
      valley_cell = k;
      break;
    }
  }
  if (valley_cell == grid.size()) throw NoNdcFound("current valley lies outside the scanned range");

  IVMetadata m;
  m.v_peak = refine_extremum(p, grid[peak_cell], grid[peak_cell + 1]);
  m.v_valley = refine_extremum(p, grid[valley_cell], grid[valley_cell + 1]);
  m.i_peak = schulman_current(m.v_peak, p);
  m.i_valley = schulman_current(m.v_valley, p);
  m.pvcr = m.i_peak / m.i_valley;
  // f' < 0 exactly between the two extrema.
  m.ndc_lo = m.v_peak;
  m.ndc_hi = m.v_valley;
  return m;
}

}  // namespace prl
