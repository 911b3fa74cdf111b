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

#include <cmath>
#include <string>

#include "prl/analysis.hpp"
#include "prl/config.hpp"

namespace fixture {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline prl::ExperimentConfig config(const std::string& extra = {}) {
  return prl::parse_config("[experiment]\nparam_set = nanoscale-default\n" + extra,
                           {PRL_SOURCE_DIR "/configs"});
}

inline prl::ExperimentConfig pvcr_config() {
  return prl::parse_config("[experiment]\nparam_set = experimental-pvcr\n",
                           {PRL_SOURCE_DIR "/configs"});
}

inline prl::System nanoscale() { return config().system; }

inline prl::DetectorConfig detector(const prl::ExperimentConfig& c) {
  return prl::calibrate_detector(c.system, c.sim, c.reference);
}

}  // namespace fixture
