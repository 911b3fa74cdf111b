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
#include <stdexcept>
#include <string>

namespace prl {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Numerical failures (CLI exit code 3)

class NumericalError : public Error {
 public:
  using Error::Error;
};

class NoNdcFound : public NumericalError {
 public:
  NoNdcFound() : NumericalError("no NDC found: f'(V) has no sign change in range") {}
  explicit NoNdcFound(const std::string& detail) : NumericalError("no NDC found: " + detail) {}
};

class BiasBeyondPeak : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoLaserSteadyState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationBlowUp : public NumericalError {
 public:
  IntegrationBlowUp(std::string variable, double time);

  const std::string& variable() const noexcept { return variable_; }
  double time() const noexcept { return time_; }

 private:
  std::string variable_;
  double time_;
};

/// A protocol was run with a stimulus that violates its precondition.
class ProtocolError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PulseSubThreshold : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class AmplitudeMiscalibrated : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// ---------------------------------------------------------------------------
// Configuration failures (CLI exit code 2)

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownKeyError : public ConfigError {
 public:
  explicit UnknownKeyError(std::string key);

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class InvariantViolation : public ConfigError {
 public:
  InvariantViolation(std::string field, const std::string& why);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace prl
