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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prl/analysis.hpp"
#include "prl/dynamics.hpp"
#include "prl/iv_model.hpp"
#include "prl/tasks.hpp"

namespace prl {

inline constexpr std::string_view kTraceHeader = "t,V,I,S,N,S0";

std::string format_trace_csv(const Trace& trace);
/// Inverse of format_trace_csv. Throws InvalidArgument on a malformed table.
Trace parse_trace_csv(const std::string& text);

void write_trace_csv(const std::filesystem::path& path, const Trace& trace);
Trace read_trace_csv(const std::filesystem::path& path);

/// One row per matrix row, comma separated, preceded by `header` if non-empty.
std::string format_matrix_csv(const Matrix& m, const std::string& header = {});

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string_view tool_version();

struct ManifestEntry {
  std::string name;
  std::string sha256;
};

struct Manifest {
  std::string tool_version;
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> files;
};

/// Hashes `files` (relative to `dir`) and writes `dir/manifest.txt`.
Manifest write_manifest(const std::filesystem::path& dir, const std::string& config_text,
                        std::uint64_t seed, std::vector<std::string> files);
Manifest read_manifest(const std::filesystem::path& path);

nlohmann::json to_json(const IVMetadata& m);
nlohmann::json to_json(const SpikeEvent& e);
nlohmann::json to_json(const SpikeTrain& s);
nlohmann::json to_json(const ThresholdReport& r);
nlohmann::json to_json(const RefractoryReport& r);
nlohmann::json to_json(const TaskResult& r);
nlohmann::json to_json(const ConvergenceReport& r);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace prl
