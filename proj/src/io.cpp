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
#include "prl/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "prl/errors.hpp"

#ifndef PRL_VERSION
#define PRL_VERSION "0.0.0"
#endif

namespace prl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void append_number(std::string& out, double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  out.append(buf, static_cast<std::size_t>(n));
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

std::string format_trace_csv(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 6 * 24 + 16);
  out.append(kTraceHeader);
  out.push_back('\n');
  for (std::size_t k = 0; k < trace.size(); ++k) {
    for (const double x : {trace.t[k], trace.v[k], trace.i[k], trace.s[k], trace.n[k], trace.s0[k]}) {
      append_number(out, x);
      out.push_back(',');
    }
    out.back() = '\n';
  }
  return out;
}

Trace parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw InvalidArgument("trace CSV must start with header '" + std::string(kTraceHeader) + "'");
  }
  Trace tr;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double vals[6];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < 6; ++c) {
      const auto [ptr, ec] = std::from_chars(p, end, vals[c]);
      if (ec != std::errc() || (c < 5 && (ptr == end || *ptr != ',')) || (c == 5 && ptr != end)) {
        throw InvalidArgument("malformed trace CSV at row " + std::to_string(row));
      }
      p = ptr + 1;
    }
    tr.t.push_back(vals[0]);
    tr.v.push_back(vals[1]);
    tr.i.push_back(vals[2]);
    tr.s.push_back(vals[3]);
    tr.n.push_back(vals[4]);
    tr.s0.push_back(vals[5]);
  }
  if (tr.size() >= 2) tr.dt = tr.t[1] - tr.t[0];
  return tr;
}

void write_trace_csv(const fs::path& path, const Trace& trace) {
  write_text(path, format_trace_csv(trace));
}

Trace read_trace_csv(const fs::path& path) { return parse_trace_csv(read_text(path)); }

std::string format_matrix_csv(const Matrix& m, const std::string& header) {
  std::string out;
  if (!header.empty()) out += header + "\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out.push_back(',');
      append_number(out, m(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 0xF]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

std::string_view tool_version() { return PRL_VERSION; }

Manifest write_manifest(const fs::path& dir, const std::string& config_text, std::uint64_t seed,
                        std::vector<std::string> files) {
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  Manifest m;
  m.tool_version = std::string(tool_version());
  m.config_sha256 = sha256_hex(config_text);
  m.seed = seed;
  std::string text = "tool_version " + m.tool_version + "\nconfig_sha256 " + m.config_sha256 +
                     "\nseed " + std::to_string(seed) + "\n";
  for (const auto& name : files) {
    m.files.push_back({name, sha256_file(dir / name)});
    text += "file " + m.files.back().sha256 + " " + name + "\n";
  }
  write_text(dir / "manifest.txt", text);
  return m;
}

Manifest read_manifest(const fs::path& path) {
  std::istringstream in(read_text(path));
  Manifest m;
  std::string tag;
  while (in >> tag) {
    if (tag == "tool_version") {
      in >> m.tool_version;
    } else if (tag == "config_sha256") {
      in >> m.config_sha256;
    } else if (tag == "seed") {
      in >> m.seed;
    } else if (tag == "file") {
      ManifestEntry e;
      in >> e.sha256;
      std::getline(in >> std::ws, e.name);
      m.files.push_back(std::move(e));
    } else {
      throw InvalidArgument("unknown manifest line '" + tag + "'");
    }
  }
  return m;
}

json to_json(const IVMetadata& m) {
  return {{"v_peak", m.v_peak}, {"i_peak", m.i_peak},     {"v_valley", m.v_valley},
          {"i_valley", m.i_valley}, {"pvcr", m.pvcr}, {"ndc_lo", m.ndc_lo},
          {"ndc_hi", m.ndc_hi}};
}

json to_json(const SpikeEvent& e) {
  return {{"t_peak", e.t_peak},   {"v_pp", e.v_pp},   {"s_peak", e.s_peak},
          {"width", e.width},     {"t_start", e.t_start}, {"t_end", e.t_end},
          {"duration", e.duration()}};
}

json to_json(const SpikeTrain& s) {
  json events = json::array();
  for (const auto& e : s.events) events.push_back(to_json(e));
  return {{"count", s.size()},
          {"reference_amplitude", s.detector.reference_amplitude},
          {"upper", s.detector.upper},
          {"lower", s.detector.lower},
          {"events", events}};
}

json to_json(const ThresholdReport& r) {
  return {{"amplitudes", r.amplitudes},
          {"spike_counts", r.spike_counts},
          {"threshold", optional_number(r.threshold)}};
}

json to_json(const RefractoryReport& r) {
  return {{"separations", r.separations},
          {"spike_counts", r.spike_counts},
          {"double_spike_frequency", r.double_spike_frequency()},
          {"t_ref", optional_number(r.t_ref)}};
}

json to_json(const TaskResult& r) {
  return {{"label", r.label},
          {"delta", r.delta},
          {"spike_count", r.spike_count},
          {"expected", r.expected},
          {"pass", r.pass}};
}

json to_json(const ConvergenceReport& r) {
  return {{"dt_coarse", r.dt_coarse},
          {"dt_fine", r.dt_fine},
          {"max_dv", r.max_dv},
          {"max_di", r.max_di},
          {"max_ds", r.max_ds},
          {"max_dn", r.max_dn},
          {"peak_time_coarse", r.peak_time_coarse},
          {"peak_time_fine", r.peak_time_fine},
          {"peak_time_shift", r.peak_time_shift},
          {"vpp_coarse", r.vpp_coarse},
          {"vpp_fine", r.vpp_fine},
          {"vpp_relative_change", r.vpp_relative_change}};
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace prl
