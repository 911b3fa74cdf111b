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
#include "prl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "prl/errors.hpp"

#ifndef PRL_DEFAULT_PARAM_DIR
#define PRL_DEFAULT_PARAM_DIR "configs"
#endif

namespace prl {
namespace fs = std::filesystem;

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

std::vector<Section> tokenize(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = raw.find_last_not_of(" \t");
    const std::string line = raw.substr(0, last + 1);

    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string::npos) {
        throw ConfigParseError("unterminated section header", line_no, line.size() + 1);
      }
      if (close != line.size() - 1) {
        throw ConfigParseError("trailing text after section header", line_no, close + 2);
      }
      const std::string name = line.substr(first + 1, close - first - 1);
      if (name.empty()) throw ConfigParseError("empty section name", line_no, first + 2);
      for (std::size_t k = 0; k < name.size(); ++k) {
        if (!is_name_char(name[k])) {
          throw ConfigParseError("invalid character in section name", line_no, first + 2 + k);
        }
      }
      sections.push_back({name, line_no, {}});
      continue;
    }

    const auto eq = line.find('=', first);
    if (eq == std::string::npos) throw ConfigParseError("expected 'key = value'", line_no, first + 1);
    if (sections.empty()) {
      throw ConfigParseError("key outside of any section", line_no, first + 1);
    }
    const auto key_end = line.find_last_not_of(" \t", eq == 0 ? 0 : eq - 1);
    if (key_end == std::string::npos || key_end < first || eq == first) {
      throw ConfigParseError("missing key", line_no, first + 1);
    }
    Entry e;
    e.key = line.substr(first, key_end - first + 1);
    e.line = line_no;
    e.key_column = first + 1;
    for (std::size_t k = 0; k < e.key.size(); ++k) {
      if (!is_name_char(e.key[k])) {
        throw ConfigParseError("invalid character in key", line_no, first + 1 + k);
      }
    }
    const auto vstart = line.find_first_not_of(" \t", eq + 1);
    if (vstart == std::string::npos) throw ConfigParseError("missing value", line_no, eq + 2);
    e.value = line.substr(vstart);
    e.value_column = vstart + 1;
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& token, const Entry& e) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) {
    const auto col = e.value.find(t);
    throw ConfigParseError("expected a number, got '" + t + "'", e.line,
                           e.value_column + (col == std::string::npos ? 0 : col));
  }
  return v;
}

double number(const Entry& e) { return parse_number(e.value, e); }

std::uint64_t unsigned_integer(const Entry& e) {
  std::uint64_t v = 0;
  const auto* end = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigParseError("expected a non-negative integer", e.line, e.value_column);
  }
  return v;
}

int polarity(const Entry& e) {
  const double p = number(e);
  if (p != 1.0 && p != -1.0) throw InvariantViolation(e.key, "must be +1 or -1");
  return static_cast<int>(p);
}

bool boolean(const Entry& e) {
  if (e.value == "true" || e.value == "on" || e.value == "1") return true;
  if (e.value == "false" || e.value == "off" || e.value == "0") return false;
  throw ConfigParseError("expected true or false", e.line, e.value_column);
}

// "a, b, c" or "start:stop:step" (inclusive, step > 0).
std::vector<double> number_list(const Entry& e) {
  std::vector<double> out;
  if (e.value.find(':') != std::string::npos) {
    const auto parts = split(e.value, ':');
    if (parts.size() != 3) throw ConfigParseError("range must be start:stop:step", e.line, e.value_column);
    const double start = parse_number(parts[0], e);
    const double stop = parse_number(parts[1], e);
    const double stepv = parse_number(parts[2], e);
    if (!(stepv > 0.0) || stop < start) throw InvariantViolation(e.key, "range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / stepv + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) out.push_back(start + stepv * static_cast<double>(k));
    return out;
  }
  for (const auto& tok : split(e.value, ',')) out.push_back(parse_number(tok, e));
  return out;
}

Channel channel_from(const Entry& e) {
  if (e.value == "V") return Channel::V;
  if (e.value == "S") return Channel::S;
  throw ConfigParseError("channel must be V or S", e.line, e.value_column);
}

Scheme scheme_from(const Entry& e) {
  if (e.value == "euler") return Scheme::euler;
  if (e.value == "heun") return Scheme::heun;
  throw ConfigParseError("scheme must be euler or heun", e.line, e.value_column);
}

Segment pulse_from(const Entry& e) {
  std::istringstream in(e.value);
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  if (tok.empty()) throw ConfigParseError("empty pulse", e.line, e.value_column);
  Segment s;
  if (tok[0] == "square" && tok.size() == 4) {
    s.shape = PulseShape::square;
  } else if (tok[0] == "bipolar" && tok.size() == 5) {
    s.shape = PulseShape::bipolar;
    Entry pol = e;
    pol.key = "pulse polarity";
    pol.value = tok[4];
    s.polarity = polarity(pol);
  } else {
    throw ConfigParseError(
        "pulse must be 'square t0 width amplitude' or 'bipolar t0 width amplitude polarity'",
        e.line, e.value_column);
  }
  s.start = parse_number(tok[1], e);
  s.duration = parse_number(tok[2], e);
  s.amplitude = parse_number(tok[3], e);
  if (!(s.duration > 0.0)) throw InvariantViolation("pulse", "width must be > 0");
  return s;
}

struct BranchDraft {
  std::string label;
  std::vector<Segment> segments;
  double baseline = 0.0;
  int polarity = 1;
};

struct Draft {
  ExperimentConfig cfg;
  std::optional<double> v0;
  std::optional<double> bias_fraction;
  std::array<std::optional<double>, 4> initial{};
  std::vector<BranchDraft> branches;
};

using Setter = std::function<void(Draft&, const Entry&)>;
using Table = std::map<std::string, Setter>;

const std::map<std::string, Table>& tables() {
  static const std::map<std::string, Table> t = [] {
    std::map<std::string, Table> m;
    m["experiment"] = {
        {"kind", [](Draft& d, const Entry& e) {
           try {
             d.cfg.kind = experiment_kind_from_string(e.value);
           } catch (const InvalidArgument&) {
             throw ConfigParseError("unknown experiment kind '" + e.value + "'", e.line, e.value_column);
           }
         }},
        {"param_set", [](Draft& d, const Entry& e) { d.cfg.param_set = e.value; }},
        {"output_dir", [](Draft& d, const Entry& e) { d.cfg.output_dir = e.value; }},
    };
    m["meta"] = {
        {"name", [](Draft&, const Entry&) {}},
        {"version", [](Draft&, const Entry&) {}},
    };
    m["iv"] = {
        {"a", [](Draft& d, const Entry& e) { d.cfg.system.iv.a = number(e); }},
        {"b", [](Draft& d, const Entry& e) { d.cfg.system.iv.b = number(e); }},
        {"c", [](Draft& d, const Entry& e) { d.cfg.system.iv.c = number(e); }},
        {"d", [](Draft& d, const Entry& e) { d.cfg.system.iv.d = number(e); }},
        {"n1", [](Draft& d, const Entry& e) { d.cfg.system.iv.n1 = number(e); }},
        {"n2", [](Draft& d, const Entry& e) { d.cfg.system.iv.n2 = number(e); }},
        {"h", [](Draft& d, const Entry& e) { d.cfg.system.iv.h = number(e); }},
        {"thermal_voltage", [](Draft& d, const Entry& e) { d.cfg.system.iv.thermal_voltage = number(e); }},
    };
    m["circuit"] = {
        {"C", [](Draft& d, const Entry& e) { d.cfg.system.circuit.C = number(e); }},
        {"L", [](Draft& d, const Entry& e) { d.cfg.system.circuit.L = number(e); }},
        {"R", [](Draft& d, const Entry& e) { d.cfg.system.circuit.R = number(e); }},
        {"kappa", [](Draft& d, const Entry& e) { d.cfg.system.circuit.kappa = number(e); }},
        {"V0", [](Draft& d, const Entry& e) {
           d.v0 = number(e);
           d.bias_fraction.reset();
         }},
        {"bias_fraction", [](Draft& d, const Entry& e) {
           d.bias_fraction = number(e);
           d.v0.reset();
         }},
    };
    m["laser"] = {
        {"gamma_m", [](Draft& d, const Entry& e) { d.cfg.system.laser.gamma_m = number(e); }},
        {"gamma_l", [](Draft& d, const Entry& e) { d.cfg.system.laser.gamma_l = number(e); }},
        {"gamma_nr", [](Draft& d, const Entry& e) { d.cfg.system.laser.gamma_nr = number(e); }},
        {"N0", [](Draft& d, const Entry& e) { d.cfg.system.laser.N0 = number(e); }},
        {"tau_p", [](Draft& d, const Entry& e) { d.cfg.system.laser.tau_p = number(e); }},
        {"eta", [](Draft& d, const Entry& e) { d.cfg.system.laser.eta = number(e); }},
        {"R0", [](Draft& d, const Entry& e) { d.cfg.system.laser.R0 = number(e); }},
        {"q_e", [](Draft& d, const Entry& e) { d.cfg.system.laser.q_e = number(e); }},
    };
    m["sim"] = {
        {"dt", [](Draft& d, const Entry& e) { d.cfg.sim.dt = number(e); }},
        {"duration", [](Draft& d, const Entry& e) { d.cfg.sim.duration = number(e); }},
        {"output_stride", [](Draft& d, const Entry& e) { d.cfg.sim.output_stride = unsigned_integer(e); }},
        {"noise", [](Draft& d, const Entry& e) { d.cfg.sim.noise_enabled = boolean(e); }},
        {"seed", [](Draft& d, const Entry& e) { d.cfg.sim.rng_seed = unsigned_integer(e); }},
        {"scheme", [](Draft& d, const Entry& e) { d.cfg.sim.scheme = scheme_from(e); }},
        {"initial_v", [](Draft& d, const Entry& e) { d.initial[0] = number(e); }},
        {"initial_i", [](Draft& d, const Entry& e) { d.initial[1] = number(e); }},
        {"initial_s", [](Draft& d, const Entry& e) { d.initial[2] = number(e); }},
        {"initial_n", [](Draft& d, const Entry& e) { d.initial[3] = number(e); }},
    };
    m["calibration"] = {
        {"start", [](Draft& d, const Entry& e) { d.cfg.reference.start = number(e); }},
        {"width", [](Draft& d, const Entry& e) { d.cfg.reference.width = number(e); }},
        {"amplitude", [](Draft& d, const Entry& e) { d.cfg.reference.amplitude = number(e); }},
        {"tail", [](Draft& d, const Entry& e) { d.cfg.reference.tail = number(e); }},
    };
    m["detector"] = {
        {"upper", [](Draft& d, const Entry& e) { d.cfg.detector.upper = number(e); }},
        {"lower", [](Draft& d, const Entry& e) { d.cfg.detector.lower = number(e); }},
        {"channel", [](Draft& d, const Entry& e) { d.cfg.detector.channel = channel_from(e); }},
    };
    m["iv_scan"] = {
        {"v_min", [](Draft& d, const Entry& e) { d.cfg.iv_scan.v_min = number(e); }},
        {"v_max", [](Draft& d, const Entry& e) { d.cfg.iv_scan.v_max = number(e); }},
        {"export_step", [](Draft& d, const Entry& e) { d.cfg.iv_scan.export_step = number(e); }},
        {"resolution", [](Draft& d, const Entry& e) {
           d.cfg.iv_scan.resolution = static_cast<int>(unsigned_integer(e));
         }},
    };
    m["threshold"] = {
        {"amplitudes", [](Draft& d, const Entry& e) { d.cfg.threshold.amplitudes = number_list(e); }},
        {"pulse_width", [](Draft& d, const Entry& e) { d.cfg.threshold.pulse_width = number(e); }},
    };
    m["refractory"] = {
        {"separations", [](Draft& d, const Entry& e) { d.cfg.refractory.separations = number_list(e); }},
        {"pulse_width", [](Draft& d, const Entry& e) { d.cfg.refractory.pulse_width = number(e); }},
        {"amplitude", [](Draft& d, const Entry& e) { d.cfg.refractory.amplitude = number(e); }},
        {"seeds", [](Draft& d, const Entry& e) { d.cfg.refractory.seeds = unsigned_integer(e); }},
    };
    m["and"] = {
        {"deltas", [](Draft& d, const Entry& e) { d.cfg.coincidence.deltas = number_list(e); }},
        {"pulse_width", [](Draft& d, const Entry& e) { d.cfg.coincidence.pulse_width = number(e); }},
        {"pulse_start", [](Draft& d, const Entry& e) { d.cfg.coincidence.pulse_start = number(e); }},
        {"amplitude", [](Draft& d, const Entry& e) { d.cfg.coincidence.amplitude = number(e); }},
        {"fraction", [](Draft& d, const Entry& e) { d.cfg.coincidence.fraction = number(e); }},
        {"calibration_amplitudes", [](Draft& d, const Entry& e) {
           d.cfg.coincidence.calibration_amplitudes = number_list(e);
         }},
        {"coincidence_window", [](Draft& d, const Entry& e) {
           d.cfg.coincidence.coincidence_window = number(e);
         }},
    };
    m["xor"] = {
        {"pulse_width", [](Draft& d, const Entry& e) { d.cfg.exclusive_or.pulse_width = number(e); }},
        {"pulse_start", [](Draft& d, const Entry& e) { d.cfg.exclusive_or.pulse_start = number(e); }},
        {"amplitude", [](Draft& d, const Entry& e) { d.cfg.exclusive_or.amplitude = number(e); }},
        {"polarity_a", [](Draft& d, const Entry& e) { d.cfg.exclusive_or.polarity_a = polarity(e); }},
    };
    return m;
  }();
  return t;
}

constexpr const char* kBranchPrefix = "branch.";

void apply(Draft& d, const std::vector<Section>& sections, bool param_set_file) {
  const auto& all = tables();
  for (const auto& sec : sections) {
    if (sec.name.rfind(kBranchPrefix, 0) == 0) {
      const std::string label = sec.name.substr(std::string(kBranchPrefix).size());
      if (label.empty()) throw ConfigParseError("branch section needs a label", sec.line, 1);
      auto it = std::find_if(d.branches.begin(), d.branches.end(),
                             [&](const BranchDraft& b) { return b.label == label; });
      if (it == d.branches.end()) {
        d.branches.push_back({label, {}, 0.0, 1});
        it = d.branches.end() - 1;
      }
      for (const auto& e : sec.entries) {
        if (e.key == "pulse") {
          it->segments.push_back(pulse_from(e));
        } else if (e.key == "polarity") {
          it->polarity = polarity(e);
        } else if (e.key == "baseline") {
          it->baseline = number(e);
        } else {
          throw UnknownKeyError(sec.name + "." + e.key);
        }
      }
      continue;
    }
    const auto table = all.find(sec.name);
    if (table == all.end()) throw UnknownKeyError(sec.name);
    if (param_set_file && sec.name == "experiment") {
      throw ConfigParseError("a parameter set may not contain [experiment]", sec.line, 1);
    }
    std::map<std::string, std::size_t> seen;
    for (const auto& e : sec.entries) {
      const auto setter = table->second.find(e.key);
      if (setter == table->second.end()) throw UnknownKeyError(sec.name + "." + e.key);
      if (!seen.emplace(e.key, e.line).second) {
        throw ConfigParseError("duplicate key '" + e.key + "'", e.line, e.key_column);
      }
      setter->second(d, e);
    }
  }
}

std::optional<std::string> find_param_set(const std::vector<Section>& sections) {
  std::optional<std::string> name;
  for (const auto& sec : sections) {
    if (sec.name != "experiment") continue;
    for (const auto& e : sec.entries) {
      if (e.key == "param_set") name = e.value;
    }
  }
  return name;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig finalize(Draft& d) {
  ExperimentConfig& cfg = d.cfg;
  cfg.system.iv.validate();
  if (d.bias_fraction) {
    if (!(cfg.system.circuit.R > 0.0)) throw InvariantViolation("R", "must be > 0");
    cfg.bias_fraction = d.bias_fraction;
    cfg.system.circuit.V0 = bias_for_fraction(cfg.system.iv, cfg.system.circuit.R, *d.bias_fraction);
  } else if (d.v0) {
    cfg.bias_fraction.reset();
    cfg.system.circuit.V0 = *d.v0;
  } else {
    throw InvariantViolation("V0", "is required (or bias_fraction)");
  }
  cfg.system.validate();

  const int given = static_cast<int>(std::count_if(d.initial.begin(), d.initial.end(),
                                                   [](const auto& x) { return x.has_value(); }));
  if (given == 4) {
    cfg.sim.initial_state = State{*d.initial[0], *d.initial[1], *d.initial[2], *d.initial[3], 0.0};
  } else if (given != 0) {
    throw InvariantViolation("initial_state", "needs all of initial_v, initial_i, initial_s, initial_n");
  }
  cfg.sim.validate();

  for (auto& b : d.branches) {
    cfg.branches.push_back({b.label, Stimulus(std::move(b.segments), b.baseline), b.polarity});
  }

  DetectorConfig det;
  det.upper = cfg.detector.upper;
  det.lower = cfg.detector.lower;
  det.reference_amplitude = 1.0;
  det.validate();
  if (!(cfg.reference.width > 0.0)) throw InvariantViolation("calibration.width", "must be > 0");
  if (!(cfg.reference.tail > 0.0)) throw InvariantViolation("calibration.tail", "must be > 0");
  if (!(cfg.iv_scan.v_max > cfg.iv_scan.v_min)) throw InvariantViolation("iv_scan.v_max", "must exceed v_min");
  if (!(cfg.iv_scan.export_step > 0.0)) throw InvariantViolation("iv_scan.export_step", "must be > 0");
  if (cfg.iv_scan.resolution < 1000) throw InvariantViolation("iv_scan.resolution", "must be >= 1000");

  const auto ascending = [](const std::vector<double>& v) { return std::is_sorted(v.begin(), v.end()); };
  if (!ascending(cfg.threshold.amplitudes)) throw InvariantViolation("threshold.amplitudes", "must be ascending");
  if (!ascending(cfg.refractory.separations)) throw InvariantViolation("refractory.separations", "must be ascending");
  if (!cfg.refractory.separations.empty() && cfg.refractory.separations.front() < 0.0) {
    throw InvariantViolation("refractory.separations", "must be >= 0");
  }
  if (!ascending(cfg.coincidence.calibration_amplitudes)) {
    throw InvariantViolation("and.calibration_amplitudes", "must be ascending");
  }
  if (!(cfg.coincidence.fraction > 0.0 && cfg.coincidence.fraction < 1.0)) {
    throw InvariantViolation("and.fraction", "must lie in (0, 1)");
  }
  if (!(cfg.exclusive_or.pulse_width > 0.0)) throw InvariantViolation("xor.pulse_width", "must be > 0");
  if (!(cfg.coincidence.pulse_width > 0.0)) throw InvariantViolation("and.pulse_width", "must be > 0");
  return cfg;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::iv: return "iv";
    case ExperimentKind::threshold: return "threshold";
    case ExperimentKind::refractory: return "refractory";
    case ExperimentKind::coincidence: return "and";
    case ExperimentKind::exclusive_or: return "xor";
    case ExperimentKind::convergence: return "convergence";
  }
  return "simulate";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::simulate, ExperimentKind::iv, ExperimentKind::threshold,
                 ExperimentKind::refractory, ExperimentKind::coincidence,
                 ExperimentKind::exclusive_or, ExperimentKind::convergence}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + name + "'");
}

Stimulus ExperimentConfig::stimulus() const {
  if (branches.empty()) return Stimulus{};
  return combine(branches);
}

std::vector<fs::path> param_search_path(const std::vector<fs::path>& extra) {
  std::vector<fs::path> out = extra;
  if (const char* env = std::getenv("PRL_PARAM_PATH")) {
    for (const auto& p : split(env, ':')) {
      if (!p.empty()) out.emplace_back(p);
    }
  }
  out.emplace_back(PRL_DEFAULT_PARAM_DIR);
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::vector<fs::path>& search) {
  const auto sections = tokenize(text);
  Draft d;
  if (const auto name = find_param_set(sections)) {
    std::optional<fs::path> found;
    for (const auto& dir : param_search_path(search)) {
      const fs::path candidate = dir / (*name + ".cfg");
      if (fs::exists(candidate)) {
        found = candidate;
        break;
      }
    }
    if (!found) throw ConfigError("parameter set '" + *name + "' not found");
    apply(d, tokenize(read_file(*found)), true);
  }
  apply(d, sections, false);
  return finalize(d);
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = read_file(path);
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_config(text, {dir, dir / ".." / "configs"});
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto num = [](double x) { return format_double(x); };
  const auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + num(v[k]);
    return s;
  };

  o << "[experiment]\n" << "kind = " << to_string(c.kind) << "\n";
  if (!c.param_set.empty()) o << "param_set = " << c.param_set << "\n";
  o << "output_dir = " << c.output_dir << "\n\n";

  const auto& iv = c.system.iv;
  o << "[iv]\n"
    << "a = " << num(iv.a) << "\nb = " << num(iv.b) << "\nc = " << num(iv.c) << "\nd = " << num(iv.d)
    << "\nn1 = " << num(iv.n1) << "\nn2 = " << num(iv.n2) << "\nh = " << num(iv.h)
    << "\nthermal_voltage = " << num(iv.thermal_voltage) << "\n\n";

  const auto& cp = c.system.circuit;
  o << "[circuit]\n"
    << "C = " << num(cp.C) << "\nL = " << num(cp.L) << "\nR = " << num(cp.R)
    << "\nkappa = " << num(cp.kappa) << "\n";
  if (c.bias_fraction) {
    o << "bias_fraction = " << num(*c.bias_fraction) << "\n\n";
  } else {
    o << "V0 = " << num(cp.V0) << "\n\n";
  }

  const auto& lp = c.system.laser;
  o << "[laser]\n"
    << "gamma_m = " << num(lp.gamma_m) << "\ngamma_l = " << num(lp.gamma_l)
    << "\ngamma_nr = " << num(lp.gamma_nr) << "\nN0 = " << num(lp.N0) << "\ntau_p = " << num(lp.tau_p)
    << "\neta = " << num(lp.eta) << "\nR0 = " << num(lp.R0) << "\nq_e = " << num(lp.q_e) << "\n\n";

  const auto& s = c.sim;
  o << "[sim]\n"
    << "dt = " << num(s.dt) << "\nduration = " << num(s.duration)
    << "\noutput_stride = " << s.output_stride << "\nnoise = " << (s.noise_enabled ? "true" : "false")
    << "\nseed = " << s.rng_seed << "\nscheme = " << (s.scheme == Scheme::heun ? "heun" : "euler")
    << "\n";
  if (s.initial_state) {
    o << "initial_v = " << num(s.initial_state->v) << "\ninitial_i = " << num(s.initial_state->i)
      << "\ninitial_s = " << num(s.initial_state->s) << "\ninitial_n = " << num(s.initial_state->n)
      << "\n";
  }
  o << "\n";

  o << "[calibration]\n"
    << "start = " << num(c.reference.start) << "\nwidth = " << num(c.reference.width)
    << "\namplitude = " << num(c.reference.amplitude) << "\ntail = " << num(c.reference.tail) << "\n\n";

  o << "[detector]\n"
    << "upper = " << num(c.detector.upper) << "\nlower = " << num(c.detector.lower)
    << "\nchannel = " << (c.detector.channel == Channel::S ? "S" : "V") << "\n\n";

  for (const auto& b : c.branches) {
    o << "[branch." << b.label << "]\n"
      << "polarity = " << b.polarity << "\nbaseline = " << num(b.stimulus.baseline()) << "\n";
    for (const auto& seg : b.stimulus.segments()) {
      o << "pulse = " << (seg.shape == PulseShape::bipolar ? "bipolar " : "square ") << num(seg.start)
        << " " << num(seg.duration) << " " << num(seg.amplitude);
      if (seg.shape == PulseShape::bipolar) o << " " << seg.polarity;
      o << "\n";
    }
    o << "\n";
  }

  o << "[iv_scan]\n"
    << "v_min = " << num(c.iv_scan.v_min) << "\nv_max = " << num(c.iv_scan.v_max)
    << "\nexport_step = " << num(c.iv_scan.export_step) << "\nresolution = " << c.iv_scan.resolution
    << "\n\n";

  o << "[threshold]\n";
  if (!c.threshold.amplitudes.empty()) o << "amplitudes = " << list(c.threshold.amplitudes) << "\n";
  o << "pulse_width = " << num(c.threshold.pulse_width) << "\n\n";

  o << "[refractory]\n";
  if (!c.refractory.separations.empty()) o << "separations = " << list(c.refractory.separations) << "\n";
  if (c.refractory.pulse_width) o << "pulse_width = " << num(*c.refractory.pulse_width) << "\n";
  if (c.refractory.amplitude) o << "amplitude = " << num(*c.refractory.amplitude) << "\n";
  o << "seeds = " << c.refractory.seeds << "\n\n";

  const auto& a = c.coincidence;
  o << "[and]\n";
  if (!a.deltas.empty()) o << "deltas = " << list(a.deltas) << "\n";
  o << "pulse_width = " << num(a.pulse_width) << "\npulse_start = " << num(a.pulse_start) << "\n";
  if (a.amplitude) o << "amplitude = " << num(*a.amplitude) << "\n";
  o << "fraction = " << num(a.fraction) << "\n";
  if (!a.calibration_amplitudes.empty()) {
    o << "calibration_amplitudes = " << list(a.calibration_amplitudes) << "\n";
  }
  if (a.coincidence_window) o << "coincidence_window = " << num(*a.coincidence_window) << "\n";
  o << "\n";

  const auto& x = c.exclusive_or;
  o << "[xor]\n"
    << "pulse_width = " << num(x.pulse_width) << "\npulse_start = " << num(x.pulse_start) << "\n";
  if (x.amplitude) o << "amplitude = " << num(*x.amplitude) << "\n";
  o << "polarity_a = " << x.polarity_a << "\n";
  return o.str();
}

}  // namespace prl
