// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmrqc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nmrqc {

double Config::resolved_dwell() const {
  if (dwell_s > 0.0) return dwell_s;
  const double max_offset =
      std::max(std::abs(sys.nu_i_hz), std::abs(sys.nu_s_hz));
  // Spectral width 4x the larger offset keeps both multiplets centered in
  // the halves of the spectrum; fall back to the coupling scale when both
  // offsets vanish.
  const double width = max_offset > 0.0 ? 4.0 * max_offset
                                        : 4.0 * (std::abs(sys.j_hz) + 1.0);
  return 1.0 / width;
}

void Config::validate() const {
  sys.validate();
  if (points < 2 || (points & (points - 1)) != 0) {
    throw std::invalid_argument("points must be a power of two >= 2");
  }
  ShapedPulseSpec probe;
  probe.shape = shaped.shape;
  probe.duration_s = shaped.duration_s;
  probe.truncation = shaped.truncation;
  probe.slices = shaped.slices;
  probe.validate();
}

std::vector<std::string> Config::warnings() const {
  std::vector<std::string> out;
  if (!sys.weakly_coupled()) {
    std::ostringstream msg;
    msg << "offset difference " << std::abs(sys.nu_i_hz - sys.nu_s_hz)
        << " Hz is less than 10x J = " << sys.j_hz
        << " Hz; the weak-coupling evolution used here is a poor "
           "description of this system";
    out.push_back(msg.str());
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
    --e;
  }
  return s.substr(b, e - b);
}

double number_value(std::string_view value, int line, const char* key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(line, std::string("malformed number for ") + key +
                                ": '" + std::string(value) + "'");
  }
  return out;
}

int int_value(std::string_view value, int line, const char* key) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(line, std::string("malformed integer for ") + key +
                                ": '" + std::string(value) + "'");
  }
  return out;
}

}  // namespace

Config load_config(std::istream& in) {
  Config config;
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line(raw);
    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_number,
                        "expected key=value, got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) {
      throw ConfigError(line_number,
                        "missing value for '" + std::string(key) + "'");
    }
    if (key == "nu_i_hz") {
      config.sys.nu_i_hz = number_value(value, line_number, "nu_i_hz");
    } else if (key == "nu_s_hz") {
      config.sys.nu_s_hz = number_value(value, line_number, "nu_s_hz");
    } else if (key == "j_hz") {
      config.sys.j_hz = number_value(value, line_number, "j_hz");
    } else if (key == "t2star_s") {
      config.sys.t2star_s =
          value == "inf" ? std::numeric_limits<double>::infinity()
                         : number_value(value, line_number, "t2star_s");
    } else if (key == "points") {
      config.points = int_value(value, line_number, "points");
    } else if (key == "dwell_s") {
      config.dwell_s =
          value == "auto" ? 0.0 : number_value(value, line_number, "dwell_s");
    } else if (key == "soft_shape") {
      if (value == "gaussian") {
        config.shaped.shape = PulseShape::Gaussian;
      } else if (value == "rectangular") {
        config.shaped.shape = PulseShape::Rectangular;
      } else {
        throw ConfigError(line_number,
                          "soft_shape must be gaussian or rectangular");
      }
    } else if (key == "soft_duration_s") {
      config.shaped.duration_s =
          number_value(value, line_number, "soft_duration_s");
    } else if (key == "soft_truncation") {
      config.shaped.truncation =
          number_value(value, line_number, "soft_truncation");
    } else if (key == "soft_slices") {
      config.shaped.slices = int_value(value, line_number, "soft_slices");
    } else if (key == "mode") {
      if (value == "ideal") {
        config.mode = CompileMode::Ideal;
      } else if (value == "shaped") {
        config.mode = CompileMode::Shaped;
      } else {
        throw ConfigError(line_number, "mode must be ideal or shaped");
      }
    } else {
      throw ConfigError(line_number,
                        "unknown key '" + std::string(key) + "'");
    }
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_number, e.what());
  }
  return config;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(0, "cannot open config file '" + path + "'");
  }
  return load_config(in);
}

Config paper_preset() { return Config{}; }

}  // namespace nmrqc
