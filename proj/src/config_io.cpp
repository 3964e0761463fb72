// SPDX-License-Identifier: Apache-2.0
//
// dtris: dual-tier RIS-assisted downlink network simulator
// Copyright (C) 2026 dtris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dtris/config_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dtris {

namespace {

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos)
    return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, sep))
    out.push_back(trim(item));
  if (!s.empty() && s.back() == sep)
    out.push_back("");
  return out;
}

[[noreturn]] void parse_fail(const std::string &origin, int line,
                             const std::string &what) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string &origin, int line, const std::string &key,
                    const std::string &value) {
  errno = 0;
  char *end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (value.empty() || end == nullptr || *end != '\0' || errno == ERANGE)
    parse_fail(origin, line, key + ": expected a number, got '" + value + "'");
  return x;
}

long long parse_int(const std::string &origin, int line, const std::string &key,
                    const std::string &value) {
  errno = 0;
  char *end = nullptr;
  const long long x = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end == nullptr || *end != '\0' || errno == ERANGE)
    parse_fail(origin, line, key + ": expected an integer, got '" + value + "'");
  return x;
}

std::uint64_t parse_u64(const std::string &origin, int line,
                        const std::string &key, const std::string &value) {
  errno = 0;
  char *end = nullptr;
  const unsigned long long x = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || end == nullptr || *end != '\0' || errno == ERANGE)
    parse_fail(origin, line,
               key + ": expected an unsigned integer, got '" + value + "'");
  return static_cast<std::uint64_t>(x);
}

// Shortest representation that parses back to the same double.
std::string format_double(double x) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x)
      return buf;
  }
  return buf;
}

std::string format_fixed(double x) {
  if (std::isnan(x))
    return "nan";
  return format_double(x);
}

const std::vector<Scheme> kAllSchemes = {Scheme::kJbpda, Scheme::kEs,
                                         Scheme::kGs, Scheme::kRs};

} // namespace

SimConfig parse_config_text(const std::string &text, const std::string &origin) {
  SimConfig config;
  std::vector<std::string> seen;

  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const auto comment = raw.find('#');
    if (comment != std::string::npos)
      raw.erase(comment);
    const std::string entry = trim(raw);
    if (entry.empty())
      continue;

    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      parse_fail(origin, line, "expected 'key = value', got '" + entry + "'");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty())
      parse_fail(origin, line, "missing key before '='");
    for (const auto &k : seen)
      if (k == key)
        parse_fail(origin, line, "duplicate key '" + key + "'");
    seen.push_back(key);

    if (key == "devices") {
      config.devices = static_cast<Index>(parse_int(origin, line, key, value));
    } else if (key == "ris") {
      if (value == "auto")
        config.ris = 0;
      else
        config.ris = static_cast<Index>(parse_int(origin, line, key, value));
    } else if (key == "antennas") {
      config.antennas = static_cast<Index>(parse_int(origin, line, key, value));
    } else if (key == "elements_y") {
      config.elements_y = static_cast<Index>(parse_int(origin, line, key, value));
    } else if (key == "elements_z") {
      config.elements_z = static_cast<Index>(parse_int(origin, line, key, value));
    } else if (key == "frequency_ghz") {
      config.frequency_ghz = parse_double(origin, line, key, value);
    } else if (key == "bandwidth_mhz") {
      config.bandwidth_mhz = parse_double(origin, line, key, value);
    } else if (key == "noise_density_dbm_hz") {
      config.noise_density_dbm_hz = parse_double(origin, line, key, value);
    } else if (key == "noise_figure_db") {
      config.noise_figure_db = parse_double(origin, line, key, value);
    } else if (key == "power_budget_dbm") {
      config.power_budget_dbm = parse_double(origin, line, key, value);
    } else if (key == "element_side_m") {
      config.element_side_m = parse_double(origin, line, key, value);
    } else if (key == "trials") {
      config.trials = parse_u64(origin, line, key, value);
    } else if (key == "seed") {
      config.base_seed = parse_u64(origin, line, key, value);
    } else if (key == "schemes") {
      config.schemes.clear();
      for (const auto &name : split(value, ',')) {
        if (name.empty())
          parse_fail(origin, line, "schemes: empty entry");
        const auto scheme = scheme_from_name(name);
        if (!scheme)
          parse_fail(origin, line, "schemes: unknown scheme '" + name + "'");
        if (!config.has_scheme(*scheme))
          config.schemes.push_back(*scheme);
      }
      // canonical order
      std::vector<Scheme> ordered;
      for (Scheme s : kAllSchemes)
        for (Scheme have : config.schemes)
          if (have == s)
            ordered.push_back(s);
      config.schemes = ordered;
    } else if (key == "max_iterations") {
      config.max_iterations =
          static_cast<int>(parse_int(origin, line, key, value));
    } else if (key == "rate_tolerance") {
      config.rate_tolerance = parse_double(origin, line, key, value);
    } else if (key == "sweep") {
      const auto axis = sweep_axis_from_name(value);
      if (!axis)
        parse_fail(origin, line, "sweep: unknown axis '" + value + "'");
      config.sweep = *axis;
    } else if (key == "grid") {
      config.grid.clear();
      if (!value.empty())
        for (const auto &item : split(value, ','))
          config.grid.push_back(parse_double(origin, line, key, item));
    } else {
      parse_fail(origin, line, "unknown key '" + key + "'");
    }
  }

  validate_sim_config(config);
  return config;
}

SimConfig parse_config_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const SimConfig &config) {
  std::ostringstream out;
  out << "antennas = " << config.antennas << "\n";
  out << "bandwidth_mhz = " << format_double(config.bandwidth_mhz) << "\n";
  out << "devices = " << config.devices << "\n";
  out << "element_side_m = " << format_double(config.element_side_m) << "\n";
  out << "elements_y = " << config.elements_y << "\n";
  out << "elements_z = " << config.elements_z << "\n";
  out << "frequency_ghz = " << format_double(config.frequency_ghz) << "\n";
  out << "grid = ";
  for (std::size_t i = 0; i < config.grid.size(); ++i) {
    if (i > 0)
      out << ",";
    out << format_double(config.grid[i]);
  }
  out << "\n";
  out << "max_iterations = " << config.max_iterations << "\n";
  out << "noise_density_dbm_hz = "
      << format_double(config.noise_density_dbm_hz) << "\n";
  out << "noise_figure_db = " << format_double(config.noise_figure_db) << "\n";
  out << "power_budget_dbm = " << format_double(config.power_budget_dbm)
      << "\n";
  out << "rate_tolerance = " << format_double(config.rate_tolerance) << "\n";
  if (config.ris > 0)
    out << "ris = " << config.ris << "\n";
  else
    out << "ris = auto\n";
  out << "schemes = ";
  for (std::size_t i = 0; i < config.schemes.size(); ++i) {
    if (i > 0)
      out << ",";
    out << scheme_name(config.schemes[i]);
  }
  out << "\n";
  out << "seed = " << config.base_seed << "\n";
  out << "sweep = " << sweep_axis_name(config.sweep) << "\n";
  out << "trials = " << config.trials << "\n";
  return out.str();
}

std::uint64_t config_hash(const SimConfig &config) {
  const std::string canonical = serialize_config(config);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string render_sweep_csv(const AggregateReport &report) {
  std::ostringstream out;
  out << "sweep_value,scheme,mean_sum_rate_bps_hz,stderr,trials,"
         "gap_vs_jbpda_percent\n";
  for (const auto &point : report.points)
    for (const auto &s : point.stats)
      out << format_fixed(point.value) << "," << scheme_name(s.scheme) << ","
          << format_fixed(s.mean_sum_rate) << "," << format_fixed(s.stderr_)
          << "," << s.trials << "," << format_fixed(s.gap_vs_jbpda_percent)
          << "\n";
  return out.str();
}

std::string render_trace_csv(const std::vector<TrialReport> &reports) {
  std::ostringstream out;
  out << "trial,iteration,sum_rate_bps_hz,best_sum_rate_bps_hz\n";
  for (const auto &report : reports) {
    const SchemeOutcome *outcome = report.find(Scheme::kJbpda);
    if (outcome == nullptr)
      continue;
    double best = -1.0;
    for (std::size_t it = 0; it < outcome->trace.size(); ++it) {
      best = std::max(best, outcome->trace[it]);
      out << report.trial_index << "," << (it + 1) << ","
          << format_fixed(outcome->trace[it]) << "," << format_fixed(best)
          << "\n";
    }
  }
  return out.str();
}

std::string render_manifest_json(const RunManifest &manifest) {
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(manifest.config_hash));
  nlohmann::json j;
  j["version"] = manifest.version;
  j["config_hash"] = hash_hex;
  j["base_seed"] = manifest.base_seed;
  j["timestamp_utc"] = manifest.timestamp_utc;
  j["outputs"] = manifest.outputs;
  j["config"] = manifest.config_canonical;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path + "'");
}

} // namespace dtris
