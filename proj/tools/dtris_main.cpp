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
//
// Batch front-end. Subcommands bind one experiment axis each:
//   converge        fixed point, emits per-iteration sum-rate traces
//   sweep-power     AP budget sweep (default 0..23 dBm, 1 dB steps)
//   sweep-devices   device-count sweep (default 25,50,100,200)
//   sweep-antennas  AP antenna sweep (default 64,128,256)
//   validate        runs the built-in invariant battery
//
// Exit codes: 0 success, 2 parse/usage, 3 validation, 4 I/O,
// 5 trial failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtris/config_io.hpp"
#include "dtris/simulation.hpp"
#include "dtris/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;
constexpr int kExitTrialFailure = 5;

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> schemes;
  int threads = 0;
};

dtris::SimConfig load_config(const CliOptions &options) {
  dtris::SimConfig config;
  if (!options.config_path.empty())
    config = dtris::parse_config_file(options.config_path);
  if (options.seed)
    config.base_seed = *options.seed;
  if (options.trials)
    config.trials = *options.trials;
  if (options.schemes) {
    config.schemes.clear();
    std::string item;
    std::istringstream stream(*options.schemes);
    while (std::getline(stream, item, ',')) {
      const auto scheme = dtris::scheme_from_name(item);
      if (!scheme)
        throw dtris::ValidationError("schemes: unknown scheme '" + item + "'");
      if (!config.has_scheme(*scheme))
        config.schemes.push_back(*scheme);
    }
  }
  dtris::validate_sim_config(config);
  return config;
}

// Binds the sweep axis requested by a subcommand, filling the default grid
// when the config does not provide one. A config whose own sweep axis
// disagrees with the subcommand is rejected.
dtris::SimConfig bind_axis(dtris::SimConfig config, dtris::SweepAxis axis,
                           const std::vector<double> &default_grid) {
  if (config.sweep != dtris::SweepAxis::kNone && config.sweep != axis)
    throw dtris::ValidationError(
        std::string("sweep: config requests axis '") +
        dtris::sweep_axis_name(config.sweep) +
        "' but the subcommand binds '" + dtris::sweep_axis_name(axis) + "'");
  config.sweep = axis;
  if (config.grid.empty())
    config.grid = default_grid;
  dtris::validate_sim_config(config);
  return config;
}

std::string join_path(const std::string &dir, const std::string &name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw dtris::IoError("cannot create output directory '" + dir + "': " +
                         ec.message());
}

void emit_campaign(const dtris::SimConfig &config, const CliOptions &options,
                   const dtris::AggregateReport &report,
                   const std::string &csv_name, const std::string &csv_text) {
  ensure_out_dir(options.out_dir);
  const std::string csv_path = join_path(options.out_dir, csv_name);
  dtris::write_text_file(csv_path, csv_text);

  dtris::RunManifest manifest;
  manifest.version = dtris::kVersion;
  manifest.config_hash = dtris::config_hash(config);
  manifest.base_seed = config.base_seed;
  manifest.timestamp_utc = dtris::utc_timestamp();
  manifest.outputs = {csv_name};
  manifest.config_canonical = dtris::serialize_config(config);
  dtris::write_text_file(join_path(options.out_dir, "run_manifest.json"),
                         dtris::render_manifest_json(manifest));

  for (const auto &point : report.points) {
    std::fprintf(stderr, "point %g:", point.value);
    for (const auto &s : point.stats)
      std::fprintf(stderr, " %s=%.4f", dtris::scheme_name(s.scheme),
                   s.mean_sum_rate);
    std::fprintf(stderr, "\n");
  }
  std::fprintf(stderr, "wrote %s\n", csv_path.c_str());
}

int run_sweep(const CliOptions &options, dtris::SweepAxis axis,
              const std::vector<double> &default_grid,
              const std::string &csv_name, bool exclude_es_above_guard) {
  dtris::SimConfig config = load_config(options);
  config = bind_axis(std::move(config), axis, default_grid);

  if (exclude_es_above_guard && config.has_scheme(dtris::Scheme::kEs)) {
    // the guard applies to min(devices, surfaces) at each grid point
    double worst = 0.0;
    for (double v : config.grid) {
      const double surfaces =
          config.ris > 0 ? static_cast<double>(config.ris) : v;
      worst = std::max(worst, std::min(v, surfaces));
    }
    if (worst > dtris::kExhaustiveLimit) {
      std::vector<dtris::Scheme> kept;
      for (dtris::Scheme s : config.schemes)
        if (s != dtris::Scheme::kEs)
          kept.push_back(s);
      config.schemes = kept;
      std::fprintf(stderr,
                   "note: exhaustive search excluded (device grid exceeds "
                   "the factorial guard of %d)\n",
                   dtris::kExhaustiveLimit);
    }
  }

  dtris::RunOptions run_options;
  run_options.threads = options.threads;
  const dtris::SweepResult result = dtris::monte_carlo_sweep(config, run_options);
  emit_campaign(config, options, result.report, csv_name,
                dtris::render_sweep_csv(result.report));
  return kExitOk;
}

int run_converge(const CliOptions &options) {
  dtris::SimConfig config = load_config(options);
  if (config.sweep != dtris::SweepAxis::kNone)
    throw dtris::ValidationError("sweep: converge runs a single point; set "
                                 "sweep = none");
  if (!config.has_scheme(dtris::Scheme::kJbpda))
    throw dtris::ValidationError("schemes: converge requires jbpda");

  dtris::RunOptions run_options;
  run_options.threads = options.threads;
  const std::vector<dtris::TrialReport> reports =
      dtris::run_trials(config, run_options);

  ensure_out_dir(options.out_dir);
  const std::string csv_name = "converge_trace.csv";
  dtris::write_text_file(join_path(options.out_dir, csv_name),
                         dtris::render_trace_csv(reports));

  dtris::RunManifest manifest;
  manifest.version = dtris::kVersion;
  manifest.config_hash = dtris::config_hash(config);
  manifest.base_seed = config.base_seed;
  manifest.timestamp_utc = dtris::utc_timestamp();
  manifest.outputs = {csv_name};
  manifest.config_canonical = dtris::serialize_config(config);
  dtris::write_text_file(join_path(options.out_dir, "run_manifest.json"),
                         dtris::render_manifest_json(manifest));

  double mean_iterations = 0.0, mean_rate = 0.0;
  for (const auto &report : reports) {
    const dtris::SchemeOutcome *outcome = report.find(dtris::Scheme::kJbpda);
    mean_iterations += outcome->iterations;
    mean_rate += outcome->sum_rate;
  }
  const double n = static_cast<double>(reports.size());
  std::fprintf(stderr,
               "converge: %zu trials, mean iterations %.2f, mean sum rate "
               "%.4f bits/s/Hz\n",
               reports.size(), mean_iterations / n, mean_rate / n);
  return kExitOk;
}

int run_validate() {
  const std::vector<dtris::CheckResult> results = dtris::run_self_checks();
  bool all_passed = true;
  for (const auto &r : results) {
    std::printf("[%s] %s%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.empty() ? "" : ": ", r.detail.c_str());
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitValidation;
}

std::vector<double> default_power_grid() {
  std::vector<double> grid;
  for (int dbm = 0; dbm <= 23; ++dbm)
    grid.push_back(static_cast<double>(dbm));
  return grid;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"dtris: dual-tier RIS downlink network simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions options;
  app.add_option("--config", options.config_path, "Config file (key = value)");
  app.add_option("--out", options.out_dir, "Output directory");
  std::uint64_t seed_value = 0, trials_value = 0;
  auto *seed_opt = app.add_option("--seed", seed_value, "Base seed override");
  auto *trials_opt =
      app.add_option("--trials", trials_value, "Trial count override");
  std::string schemes_value;
  auto *schemes_opt = app.add_option(
      "--schemes", schemes_value, "Comma list of schemes (jbpda,es,gs,rs)");
  app.add_option("--threads", options.threads,
                 "Worker threads (0 = hardware concurrency)");

  auto *converge = app.add_subcommand("converge", "Iteration traces");
  auto *sweep_power = app.add_subcommand("sweep-power", "AP budget sweep");
  auto *sweep_devices =
      app.add_subcommand("sweep-devices", "Device-count sweep");
  auto *sweep_antennas =
      app.add_subcommand("sweep-antennas", "AP antenna sweep");
  auto *validate = app.add_subcommand("validate", "Run the invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitParse;
  }

  if (seed_opt->count() > 0)
    options.seed = seed_value;
  if (trials_opt->count() > 0)
    options.trials = trials_value;
  if (schemes_opt->count() > 0)
    options.schemes = schemes_value;

  try {
    if (validate->parsed())
      return run_validate();
    if (converge->parsed())
      return run_converge(options);
    if (sweep_power->parsed())
      return run_sweep(options, dtris::SweepAxis::kPower, default_power_grid(),
                       "sweep_power.csv", false);
    if (sweep_devices->parsed())
      return run_sweep(options, dtris::SweepAxis::kDevices,
                       {25.0, 50.0, 100.0, 200.0}, "sweep_devices.csv", true);
    if (sweep_antennas->parsed())
      return run_sweep(options, dtris::SweepAxis::kAntennas,
                       {64.0, 128.0, 256.0}, "sweep_antennas.csv", false);
  } catch (const dtris::ParseError &e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const dtris::ValidationError &e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const dtris::IoError &e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const dtris::TrialFailedError &e) {
    std::fprintf(stderr, "trial failure: %s\n", e.what());
    return kExitTrialFailure;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
