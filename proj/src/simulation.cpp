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

#include "dtris/simulation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace dtris {

namespace {

// Substream selectors; re-draw attempts shift the block so a fresh scene
// never replays earlier per-scheme draws.
constexpr std::uint64_t kStreamGeometry = 0;
constexpr std::uint64_t kStreamGreedy = 1;
constexpr std::uint64_t kStreamRandom = 2;
constexpr std::uint64_t kStreamsPerAttempt = 16;

double rate_bps_hz(double sinr) { return std::log1p(sinr) / M_LN2; }

} // namespace

const char *scheme_name(Scheme scheme) {
  switch (scheme) {
  case Scheme::kJbpda:
    return "jbpda";
  case Scheme::kEs:
    return "es";
  case Scheme::kGs:
    return "gs";
  case Scheme::kRs:
    return "rs";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string &name) {
  if (name == "jbpda")
    return Scheme::kJbpda;
  if (name == "es")
    return Scheme::kEs;
  if (name == "gs")
    return Scheme::kGs;
  if (name == "rs")
    return Scheme::kRs;
  return std::nullopt;
}

const char *sweep_axis_name(SweepAxis axis) {
  switch (axis) {
  case SweepAxis::kNone:
    return "none";
  case SweepAxis::kPower:
    return "power";
  case SweepAxis::kDevices:
    return "devices";
  case SweepAxis::kAntennas:
    return "antennas";
  }
  return "?";
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string &name) {
  if (name == "none")
    return SweepAxis::kNone;
  if (name == "power")
    return SweepAxis::kPower;
  if (name == "devices")
    return SweepAxis::kDevices;
  if (name == "antennas")
    return SweepAxis::kAntennas;
  return std::nullopt;
}

CarrierConfig SimConfig::carrier() const {
  CarrierConfig c;
  c.frequency_hz = frequency_hz();
  c.bandwidth_hz = bandwidth_hz();
  c.noise_density_dbm_hz = noise_density_dbm_hz;
  c.noise_figure_db = noise_figure_db;
  c.element_side_m = element_side_m;
  return c;
}

bool SimConfig::has_scheme(Scheme scheme) const {
  for (Scheme s : schemes)
    if (s == scheme)
      return true;
  return false;
}

void validate_sim_config(const SimConfig &config) {
  if (config.devices < 1)
    throw ValidationError("devices: must be at least 1");
  if (config.ris < 0)
    throw ValidationError("ris: must be positive or auto");
  if (config.antennas < 1)
    throw ValidationError("antennas: must be at least 1");
  if (config.devices > config.antennas)
    throw ValidationError(
        "devices: must not exceed antennas (zero-forcing feasibility)");
  if (config.elements_y < 1)
    throw ValidationError("elements_y: must be at least 1");
  if (config.elements_z < 1)
    throw ValidationError("elements_z: must be at least 1");
  if (!(config.frequency_ghz > 0.0))
    throw ValidationError("frequency_ghz: must be positive");
  if (!(config.bandwidth_mhz > 0.0))
    throw ValidationError("bandwidth_mhz: must be positive");
  if (!std::isfinite(config.power_budget_dbm))
    throw ValidationError("power_budget_dbm: must be finite");
  if (!std::isfinite(config.noise_density_dbm_hz))
    throw ValidationError("noise_density_dbm_hz: must be finite");
  if (!std::isfinite(config.noise_figure_db))
    throw ValidationError("noise_figure_db: must be finite");
  if (config.element_side_m < 0.0)
    throw ValidationError("element_side_m: must be nonnegative");
  if (config.trials < 1)
    throw ValidationError("trials: must be at least 1");
  if (config.schemes.empty())
    throw ValidationError("schemes: at least one scheme is required");
  if (config.max_iterations < 1)
    throw ValidationError("max_iterations: must be at least 1");
  if (!(config.rate_tolerance > 0.0))
    throw ValidationError("rate_tolerance: must be positive");
  if (config.has_scheme(Scheme::kEs) &&
      std::min(config.devices, config.ris_count()) > kExhaustiveLimit)
    throw ValidationError(
        "schemes: es requires min(devices, ris) <= " +
        std::to_string(kExhaustiveLimit) + " (factorial guard)");
  for (double v : config.grid)
    if (!std::isfinite(v))
      throw ValidationError("grid: entries must be finite");
}

PipelineResult evaluate_matching(const CascadeModel &model,
                                 const Association &assoc, double noise_watts,
                                 double budget_watts, double rank_rtol) {
  const StackedChannel stacked = model.stacked_matrix(assoc);
  PipelineResult res;
  res.gains = zf_column_gains(stacked.matrix, rank_rtol);
  res.power = waterfill(res.gains, noise_watts, budget_watts);
  res.device_rates = RVector::Zero(model.devices());
  res.sum_rate = 0.0;
  for (std::size_t row = 0; row < stacked.devices.size(); ++row) {
    const double rate = rate_bps_hz(res.power.powers(static_cast<Index>(row)) *
                                    res.gains(static_cast<Index>(row)) /
                                    noise_watts);
    res.device_rates(stacked.devices[row]) = rate;
    res.sum_rate += rate;
  }
  return res;
}

RateMatrix proxy_rate_matrix(const CascadeModel &model,
                             const RVector &device_powers, double noise_watts) {
  if (device_powers.size() != model.devices())
    throw ShapeError("proxy_rate_matrix: power vector does not match devices");
  if (!(noise_watts > 0.0))
    throw InvalidNoiseError("proxy_rate_matrix: noise power must be positive");

  RateMatrix rates(model.ris_count(), model.devices());
  for (Index l = 0; l < model.ris_count(); ++l)
    for (Index k = 0; k < model.devices(); ++k)
      rates(l, k) =
          rate_bps_hz(device_powers(k) * model.pair_gain(l, k) / noise_watts);
  return rates;
}

JbpdaSolution jbpda_solve(const CascadeModel &model, double noise_watts,
                          double budget_watts, const SolveOptions &options) {
  const Index devices = model.devices();

  JbpdaSolution best;
  best.sum_rate = -std::numeric_limits<double>::infinity();

  RVector nominal_powers =
      RVector::Constant(devices, budget_watts / static_cast<double>(devices));
  std::optional<Association> previous_assoc;
  double previous_sum = 0.0;
  std::vector<double> trace;
  long proposals = 0;
  int iterations = 0;

  Association best_assoc = Association::empty(static_cast<int>(devices),
                                              static_cast<int>(model.ris_count()));
  PipelineResult best_result;

  for (int it = 0; it < options.max_iterations; ++it) {
    const RateMatrix utilities =
        proxy_rate_matrix(model, nominal_powers, noise_watts);
    MatchResult matched =
        deferred_acceptance(build_preferences(utilities), utilities);
    proposals += matched.proposal_count;

    // A repeated matching reproduces the previous iterate exactly.
    if (previous_assoc && matched.assoc == *previous_assoc)
      break;

    PipelineResult result =
        evaluate_matching(model, matched.assoc, noise_watts, budget_watts,
                          options.rank_rtol);
    ++iterations;
    trace.push_back(result.sum_rate);

    if (result.sum_rate > best.sum_rate) {
      best.sum_rate = result.sum_rate;
      best_assoc = matched.assoc;
      best_result = result;
    }

    const bool converged =
        it > 0 && std::abs(result.sum_rate - previous_sum) <=
                      options.rate_tolerance *
                          std::max(std::abs(result.sum_rate),
                                   std::numeric_limits<double>::min());

    previous_sum = result.sum_rate;
    previous_assoc = std::move(matched.assoc);
    if (converged)
      break;

    // Feed achieved powers back into the next utility matrix; unmatched
    // devices carry zero power.
    nominal_powers = RVector::Zero(devices);
    const std::vector<int> matched_devices = previous_assoc->matched_devices();
    for (std::size_t row = 0; row < matched_devices.size(); ++row)
      nominal_powers(matched_devices[row]) =
          result.power.powers(static_cast<Index>(row));
  }

  best.assoc = best_assoc;
  best.power = best_result.power;
  best.device_rates = best_result.device_rates;
  best.trace = std::move(trace);
  best.proposal_count = proposals;
  best.iterations = iterations;
  best.beamformer = zf_beamformer(model.stacked_matrix(best.assoc).matrix,
                                  options.rank_rtol);
  return best;
}

const SchemeOutcome *TrialReport::find(Scheme scheme) const {
  for (const auto &outcome : outcomes)
    if (outcome.scheme == scheme)
      return &outcome;
  return nullptr;
}

double TrialReport::sum_rate(Scheme scheme) const {
  const SchemeOutcome *outcome = find(scheme);
  if (outcome == nullptr)
    throw InvalidInputError(std::string("scheme not present in report: ") +
                            scheme_name(scheme));
  return outcome->sum_rate;
}

TrialReport run_trial(const SimConfig &config, std::uint64_t trial_index) {
  validate_sim_config(config);
  const std::uint64_t trial_seed = config.base_seed ^ trial_index;
  const CarrierConfig carrier = config.carrier();
  const double noise = noise_power_watts(carrier);
  const double budget = config.budget_watts();

  const auto started = std::chrono::steady_clock::now();

  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    const std::uint64_t block =
        static_cast<std::uint64_t>(attempt) * kStreamsPerAttempt;
    Rng geometry_rng(mix_seed(trial_seed, kStreamGeometry + block));
    const NetworkGeometry geometry = sample_geometry(
        config.devices, config.ris_count(), config.antennas,
        config.elements_y, config.elements_z, config.sampler, geometry_rng);
    const CascadeModel model = CascadeModel::build(geometry, carrier);

    try {
      TrialReport report;
      report.trial_index = trial_index;
      report.seed = trial_seed;
      report.redraws = attempt;

      for (Scheme scheme : config.schemes) {
        SchemeOutcome outcome;
        outcome.scheme = scheme;
        switch (scheme) {
        case Scheme::kJbpda: {
          SolveOptions options;
          options.max_iterations = config.max_iterations;
          options.rate_tolerance = config.rate_tolerance;
          JbpdaSolution solution = jbpda_solve(model, noise, budget, options);
          outcome.sum_rate = solution.sum_rate;
          outcome.device_rates = solution.device_rates;
          outcome.proposal_count = solution.proposal_count;
          outcome.iterations = solution.iterations;
          outcome.trace = std::move(solution.trace);
          report.matched = solution.assoc.matched_count();
          break;
        }
        case Scheme::kEs: {
          const Association assoc = exhaustive_search(
              [&](const Association &candidate) {
                return evaluate_matching(model, candidate, noise, budget)
                    .sum_rate;
              },
              static_cast<int>(config.devices),
              static_cast<int>(config.ris_count()));
          const PipelineResult result =
              evaluate_matching(model, assoc, noise, budget);
          outcome.sum_rate = result.sum_rate;
          outcome.device_rates = result.device_rates;
          report.matched = assoc.matched_count();
          break;
        }
        case Scheme::kGs: {
          Rng rng(mix_seed(trial_seed, kStreamGreedy + block));
          const RVector uniform_powers = RVector::Constant(
              config.devices, budget / static_cast<double>(config.devices));
          const RateMatrix utilities =
              proxy_rate_matrix(model, uniform_powers, noise);
          const Association assoc = greedy_association(utilities, rng);
          const PipelineResult result =
              evaluate_matching(model, assoc, noise, budget);
          outcome.sum_rate = result.sum_rate;
          outcome.device_rates = result.device_rates;
          report.matched = assoc.matched_count();
          break;
        }
        case Scheme::kRs: {
          Rng rng(mix_seed(trial_seed, kStreamRandom + block));
          const Association assoc =
              random_association(static_cast<int>(config.devices),
                                 static_cast<int>(config.ris_count()), rng);
          const PipelineResult result =
              evaluate_matching(model, assoc, noise, budget);
          outcome.sum_rate = result.sum_rate;
          outcome.device_rates = result.device_rates;
          report.matched = assoc.matched_count();
          break;
        }
        }
        report.outcomes.push_back(std::move(outcome));
      }

      report.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
      return report;
    } catch (const SingularChannelError &) {
      // Rank-deficient scene; fall through to a fresh draw.
    }
  }
  throw TrialFailedError("trial " + std::to_string(trial_index) +
                         ": geometry re-draw budget exhausted (" +
                         std::to_string(kMaxRedraws) + " attempts)");
}

std::vector<TrialReport> run_trials(const SimConfig &config,
                                    const RunOptions &options) {
  validate_sim_config(config);
  const std::uint64_t count = config.trials;
  std::vector<TrialReport> reports(count);

  unsigned threads = options.threads > 0
                         ? static_cast<unsigned>(options.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, count));

  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i)
      reports[i] = run_trial(config, i);
    return reports;
  }

  std::atomic<std::uint64_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::uint64_t i = cursor.fetch_add(1);
      if (i >= count)
        return;
      try {
        reports[i] = run_trial(config, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error)
          first_error = std::current_exception();
        cursor.store(count);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back(worker);
  for (auto &thread : pool)
    thread.join();
  if (first_error)
    std::rethrow_exception(first_error);
  return reports;
}

SimConfig bind_sweep_point(const SimConfig &config, SweepAxis axis,
                           double value) {
  SimConfig point = config;
  switch (axis) {
  case SweepAxis::kNone:
    break;
  case SweepAxis::kPower:
    point.power_budget_dbm = value;
    break;
  case SweepAxis::kDevices:
    point.devices = static_cast<Index>(std::llround(value));
    break;
  case SweepAxis::kAntennas:
    point.antennas = static_cast<Index>(std::llround(value));
    break;
  }
  validate_sim_config(point);
  return point;
}

AggregateReport aggregate_reports(
    const SimConfig &config, const std::vector<double> &grid,
    const std::vector<std::vector<TrialReport>> &per_point) {
  AggregateReport report;
  report.axis = config.sweep;

  for (std::size_t p = 0; p < per_point.size(); ++p) {
    SweepPoint point;
    point.value = grid[p];
    const auto &trials = per_point[p];

    double jbpda_mean = std::numeric_limits<double>::quiet_NaN();
    std::vector<SchemeStats> stats;
    for (Scheme scheme : config.schemes) {
      SchemeStats s;
      s.scheme = scheme;
      s.trials = trials.size();
      double sum = 0.0;
      for (const auto &trial : trials)
        sum += trial.sum_rate(scheme);
      s.mean_sum_rate = trials.empty() ? 0.0 : sum / static_cast<double>(trials.size());
      if (trials.size() > 1) {
        double ss = 0.0;
        for (const auto &trial : trials) {
          const double d = trial.sum_rate(scheme) - s.mean_sum_rate;
          ss += d * d;
        }
        const double variance = ss / static_cast<double>(trials.size() - 1);
        s.stderr_ = std::sqrt(variance / static_cast<double>(trials.size()));
      }
      if (scheme == Scheme::kJbpda)
        jbpda_mean = s.mean_sum_rate;
      stats.push_back(s);
    }
    for (auto &s : stats) {
      if (std::isnan(jbpda_mean))
        s.gap_vs_jbpda_percent = std::numeric_limits<double>::quiet_NaN();
      else if (s.scheme == Scheme::kJbpda)
        s.gap_vs_jbpda_percent = 0.0;
      else if (s.mean_sum_rate > 0.0)
        s.gap_vs_jbpda_percent =
            (jbpda_mean - s.mean_sum_rate) / s.mean_sum_rate * 100.0;
      else
        s.gap_vs_jbpda_percent = std::numeric_limits<double>::quiet_NaN();
    }
    point.stats = std::move(stats);
    report.points.push_back(std::move(point));
  }
  return report;
}

SweepResult monte_carlo_sweep(const SimConfig &config,
                              const RunOptions &options) {
  validate_sim_config(config);
  std::vector<double> grid = config.grid;
  if (config.sweep == SweepAxis::kNone)
    grid = {0.0};
  if (grid.empty())
    throw ValidationError("grid: sweep requested with an empty grid");

  SweepResult result;
  result.trials.reserve(grid.size());
  for (double value : grid) {
    const SimConfig point = bind_sweep_point(config, config.sweep, value);
    result.trials.push_back(run_trials(point, options));
  }
  result.report = aggregate_reports(config, grid, result.trials);
  return result;
}

} // namespace dtris
