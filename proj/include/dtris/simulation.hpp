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
// Campaign orchestration: the alternating joint beamforming / power /
// association optimizer (jbpda), the exhaustive / greedy / random baseline
// schemes, seeded Monte Carlo trials, and sweep aggregation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtris/association.hpp"
#include "dtris/beamforming.hpp"
#include "dtris/channel.hpp"
#include "dtris/geometry.hpp"
#include "dtris/power_allocation.hpp"
#include "dtris/types.hpp"

namespace dtris {

enum class Scheme { kJbpda, kEs, kGs, kRs };

// Canonical lowercase names used in configs and CSV output.
const char *scheme_name(Scheme scheme);
std::optional<Scheme> scheme_from_name(const std::string &name);

enum class SweepAxis { kNone, kPower, kDevices, kAntennas };

const char *sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_name(const std::string &name);

// One experiment description. Counts and carrier defaults follow the
// reference operating point: 15 GHz carrier, 256 AP antennas, 23 dBm
// budget, -174 dBm/Hz noise density, 100x100 reflecting elements, 400 MHz
// bandwidth, 10 dB noise figure, half-wavelength element pitch.
struct SimConfig {
  Index devices = 7;  // K
  Index ris = 0;      // L; 0 tracks the device count
  Index antennas = 256;
  Index elements_y = 100;
  Index elements_z = 100;
  double frequency_ghz = 15.0;
  double bandwidth_mhz = 400.0;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 10.0;
  double power_budget_dbm = 23.0;
  double element_side_m = 0.0; // 0 selects half-wavelength pitch
  std::uint64_t trials = 1000;
  std::uint64_t base_seed = 1;
  std::vector<Scheme> schemes = {Scheme::kJbpda, Scheme::kEs, Scheme::kGs,
                                 Scheme::kRs};
  int max_iterations = 100;
  double rate_tolerance = 1e-4;
  SweepAxis sweep = SweepAxis::kNone;
  std::vector<double> grid;
  GeometrySampler sampler;

  Index ris_count() const { return ris > 0 ? ris : devices; }
  double frequency_hz() const { return frequency_ghz * 1e9; }
  double bandwidth_hz() const { return bandwidth_mhz * 1e6; }
  // Single dBm -> watts conversion site for the AP budget.
  double budget_watts() const { return dbm_to_watts(power_budget_dbm); }
  CarrierConfig carrier() const;
  bool has_scheme(Scheme scheme) const;

  bool operator==(const SimConfig &) const = default;
};

// Throws ValidationError naming the offending field.
void validate_sim_config(const SimConfig &config);

struct SolveOptions {
  int max_iterations = 100;
  double rate_tolerance = 1e-4; // relative sum-rate change declaring convergence
  double rank_rtol = kRankRtol;
};

// Full fixed-matching pipeline: stack the co-phased cascades of the matched
// pairs, zero-force, water-fill, evaluate rates. Unmatched devices carry
// zero rate; sum_rate runs over matched devices only. Every scheme is
// scored through this one function so that cross-scheme comparisons are
// exact. Throws SingularChannelError for rank-deficient matchings.
struct PipelineResult {
  RVector gains;       // per matched device, ascending device order
  PowerAllocation power;
  RVector device_rates; // full device vector, zeros where unmatched
  double sum_rate = 0.0;
};

PipelineResult evaluate_matching(const CascadeModel &model,
                                 const Association &assoc, double noise_watts,
                                 double budget_watts,
                                 double rank_rtol = kRankRtol);

// Matching-independent preference utilities: the interference-free rate of
// each pair under the given per-device power and its co-phased cascade.
RateMatrix proxy_rate_matrix(const CascadeModel &model,
                             const RVector &device_powers, double noise_watts);

struct JbpdaSolution {
  Association assoc;
  Beamformer beamformer;
  PowerAllocation power;   // over matched devices of `assoc`
  RVector device_rates;    // full device vector
  double sum_rate = 0.0;
  std::vector<double> trace; // achieved sum rate per iteration
  long proposal_count = 0;   // deferred-acceptance proposals, all iterations
  int iterations = 0;        // pipeline evaluations performed
};

// Alternating optimization. Each iteration matches on the current utility
// matrix (uniform budget split at first, water-filled powers afterwards),
// then re-derives phases, beams, powers and true rates. The matching step
// reshapes the utility landscape, so monotonicity is not guaranteed; the
// best iterate seen is returned, and the loop stops on a matching fixed
// point, on a relative sum-rate change below rate_tolerance, or after
// max_iterations.
JbpdaSolution jbpda_solve(const CascadeModel &model, double noise_watts,
                          double budget_watts, const SolveOptions &options = {});

struct SchemeOutcome {
  Scheme scheme = Scheme::kJbpda;
  double sum_rate = 0.0;
  RVector device_rates;
  long proposal_count = 0;   // jbpda
  int iterations = 0;        // jbpda
  std::vector<double> trace; // jbpda
};

struct TrialReport {
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;
  int redraws = 0;
  Index matched = 0;
  double wall_ms = 0.0;
  std::vector<SchemeOutcome> outcomes;

  const SchemeOutcome *find(Scheme scheme) const;
  double sum_rate(Scheme scheme) const; // throws InvalidInputError if absent
};

inline constexpr int kMaxRedraws = 10;

// Runs every configured scheme on one seeded scene. The scene seed is
// base_seed XOR trial_index; geometry and per-scheme randomness use
// disjoint substreams so results do not depend on which schemes run
// together. Rank-deficient scenes are re-drawn up to kMaxRedraws times
// before TrialFailedError.
TrialReport run_trial(const SimConfig &config, std::uint64_t trial_index);

struct RunOptions {
  int threads = 0; // <= 0 selects hardware concurrency
};

// All trials of one config; reports come back indexed by trial, so the
// result is independent of scheduling.
std::vector<TrialReport> run_trials(const SimConfig &config,
                                    const RunOptions &options = {});

struct SchemeStats {
  Scheme scheme = Scheme::kJbpda;
  double mean_sum_rate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  // (mean_jbpda - mean_scheme) / mean_scheme * 100; 0 for jbpda itself,
  // NaN when jbpda is not part of the run.
  double gap_vs_jbpda_percent = 0.0;
};

struct SweepPoint {
  double value = 0.0;
  std::vector<SchemeStats> stats;
};

struct AggregateReport {
  SweepAxis axis = SweepAxis::kNone;
  std::vector<SweepPoint> points;
};

// Returns the config with the sweep axis bound to `value` (dBm budget,
// device count, or antenna count) and re-validated.
SimConfig bind_sweep_point(const SimConfig &config, SweepAxis axis,
                           double value);

AggregateReport aggregate_reports(
    const SimConfig &config, const std::vector<double> &grid,
    const std::vector<std::vector<TrialReport>> &per_point);

struct SweepResult {
  AggregateReport report;
  std::vector<std::vector<TrialReport>> trials; // per grid point
};

// Runs the configured trial count at every grid point. An axis of kNone
// runs a single unmodified point.
SweepResult monte_carlo_sweep(const SimConfig &config,
                              const RunOptions &options = {});

} // namespace dtris
