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

#include "dtris/power_allocation.hpp"

#include <algorithm>
#include <cmath>

namespace dtris {

namespace {

constexpr int kMaxBisections = 200;
constexpr double kBudgetRtol = 1e-12;

void check_inputs(const RVector &gains, double noise_watts,
                  double budget_watts) {
  if (gains.size() == 0)
    throw InvalidInputError("waterfill: empty gain vector");
  if (!(noise_watts > 0.0))
    throw InvalidNoiseError("waterfill: noise power must be positive");
  if (!(budget_watts > 0.0))
    throw InvalidInputError("waterfill: power budget must be positive");
  for (Index k = 0; k < gains.size(); ++k)
    if (!(gains(k) > 0.0) || !std::isfinite(gains(k)))
      throw InvalidInputError("waterfill: gains must be positive and finite");
}

// The per-device fill levels are c_k = noise/gain_k. Bisection runs on the
// water depth measured from the smallest fill level, e = 1/mu - min_k c_k,
// so that powers [e - (c_k - c_min)]^+ never subtract two large nearly
// equal numbers; starved devices (huge c_k) contribute an exact zero and
// the symmetric and single-device cases come out exact.
struct WaterSolve {
  double excess = 0.0; // e
  double c_min = 0.0;
  RVector offsets;     // c_k - c_min
};

double allocated_total(const WaterSolve &solve, double excess) {
  double total = 0.0;
  for (Index k = 0; k < solve.offsets.size(); ++k)
    total += std::max(excess - solve.offsets(k), 0.0);
  return total;
}

WaterSolve solve_water_depth(const RVector &gains, double noise_watts,
                             double budget_watts) {
  WaterSolve solve;
  const RVector fill_levels = noise_watts * gains.cwiseInverse();
  solve.c_min = fill_levels.minCoeff();
  solve.offsets = fill_levels.array() - solve.c_min;

  double lo = 0.0; // total 0
  double hi = budget_watts + solve.offsets.maxCoeff(); // total >= budget
  double excess = hi;

  for (int it = 0; it < kMaxBisections; ++it) {
    excess = 0.5 * (lo + hi);
    const double total = allocated_total(solve, excess);
    if (std::abs(total - budget_watts) <= kBudgetRtol * budget_watts)
      break;
    if (total > budget_watts)
      hi = excess;
    else
      lo = excess;
    if (std::nextafter(lo, hi) >= hi)
      break; // bracket exhausted at double precision
  }
  solve.excess = excess;
  return solve;
}

} // namespace

double find_water_level(const RVector &gains, double noise_watts,
                        double budget_watts) {
  check_inputs(gains, noise_watts, budget_watts);
  const WaterSolve solve = solve_water_depth(gains, noise_watts, budget_watts);
  return 1.0 / (solve.excess + solve.c_min);
}

PowerAllocation waterfill(const RVector &gains, double noise_watts,
                          double budget_watts) {
  check_inputs(gains, noise_watts, budget_watts);
  const WaterSolve solve = solve_water_depth(gains, noise_watts, budget_watts);
  PowerAllocation alloc;
  alloc.water_level = 1.0 / (solve.excess + solve.c_min);
  alloc.budget = budget_watts;
  alloc.powers.resize(gains.size());
  for (Index k = 0; k < gains.size(); ++k)
    alloc.powers(k) = std::max(solve.excess - solve.offsets(k), 0.0);
  return alloc;
}

double kkt_residual(const PowerAllocation &alloc, const RVector &gains,
                    double noise_watts) {
  check_inputs(gains, noise_watts, alloc.budget);
  if (alloc.powers.size() != gains.size())
    throw InvalidInputError("kkt_residual: allocation and gains disagree");

  const double mu = alloc.water_level;
  double residual = 0.0;
  bool any_active = false;
  for (Index k = 0; k < gains.size(); ++k) {
    const double p = alloc.powers(k);
    if (p > 0.0) {
      any_active = true;
      residual = std::max(
          residual, std::abs(gains(k) / (noise_watts + gains(k) * p) - mu));
    } else {
      residual = std::max(residual, std::max(gains(k) / noise_watts - mu, 0.0));
    }
  }
  const double total = alloc.powers.sum();
  const double budget_term =
      any_active ? std::abs(total - alloc.budget) / alloc.budget
                 : std::max(total - alloc.budget, 0.0) / alloc.budget;
  return std::max(residual, budget_term);
}

} // namespace dtris
