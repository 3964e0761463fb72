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
// Water-filling power allocation over interference-free parallel channels:
// maximize sum_k log2(1 + gain_k * p_k / noise) subject to sum p_k <= budget,
// p_k >= 0. The KKT stationarity condition
//   gain_k / (noise + gain_k * p_k) = mu          (p_k > 0)
// gives the closed form p_k = [1/mu - noise/gain_k]^+ with the water level
// mu chosen so that the budget binds.

#pragma once

#include "dtris/errors.hpp"
#include "dtris/types.hpp"

namespace dtris {

struct PowerAllocation {
  RVector powers;           // watts, one per device
  double water_level = 0.0; // mu, 1/watts
  double budget = 0.0;      // watts
};

// Water level via bisection on mu over [1/(budget + sum noise/gain_k),
// max_k gain_k/noise]; the allocated total is strictly decreasing in mu
// where positive. Terminates when the budget residual is within 1e-12
// relative or after 200 halvings. Preconditions: all gains positive,
// noise > 0, budget > 0, at least one gain (InvalidInputError /
// InvalidNoiseError otherwise).
double find_water_level(const RVector &gains, double noise_watts,
                        double budget_watts);

PowerAllocation waterfill(const RVector &gains, double noise_watts,
                          double budget_watts);

// Maximum optimality-condition violation of an allocation: stationarity
// mismatch |gain/(noise + gain*p) - mu| over active devices, the shut-off
// test max(0, gain/noise - mu) over inactive ones, and the relative budget
// mismatch. Zero (to rounding) exactly at the optimum.
double kkt_residual(const PowerAllocation &alloc, const RVector &gains,
                    double noise_watts);

} // namespace dtris
