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

#include <doctest.h>

#include <cmath>

#include "dtris/power_allocation.hpp"
#include "dtris/rng.hpp"
#include "oracles.hpp"

using namespace dtris;

TEST_CASE("water-filling: symmetric gains split the budget evenly") {
  const RVector gains = RVector::Constant(4, 2.5);
  const PowerAllocation alloc = waterfill(gains, 0.5, 1.0);
  for (Index k = 0; k < 4; ++k)
    CHECK(alloc.powers(k) == doctest::Approx(0.25).epsilon(1e-12));
  // closed-form water level for the all-active symmetric case
  CHECK(alloc.water_level ==
        doctest::Approx(1.0 / (0.25 + 0.5 / 2.5)).epsilon(1e-10));
}

TEST_CASE("water-filling: a single device takes the whole budget") {
  const PowerAllocation alloc =
      waterfill(RVector::Constant(1, 1e-4), 2.0, 7.0);
  CHECK(alloc.powers(0) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("water-filling: two-channel closed form and grid oracle") {
  RVector gains(2);
  gains << 4.0, 1.0;
  const PowerAllocation alloc = waterfill(gains, 1.0, 1.0);
  // stationarity: 1/mu - noise/gain with mu = 8/9
  CHECK(alloc.powers(0) == doctest::Approx(0.875).epsilon(1e-9));
  CHECK(alloc.powers(1) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(alloc.water_level == doctest::Approx(8.0 / 9.0).epsilon(1e-9));

  const double achieved = oracles::sum_rate(gains, alloc.powers, 1.0);
  const double grid = oracles::grid_best_two(gains, 1.0, 1.0, 10000);
  CHECK(achieved >= grid - 1e-12);
  CHECK(std::abs(achieved - grid) <= 1e-4);
}

TEST_CASE("water-filling: weak channels are shut off") {
  RVector gains(3);
  gains << 10.0, 1e-6, 5.0;
  const PowerAllocation alloc = waterfill(gains, 1.0, 0.5);
  CHECK(alloc.powers(1) == 0.0);
  CHECK(alloc.powers.sum() == doctest::Approx(0.5).epsilon(1e-11));
  // shut-off test: gain/noise below the water level
  CHECK(gains(1) / 1.0 <= alloc.water_level);
}

TEST_CASE("water level: analytic symmetric value and budget residual") {
  SUBCASE("symmetric closed form") {
    const RVector gains = RVector::Constant(5, 3.0);
    const double mu = find_water_level(gains, 0.2, 2.0);
    CHECK(mu == doctest::Approx(1.0 / (0.4 + 0.2 / 3.0)).epsilon(1e-10));
  }

  SUBCASE("large budgets activate every device and drive mu to zero") {
    RVector gains(3);
    gains << 1.0, 0.5, 0.25;
    double previous_mu = 1e9;
    for (double budget : {1.0, 10.0, 1e3, 1e6}) {
      const double mu = find_water_level(gains, 1.0, budget);
      CHECK(mu < previous_mu);
      previous_mu = mu;
      const PowerAllocation alloc = waterfill(gains, 1.0, budget);
      if (budget >= 10.0)
        for (Index k = 0; k < 3; ++k)
          CHECK(alloc.powers(k) > 0.0);
    }
    // depth tends to budget/K, so mu ~ K/budget -> 0+
    CHECK(previous_mu < 1e-5);
  }

  SUBCASE("random gains meet the budget to relative 1e-12") {
    Rng rng(401);
    for (int trial = 0; trial < 50; ++trial) {
      RVector gains(5);
      for (Index k = 0; k < 5; ++k)
        gains(k) = std::pow(10.0, rng.uniform(-3.0, 3.0));
      const double budget = rng.uniform(0.1, 10.0);
      const PowerAllocation alloc = waterfill(gains, 0.7, budget);
      CHECK(std::abs(alloc.powers.sum() - budget) <= 1e-12 * budget);
    }
  }
}

TEST_CASE("optimality-condition residual") {
  RVector gains(3);
  gains << 2.0, 0.7, 0.1;
  const PowerAllocation alloc = waterfill(gains, 0.3, 1.5);

  SUBCASE("water-filling output satisfies the conditions") {
    CHECK(kkt_residual(alloc, gains, 0.3) <= 1e-9);
  }

  SUBCASE("analytic symmetric solution is exact") {
    const RVector eq = RVector::Constant(4, 1.0);
    PowerAllocation manual;
    manual.powers = RVector::Constant(4, 0.5);
    manual.budget = 2.0;
    manual.water_level = 1.0 / (0.5 + 0.25 / 1.0); // noise 0.25
    CHECK(kkt_residual(manual, eq, 0.25) <= 1e-12);
  }

  SUBCASE("perturbed allocation violates stationarity") {
    PowerAllocation bent = alloc;
    bent.powers(0) *= 1.1;
    bent.powers *= alloc.powers.sum() / bent.powers.sum(); // renormalize
    CHECK(kkt_residual(bent, gains, 0.3) > 1e-6);
  }
}

TEST_CASE("water-filling: dominates random feasible allocations") {
  Rng rng(402);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(5)); // 2..6
    RVector gains(n);
    for (Index k = 0; k < n; ++k)
      gains(k) = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const double noise = 0.4, budget = 1.0;
    const PowerAllocation alloc = waterfill(gains, noise, budget);
    const double achieved = oracles::sum_rate(gains, alloc.powers, noise);
    const double sampled =
        oracles::best_random_allocation(gains, noise, budget, 10000, rng);
    CHECK(achieved >= sampled - 1e-12);
  }
}

TEST_CASE("water-filling: stronger channels never get less power") {
  Rng rng(403);
  for (int trial = 0; trial < 50; ++trial) {
    RVector gains(6);
    for (Index k = 0; k < 6; ++k)
      gains(k) = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const PowerAllocation alloc = waterfill(gains, 0.5, 2.0);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j)
        if (gains(i) >= gains(j))
          CHECK(alloc.powers(i) >= alloc.powers(j) - 1e-12);
  }
}

TEST_CASE("water-filling: monotone in the budget") {
  RVector gains(4);
  gains << 3.0, 1.0, 0.4, 0.05;
  const double noise = 0.25;
  double previous_rate = -1.0;
  RVector previous_powers = RVector::Zero(4);
  for (double budget : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    const PowerAllocation alloc = waterfill(gains, noise, budget);
    const double rate = oracles::sum_rate(gains, alloc.powers, noise);
    CHECK(rate >= previous_rate);
    for (Index k = 0; k < 4; ++k)
      CHECK(alloc.powers(k) >= previous_powers(k) - 1e-12);
    previous_rate = rate;
    previous_powers = alloc.powers;
  }
}

TEST_CASE("water-filling: input validation") {
  CHECK_THROWS_AS(waterfill(RVector(), 1.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(waterfill(RVector::Ones(2), 0.0, 1.0), InvalidNoiseError);
  CHECK_THROWS_AS(waterfill(RVector::Ones(2), 1.0, 0.0), InvalidInputError);
  RVector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(waterfill(bad, 1.0, 1.0), InvalidInputError);
}
