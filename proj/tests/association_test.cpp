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

#include "dtris/association.hpp"
#include "oracles.hpp"

using namespace dtris;

namespace {

// Rows index surfaces, columns index devices.
RateMatrix example_rates() {
  RateMatrix rates(2, 2);
  rates << 3.0, 1.0, //
      2.0, 4.0;
  return rates;
}

RateMatrix random_rates(Index ris_count, Index devices, Rng &rng) {
  RateMatrix rates(ris_count, devices);
  for (Index l = 0; l < ris_count; ++l)
    for (Index k = 0; k < devices; ++k)
      rates(l, k) = rng.uniform(0.0, 10.0);
  return rates;
}

double matching_sum(const Association &assoc, const RateMatrix &rates) {
  double total = 0.0;
  for (std::size_t k = 0; k < assoc.device_to_ris.size(); ++k)
    if (assoc.device_to_ris[k] >= 0)
      total += rates(assoc.device_to_ris[k], static_cast<Index>(k));
  return total;
}

} // namespace

TEST_CASE("preferences: single pair and fixed example") {
  const RateMatrix one = RateMatrix::Constant(1, 1, 5.0);
  const PreferenceLists single = build_preferences(one);
  CHECK(single.device_prefs == std::vector<std::vector<int>>{{0}});
  CHECK(single.ris_prefs == std::vector<std::vector<int>>{{0}});

  const PreferenceLists prefs = build_preferences(example_rates());
  // device 0: rates (3, 2) -> prefers RIS 0; device 1: (1, 4) -> RIS 1
  CHECK(prefs.device_prefs[0] == std::vector<int>{0, 1});
  CHECK(prefs.device_prefs[1] == std::vector<int>{1, 0});
  // RIS 0: rates (3, 1) -> device 0 first; RIS 1: (2, 4) -> device 1 first
  CHECK(prefs.ris_prefs[0] == std::vector<int>{0, 1});
  CHECK(prefs.ris_prefs[1] == std::vector<int>{1, 0});
}

TEST_CASE("preferences: ties break toward the lower index") {
  const RateMatrix equal = RateMatrix::Constant(3, 3, 1.0);
  const PreferenceLists prefs = build_preferences(equal);
  for (const auto &list : prefs.device_prefs)
    CHECK(list == std::vector<int>{0, 1, 2});
  for (const auto &list : prefs.ris_prefs)
    CHECK(list == std::vector<int>{0, 1, 2});
}

TEST_CASE("deferred acceptance: single pair") {
  const RateMatrix one = RateMatrix::Constant(1, 1, 5.0);
  const MatchResult result = deferred_acceptance(build_preferences(one), one);
  CHECK(result.assoc.device_to_ris == std::vector<int>{0});
  CHECK(result.proposal_count == 1);
}

TEST_CASE("deferred acceptance: fixed example takes the rate-7 matching") {
  const RateMatrix rates = example_rates();
  const MatchResult result =
      deferred_acceptance(build_preferences(rates), rates);
  CHECK(result.assoc.device_to_ris == std::vector<int>{0, 1});
  CHECK(matching_sum(result.assoc, rates) == doctest::Approx(7.0));
  CHECK(result.proposal_count == 2);
}

TEST_CASE("deferred acceptance: equals the enumerated device-optimal stable "
          "matching") {
  Rng rng(501);
  for (int trial = 0; trial < 200; ++trial) {
    const RateMatrix rates = random_rates(5, 5, rng);
    const MatchResult result =
        deferred_acceptance(build_preferences(rates), rates);

    CHECK(result.proposal_count <= 25);
    CHECK(is_stable(result.assoc, rates).stable);

    const auto optimal = oracles::device_optimal_stable(rates);
    REQUIRE(optimal.has_value());
    CHECK(result.assoc.device_to_ris == *optimal);
  }
}

TEST_CASE("deferred acceptance: unbalanced sides match min(K, L) pairs") {
  Rng rng(502);
  SUBCASE("more devices than surfaces") {
    const RateMatrix rates = random_rates(3, 6, rng);
    const MatchResult result =
        deferred_acceptance(build_preferences(rates), rates);
    CHECK(result.assoc.matched_count() == 3);
    CHECK(result.proposal_count <= 18);
    CHECK(is_stable(result.assoc, rates).stable);
  }
  SUBCASE("more surfaces than devices") {
    const RateMatrix rates = random_rates(6, 3, rng);
    const MatchResult result =
        deferred_acceptance(build_preferences(rates), rates);
    CHECK(result.assoc.matched_count() == 3);
    CHECK(is_stable(result.assoc, rates).stable);
  }
}

TEST_CASE("deferred acceptance: deterministic on identical inputs") {
  Rng rng(503);
  const RateMatrix rates = random_rates(4, 4, rng);
  const MatchResult a = deferred_acceptance(build_preferences(rates), rates);
  const MatchResult b = deferred_acceptance(build_preferences(rates), rates);
  CHECK(a.assoc == b.assoc);
  CHECK(a.proposal_count == b.proposal_count);
}

TEST_CASE("stability checker") {
  const RateMatrix rates = example_rates();

  SUBCASE("matched single pair is stable") {
    const RateMatrix one = RateMatrix::Constant(1, 1, 5.0);
    const Association a = Association::from_device_map({0}, 1);
    CHECK(is_stable(a, one).stable);
  }

  SUBCASE("swapping the optimal pairs creates a blocking pair") {
    const Association swapped = Association::from_device_map({1, 0}, 2);
    const StabilityReport report = is_stable(swapped, rates);
    CHECK_FALSE(report.stable);
    CHECK(report.blocking == std::pair<int, int>{0, 0});
  }

  SUBCASE("unmatched agents count as worst partners") {
    // device 1 and RIS 1 both unmatched and mutually acceptable -> blocking
    const Association partial = Association::from_device_map({0, -1}, 2);
    CHECK_FALSE(is_stable(partial, rates).stable);
  }

  SUBCASE("malformed associations are rejected") {
    Association bad = Association::from_device_map({0, 1}, 2);
    bad.ris_to_device[0] = 1; // breaks cross-consistency
    CHECK_THROWS_AS(is_stable(bad, rates), InvalidAssociationError);
    CHECK_THROWS_AS(is_stable(Association::from_device_map({0}, 2), rates),
                    InvalidAssociationError);
  }
}

TEST_CASE("exhaustive search") {
  SUBCASE("single candidate") {
    const Association a = exhaustive_search(
        [](const Association &) { return 1.0; }, 1, 1);
    CHECK(a.device_to_ris == std::vector<int>{0});
  }

  SUBCASE("two devices: picks the better of both matchings") {
    const RateMatrix rates = example_rates();
    const auto value = [&](const Association &a) {
      return matching_sum(a, rates);
    };
    const Association best = exhaustive_search(value, 2, 2);
    CHECK(best.device_to_ris == std::vector<int>{0, 1});
    // manual evaluation: identity matching 3+4=7, swapped 1+2=3
    CHECK(value(best) == doctest::Approx(7.0));
  }

  SUBCASE("dominates deferred acceptance on additive utilities") {
    Rng rng(504);
    for (int trial = 0; trial < 20; ++trial) {
      const RateMatrix rates = random_rates(3, 3, rng);
      const auto value = [&](const Association &a) {
        return matching_sum(a, rates);
      };
      const Association best = exhaustive_search(value, 3, 3);
      const MatchResult da =
          deferred_acceptance(build_preferences(rates), rates);
      CHECK(value(best) >= matching_sum(da.assoc, rates) - 1e-12);
    }
  }

  SUBCASE("unbalanced enumeration covers min(K, L) pairs") {
    Rng rng(505);
    const RateMatrix rates = random_rates(4, 2, rng);
    const Association best = exhaustive_search(
        [&](const Association &a) { return matching_sum(a, rates); }, 2, 4);
    CHECK(best.matched_count() == 2);
  }

  SUBCASE("factorial guard") {
    CHECK_THROWS_AS(exhaustive_search(
                        [](const Association &) { return 0.0; }, 12, 12),
                    TooLargeError);
    CHECK_THROWS_AS(exhaustive_search(
                        [](const Association &) { return 0.0; }, 0, 3),
                    InvalidInputError);
  }
}

TEST_CASE("greedy association") {
  SUBCASE("no contention: every device gets its favourite") {
    const RateMatrix rates = example_rates();
    Rng rng(506);
    const Association a = greedy_association(rates, rng);
    CHECK(a.device_to_ris == std::vector<int>{0, 1});
  }

  SUBCASE("full contention cascades down the lists") {
    // every device prefers RIS 0, then RIS 1, then RIS 2
    RateMatrix rates(3, 3);
    rates << 9.0, 9.0, 9.0, //
        5.0, 5.0, 5.0,      //
        1.0, 1.0, 1.0;
    Rng rng(507);
    const Association a = greedy_association(rates, rng);
    CHECK(a.matched_count() == 3);
    // all three surfaces end occupied despite the shared first choice
    for (int l = 0; l < 3; ++l)
      CHECK(a.ris_to_device[static_cast<std::size_t>(l)] >= 0);
  }

  SUBCASE("deterministic for a fixed stream") {
    Rng rng_a(508), rng_b(508);
    RateMatrix rates(3, 3);
    rates << 9.0, 9.0, 2.0, //
        5.0, 5.0, 5.0,      //
        1.0, 1.0, 1.0;
    CHECK(greedy_association(rates, rng_a) ==
          greedy_association(rates, rng_b));
  }
}

TEST_CASE("random association") {
  SUBCASE("single pair") {
    Rng rng(509);
    const Association a = random_association(1, 1, rng);
    CHECK(a.device_to_ris == std::vector<int>{0});
  }

  SUBCASE("uniform over the 6 perfect matchings of a 3x3 problem") {
    Rng rng(510);
    const int draws = 100000;
    std::vector<int> counts(6, 0);
    for (int i = 0; i < draws; ++i) {
      const Association a = random_association(3, 3, rng);
      const int code = a.device_to_ris[0] * 2 +
                       (a.device_to_ris[1] > a.device_to_ris[2] ? 1 : 0);
      ++counts[static_cast<std::size_t>(code)];
    }
    for (int c : counts)
      CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 6.0) <= 0.01);
  }

  SUBCASE("size rule for unbalanced sides") {
    Rng rng(511);
    for (int i = 0; i < 50; ++i) {
      const Association a = random_association(2, 5, rng);
      CHECK(a.matched_count() == 2);
      CHECK(a.device_to_ris[0] != a.device_to_ris[1]);
      const Association b = random_association(5, 2, rng);
      CHECK(b.matched_count() == 2);
    }
  }
}

TEST_CASE("association container") {
  const Association a = Association::from_device_map({2, -1, 0}, 3);
  CHECK(a.matched_count() == 2);
  CHECK(a.matched_devices() == std::vector<int>{0, 2});
  CHECK(a.unmatched_devices() == std::vector<int>{1});
  const RMatrix m = a.matrix();
  CHECK(m(0, 2) == 1.0);
  CHECK(m(2, 0) == 1.0);
  CHECK(m.sum() == 2.0);

  CHECK_THROWS_AS(Association::from_device_map({0, 0}, 2),
                  InvalidAssociationError);
  CHECK_THROWS_AS(Association::from_device_map({5}, 2),
                  InvalidAssociationError);
}
