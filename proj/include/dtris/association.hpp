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
// One-to-one device/RIS association: device-proposing deferred acceptance,
// a stability checker, and the exhaustive / greedy / random baselines.

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dtris/errors.hpp"
#include "dtris/rng.hpp"
#include "dtris/types.hpp"

namespace dtris {

// Preference utilities: entry (l, k) is the rate RIS l offers device k,
// in bits/s/Hz. Rows index surfaces, columns index devices.
using RateMatrix = RMatrix;

// Index orderings derived from a RateMatrix. Ties break toward the lower
// index so that identical inputs always produce identical matchings.
struct PreferenceLists {
  std::vector<std::vector<int>> device_prefs; // per device: RIS ids, best first
  std::vector<std::vector<int>> ris_prefs;    // per RIS: device ids, best first
};

PreferenceLists build_preferences(const RateMatrix &rates);

// Partial one-to-one matching between devices and surfaces. -1 = unmatched.
struct Association {
  std::vector<int> device_to_ris;
  std::vector<int> ris_to_device;

  static Association empty(int devices, int ris_count);
  // Builds the inverse map and checks one-to-one consistency.
  // Throws InvalidAssociationError.
  static Association from_device_map(const std::vector<int> &device_to_ris,
                                     int ris_count);

  Index matched_count() const;
  std::vector<int> matched_devices() const; // ascending device index
  std::vector<int> unmatched_devices() const;
  // Binary matrix view, entry (k, l) = 1 iff device k is served by RIS l.
  RMatrix matrix() const;

  bool operator==(const Association &) const = default;
};

// Throws InvalidAssociationError unless the maps are mutually consistent
// and sized for the given rate matrix.
void validate_association(const Association &assoc, const RateMatrix &rates);

struct MatchResult {
  Association assoc;
  long proposal_count = 0;
};

// Device-proposing deferred acceptance. Devices propose down their lists;
// a RIS keeps the suitor with the strictly higher rate. The result is a
// stable matching, device-optimal among stable matchings, and the number
// of proposals never exceeds devices x surfaces (each pair is proposed at
// most once).
MatchResult deferred_acceptance(const PreferenceLists &prefs,
                                const RateMatrix &rates);

struct StabilityReport {
  bool stable = true;
  std::pair<int, int> blocking{-1, -1}; // (device, ris) if unstable
};

// True iff no device/RIS pair strictly prefers each other to their current
// partners; being unmatched counts as the worst partner.
StabilityReport is_stable(const Association &assoc, const RateMatrix &rates);

inline constexpr int kExhaustiveLimit = 9; // factorial guard

// Enumerates every one-to-one matching of size min(devices, ris_count) and
// returns the one maximizing the supplied evaluator. The evaluator must be
// pure. Throws TooLargeError when min(devices, ris_count) > kExhaustiveLimit.
Association
exhaustive_search(const std::function<double(const Association &)> &evaluate,
                  int devices, int ris_count);

// Single-shot greedy: every device bids for its top remaining unoccupied
// RIS; a contested RIS keeps one bidder uniformly at random; losers retry
// down their lists until matched or exhausted.
Association greedy_association(const RateMatrix &rates, Rng &rng);

// Uniformly random one-to-one matching of size min(devices, ris_count).
Association random_association(int devices, int ris_count, Rng &rng);

} // namespace dtris
