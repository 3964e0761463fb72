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

#include "dtris/association.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

namespace dtris {

namespace {

void check_finite(const RateMatrix &rates) {
  if (!rates.allFinite())
    throw InvalidInputError("rate matrix has non-finite entries");
}

// Sorts 0..n-1 by key descending, lower index first on ties.
std::vector<int> sorted_descending(Index n,
                                   const std::function<double(int)> &key) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb)
      return ka > kb;
    return a < b;
  });
  return order;
}

} // namespace

PreferenceLists build_preferences(const RateMatrix &rates) {
  check_finite(rates);
  const Index ris_count = rates.rows();
  const Index devices = rates.cols();

  PreferenceLists prefs;
  prefs.device_prefs.reserve(static_cast<std::size_t>(devices));
  for (Index k = 0; k < devices; ++k)
    prefs.device_prefs.push_back(
        sorted_descending(ris_count, [&](int l) { return rates(l, k); }));
  prefs.ris_prefs.reserve(static_cast<std::size_t>(ris_count));
  for (Index l = 0; l < ris_count; ++l)
    prefs.ris_prefs.push_back(
        sorted_descending(devices, [&](int k) { return rates(l, k); }));
  return prefs;
}

Association Association::empty(int devices, int ris_count) {
  Association a;
  a.device_to_ris.assign(static_cast<std::size_t>(devices), -1);
  a.ris_to_device.assign(static_cast<std::size_t>(ris_count), -1);
  return a;
}

Association Association::from_device_map(const std::vector<int> &device_to_ris,
                                         int ris_count) {
  Association a;
  a.device_to_ris = device_to_ris;
  a.ris_to_device.assign(static_cast<std::size_t>(ris_count), -1);
  for (std::size_t k = 0; k < device_to_ris.size(); ++k) {
    const int l = device_to_ris[k];
    if (l < 0)
      continue;
    if (l >= ris_count)
      throw InvalidAssociationError("RIS index " + std::to_string(l) +
                                    " out of range");
    if (a.ris_to_device[static_cast<std::size_t>(l)] >= 0)
      throw InvalidAssociationError("RIS " + std::to_string(l) +
                                    " assigned to more than one device");
    a.ris_to_device[static_cast<std::size_t>(l)] = static_cast<int>(k);
  }
  return a;
}

Index Association::matched_count() const {
  Index n = 0;
  for (int l : device_to_ris)
    if (l >= 0)
      ++n;
  return n;
}

std::vector<int> Association::matched_devices() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < device_to_ris.size(); ++k)
    if (device_to_ris[k] >= 0)
      out.push_back(static_cast<int>(k));
  return out;
}

std::vector<int> Association::unmatched_devices() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < device_to_ris.size(); ++k)
    if (device_to_ris[k] < 0)
      out.push_back(static_cast<int>(k));
  return out;
}

RMatrix Association::matrix() const {
  RMatrix m = RMatrix::Zero(static_cast<Index>(device_to_ris.size()),
                            static_cast<Index>(ris_to_device.size()));
  for (std::size_t k = 0; k < device_to_ris.size(); ++k)
    if (device_to_ris[k] >= 0)
      m(static_cast<Index>(k), device_to_ris[k]) = 1.0;
  return m;
}

void validate_association(const Association &assoc, const RateMatrix &rates) {
  const auto devices = static_cast<std::size_t>(rates.cols());
  const auto ris_count = static_cast<std::size_t>(rates.rows());
  if (assoc.device_to_ris.size() != devices ||
      assoc.ris_to_device.size() != ris_count)
    throw InvalidAssociationError("association size does not match rate matrix");
  for (std::size_t k = 0; k < devices; ++k) {
    const int l = assoc.device_to_ris[k];
    if (l < -1 || l >= static_cast<int>(ris_count))
      throw InvalidAssociationError("device map entry out of range");
    if (l >= 0 &&
        assoc.ris_to_device[static_cast<std::size_t>(l)] != static_cast<int>(k))
      throw InvalidAssociationError("device and RIS maps disagree");
  }
  for (std::size_t l = 0; l < ris_count; ++l) {
    const int k = assoc.ris_to_device[l];
    if (k < -1 || k >= static_cast<int>(devices))
      throw InvalidAssociationError("RIS map entry out of range");
    if (k >= 0 &&
        assoc.device_to_ris[static_cast<std::size_t>(k)] != static_cast<int>(l))
      throw InvalidAssociationError("device and RIS maps disagree");
  }
}

MatchResult deferred_acceptance(const PreferenceLists &prefs,
                                const RateMatrix &rates) {
  check_finite(rates);
  const auto ris_count = static_cast<int>(rates.rows());
  const auto devices = static_cast<int>(rates.cols());
  if (prefs.device_prefs.size() != static_cast<std::size_t>(devices) ||
      prefs.ris_prefs.size() != static_cast<std::size_t>(ris_count))
    throw InvalidInputError("preference lists do not match rate matrix shape");

  Association a = Association::empty(devices, ris_count);
  std::vector<std::size_t> next(static_cast<std::size_t>(devices), 0);
  std::deque<int> free_devices;
  for (int k = 0; k < devices; ++k)
    free_devices.push_back(k);

  long proposals = 0;
  while (!free_devices.empty()) {
    const int k = free_devices.front();
    free_devices.pop_front();
    auto &cursor = next[static_cast<std::size_t>(k)];
    const auto &list = prefs.device_prefs[static_cast<std::size_t>(k)];
    if (cursor >= list.size())
      continue; // rejected everywhere; stays unmatched
    const int l = list[cursor++];
    ++proposals;

    const int incumbent = a.ris_to_device[static_cast<std::size_t>(l)];
    if (incumbent < 0) {
      a.ris_to_device[static_cast<std::size_t>(l)] = k;
      a.device_to_ris[static_cast<std::size_t>(k)] = l;
    } else if (rates(l, k) > rates(l, incumbent)) {
      a.device_to_ris[static_cast<std::size_t>(incumbent)] = -1;
      free_devices.push_back(incumbent);
      a.ris_to_device[static_cast<std::size_t>(l)] = k;
      a.device_to_ris[static_cast<std::size_t>(k)] = l;
    } else {
      free_devices.push_back(k);
    }
  }
  return {std::move(a), proposals};
}

StabilityReport is_stable(const Association &assoc, const RateMatrix &rates) {
  check_finite(rates);
  validate_association(assoc, rates);
  const auto ris_count = static_cast<int>(rates.rows());
  const auto devices = static_cast<int>(rates.cols());

  for (int k = 0; k < devices; ++k) {
    const int current = assoc.device_to_ris[static_cast<std::size_t>(k)];
    for (int l = 0; l < ris_count; ++l) {
      const bool device_prefers =
          current < 0 || rates(l, k) > rates(current, k);
      if (!device_prefers)
        continue;
      const int incumbent = assoc.ris_to_device[static_cast<std::size_t>(l)];
      const bool ris_prefers =
          incumbent < 0 || rates(l, k) > rates(l, incumbent);
      if (ris_prefers && current != l)
        return {false, {k, l}};
    }
  }
  return {true, {-1, -1}};
}

namespace {

// Depth-first enumeration of injections from the smaller side into the
// larger one; the evaluator decides which candidate wins.
void enumerate_matchings(int small, int large, std::vector<int> &pick,
                         std::vector<bool> &used,
                         const std::function<void(const std::vector<int> &)> &emit) {
  const int depth = static_cast<int>(pick.size());
  if (depth == small) {
    emit(pick);
    return;
  }
  for (int j = 0; j < large; ++j) {
    if (used[static_cast<std::size_t>(j)])
      continue;
    used[static_cast<std::size_t>(j)] = true;
    pick.push_back(j);
    enumerate_matchings(small, large, pick, used, emit);
    pick.pop_back();
    used[static_cast<std::size_t>(j)] = false;
  }
}

} // namespace

Association
exhaustive_search(const std::function<double(const Association &)> &evaluate,
                  int devices, int ris_count) {
  if (devices < 1 || ris_count < 1)
    throw InvalidInputError("exhaustive_search: empty problem");
  if (std::min(devices, ris_count) > kExhaustiveLimit)
    throw TooLargeError("exhaustive_search: min(K, L) = " +
                        std::to_string(std::min(devices, ris_count)) +
                        " exceeds the factorial guard of " +
                        std::to_string(kExhaustiveLimit));

  Association best = Association::empty(devices, ris_count);
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<int> pick;
  std::vector<bool> used;

  const bool devices_small = devices <= ris_count;
  const int small = devices_small ? devices : ris_count;
  const int large = devices_small ? ris_count : devices;
  used.assign(static_cast<std::size_t>(large), false);

  enumerate_matchings(small, large, pick, used,
                      [&](const std::vector<int> &assignment) {
                        std::vector<int> d2r(static_cast<std::size_t>(devices), -1);
                        if (devices_small) {
                          for (int k = 0; k < small; ++k)
                            d2r[static_cast<std::size_t>(k)] = assignment[static_cast<std::size_t>(k)];
                        } else {
                          for (int l = 0; l < small; ++l)
                            d2r[static_cast<std::size_t>(assignment[static_cast<std::size_t>(l)])] = l;
                        }
                        Association a = Association::from_device_map(d2r, ris_count);
                        const double value = evaluate(a);
                        if (value > best_value) {
                          best_value = value;
                          best = std::move(a);
                        }
                      });
  return best;
}

Association greedy_association(const RateMatrix &rates, Rng &rng) {
  check_finite(rates);
  const auto ris_count = static_cast<int>(rates.rows());
  const auto devices = static_cast<int>(rates.cols());

  const PreferenceLists prefs = build_preferences(rates);
  Association a = Association::empty(devices, ris_count);
  std::vector<std::size_t> next(static_cast<std::size_t>(devices), 0);

  while (true) {
    // Every still-unmatched device bids for its best unoccupied RIS.
    std::vector<std::vector<int>> bids(static_cast<std::size_t>(ris_count));
    bool any_bid = false;
    for (int k = 0; k < devices; ++k) {
      if (a.device_to_ris[static_cast<std::size_t>(k)] >= 0)
        continue;
      auto &cursor = next[static_cast<std::size_t>(k)];
      const auto &list = prefs.device_prefs[static_cast<std::size_t>(k)];
      while (cursor < list.size() &&
             a.ris_to_device[static_cast<std::size_t>(list[cursor])] >= 0)
        ++cursor;
      if (cursor >= list.size())
        continue;
      bids[static_cast<std::size_t>(list[cursor])].push_back(k);
      any_bid = true;
    }
    if (!any_bid)
      break;
    for (int l = 0; l < ris_count; ++l) {
      auto &suitors = bids[static_cast<std::size_t>(l)];
      if (suitors.empty())
        continue;
      const int winner =
          suitors.size() == 1
              ? suitors.front()
              : suitors[rng.index(suitors.size())];
      a.ris_to_device[static_cast<std::size_t>(l)] = winner;
      a.device_to_ris[static_cast<std::size_t>(winner)] = l;
    }
  }
  return a;
}

Association random_association(int devices, int ris_count, Rng &rng) {
  if (devices < 1 || ris_count < 1)
    throw InvalidInputError("random_association: empty problem");
  Association a = Association::empty(devices, ris_count);
  if (devices <= ris_count) {
    std::vector<int> perm(static_cast<std::size_t>(ris_count));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int k = 0; k < devices; ++k) {
      a.device_to_ris[static_cast<std::size_t>(k)] = perm[static_cast<std::size_t>(k)];
      a.ris_to_device[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = k;
    }
  } else {
    std::vector<int> perm(static_cast<std::size_t>(devices));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int l = 0; l < ris_count; ++l) {
      a.ris_to_device[static_cast<std::size_t>(l)] = perm[static_cast<std::size_t>(l)];
      a.device_to_ris[static_cast<std::size_t>(perm[static_cast<std::size_t>(l)])] = l;
    }
  }
  return a;
}

} // namespace dtris
