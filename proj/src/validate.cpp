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

#include "dtris/validate.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "dtris/association.hpp"
#include "dtris/beamforming.hpp"
#include "dtris/channel.hpp"
#include "dtris/config_io.hpp"
#include "dtris/geometry.hpp"
#include "dtris/numerics.hpp"
#include "dtris/power_allocation.hpp"
#include "dtris/rng.hpp"
#include "dtris/simulation.hpp"

namespace dtris {

namespace {

CMatrix random_complex(Index rows, Index cols, Rng &rng) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

SimConfig desk_config() {
  SimConfig config;
  config.devices = 4;
  config.antennas = 16;
  config.elements_y = 6;
  config.elements_z = 6;
  config.trials = 2;
  config.schemes = {Scheme::kJbpda, Scheme::kEs, Scheme::kGs, Scheme::kRs};
  return config;
}

struct Battery {
  std::vector<CheckResult> results;

  void check(const std::string &name, const std::function<std::string()> &body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body(); // empty detail = pass
      r.passed = r.detail.empty();
    } catch (const std::exception &e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
};

std::string check_distance_axioms() {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector3d a(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3),
                      rng.uniform(-1e3, 1e3));
    Eigen::Vector3d b(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3),
                      rng.uniform(-1e3, 1e3));
    Eigen::Vector3d c(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3),
                      rng.uniform(-1e3, 1e3));
    if (std::abs(distance(a, b) - distance(b, a)) > 1e-12)
      return "symmetry violated";
    if (distance(a, c) > distance(a, b) + distance(b, c) + 1e-9)
      return "triangle inequality violated";
  }
  return "";
}

std::string check_channel_magnitudes() {
  Rng rng(12);
  GeometrySampler sampler;
  NetworkGeometry g = sample_geometry(2, 2, 4, 3, 2, sampler, rng);
  CarrierConfig carrier;
  for (Index l = 0; l < g.ris_count(); ++l) {
    const double pl = path_loss_linear(
        carrier.frequency_hz,
        distance(g.ap_position, g.ris_sites[static_cast<std::size_t>(l)].position));
    const CMatrix h = gen_ap_ris_channel(g, carrier, l);
    for (Index m = 0; m < h.rows(); ++m)
      for (Index n = 0; n < h.cols(); ++n)
        if (std::abs(std::norm(h(m, n)) - pl) > 1e-12 * pl)
          return "AP-RIS magnitude mismatch";
  }
  return "";
}

std::string check_cophasing() {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const CMatrix h_ap = random_complex(8, 3, rng);
    const CVector h_dev = random_complex(8, 1, rng);
    const CVector theta = configure_ris_phases(h_ap, h_dev, 0);
    const CVector cascade = cascaded_channel(h_ap, theta, h_dev);
    double bound = 0.0;
    for (Index m = 0; m < 8; ++m)
      bound += std::abs(h_ap(m, 0)) * std::abs(h_dev(m));
    if (std::abs(std::abs(cascade(0)) - bound) > 1e-9 * bound)
      return "co-phased cascade below the coherent bound";
    const CVector unphased =
        cascaded_channel(h_ap, CVector::Ones(8), h_dev);
    if (std::abs(cascade(0)) + 1e-12 < std::abs(unphased(0)))
      return "phasing lost to identity configuration";
  }
  return "";
}

std::string check_cascade_model() {
  Rng rng(14);
  GeometrySampler sampler;
  NetworkGeometry g = sample_geometry(3, 3, 6, 3, 3, sampler, rng);
  CarrierConfig carrier;
  const CascadeModel model = CascadeModel::build(g, carrier);
  for (Index l = 0; l < g.ris_count(); ++l)
    for (Index k = 0; k < g.devices(); ++k) {
      const CMatrix h_ap = gen_ap_ris_channel(g, carrier, l);
      const CVector h_dev = gen_ris_device_channel(g, carrier, l, k);
      const CVector direct = cascaded_channel(
          h_ap, configure_ris_phases(h_ap, h_dev, 0), h_dev);
      const CVector fast = model.pair_cascade(l, k);
      if ((direct - fast).norm() > 1e-10 * direct.norm())
        return "factored cascade disagrees with the explicit route";
    }
  return "";
}

std::string check_pseudo_inverse() {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = 2 + static_cast<Index>(rng.index(5));
    const Index cols = rows + static_cast<Index>(rng.index(8));
    const CMatrix g = random_complex(rows, cols, rng);
    const CMatrix w = pseudo_inverse(g);
    const CMatrix identity = CMatrix::Identity(rows, rows);
    if ((g * w - identity).norm() > 1e-9 * g.norm())
      return "pseudo-inverse residual too large";
    // Penrose conditions
    if ((g * w * g - g).norm() > 1e-8 * g.norm())
      return "Penrose 1 violated";
    if ((w * g * w - w).norm() > 1e-8 * w.norm())
      return "Penrose 2 violated";
    if (((g * w).adjoint() - g * w).norm() > 1e-8)
      return "Penrose 3 violated";
    if (((w * g).adjoint() - w * g).norm() > 1e-8)
      return "Penrose 4 violated";
  }
  return "";
}

std::string check_zero_forcing() {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix g = random_complex(3, 8, rng);
    const Beamformer bf = zf_beamformer(g);
    const RVector gains = zf_column_gains(g);
    if ((bf.column_gains - gains).norm() > 1e-8 * gains.norm())
      return "gain routes disagree";
    RVector p(3);
    p << 0.5, 0.25, 0.25;
    const RateVector direct = sinr_zf(bf, p, 1e-3);
    const RateVector general = sinr_general(g, bf.directions, p, 1e-3);
    if (std::abs(direct.sum_rate - general.sum_rate) >
        1e-8 * direct.sum_rate)
      return "interference-free and general SINR disagree under zero-forcing";
  }
  return "";
}

std::string check_waterfilling() {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(5));
    RVector gains(n);
    for (Index k = 0; k < n; ++k)
      gains(k) = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const double noise = 0.1;
    const double budget = 2.0;
    const PowerAllocation alloc = waterfill(gains, noise, budget);
    if (std::abs(alloc.powers.sum() - budget) > 1e-9 * budget)
      return "budget not met";
    if (kkt_residual(alloc, gains, noise) > 1e-9)
      return "optimality conditions violated";
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (gains(i) >= gains(j) && alloc.powers(i) + 1e-12 < alloc.powers(j))
          return "stronger channel received less power";
  }
  return "";
}

std::string check_matching() {
  Rng rng(18);
  for (int trial = 0; trial < 200; ++trial) {
    RateMatrix rates(6, 6);
    for (Index l = 0; l < 6; ++l)
      for (Index k = 0; k < 6; ++k)
        rates(l, k) = rng.uniform(0.0, 10.0);
    const MatchResult result =
        deferred_acceptance(build_preferences(rates), rates);
    if (result.proposal_count > 36)
      return "proposal bound exceeded";
    if (!is_stable(result.assoc, rates).stable)
      return "unstable matching";
    const MatchResult again =
        deferred_acceptance(build_preferences(rates), rates);
    if (!(again.assoc == result.assoc))
      return "matching not deterministic";
  }
  return "";
}

std::string check_random_association_uniformity() {
  Rng rng(19);
  const int draws = 30000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < draws; ++i) {
    const Association a = random_association(3, 3, rng);
    const int code = a.device_to_ris[0] * 2 +
                     (a.device_to_ris[1] > a.device_to_ris[2] ? 1 : 0);
    ++counts[static_cast<std::size_t>(code)];
  }
  for (int c : counts) {
    const double freq = static_cast<double>(c) / draws;
    if (std::abs(freq - 1.0 / 6.0) > 0.02)
      return "matching frequencies deviate from uniform";
  }
  return "";
}

std::string check_trial_determinism() {
  const SimConfig config = desk_config();
  const TrialReport a = run_trial(config, 3);
  const TrialReport b = run_trial(config, 3);
  if (a.outcomes.size() != b.outcomes.size())
    return "outcome sets differ";
  for (std::size_t i = 0; i < a.outcomes.size(); ++i)
    if (a.outcomes[i].sum_rate != b.outcomes[i].sum_rate)
      return "sum rates differ between identical runs";
  return "";
}

std::string check_scheme_ordering() {
  const SimConfig config = desk_config();
  for (std::uint64_t t = 0; t < 10; ++t) {
    const TrialReport report = run_trial(config, t);
    if (report.sum_rate(Scheme::kEs) < report.sum_rate(Scheme::kJbpda))
      return "exhaustive search beaten by the heuristic";
  }
  return "";
}

std::string check_config_round_trip() {
  SimConfig config;
  config.devices = 5;
  config.trials = 17;
  config.schemes = {Scheme::kJbpda, Scheme::kRs};
  config.sweep = SweepAxis::kPower;
  config.grid = {0.0, 11.5, 23.0};
  const SimConfig parsed = parse_config_text(serialize_config(config));
  if (!(parsed == config))
    return "round trip changed the config";
  return "";
}

} // namespace

std::vector<CheckResult> run_self_checks() {
  Battery battery;
  battery.check("distance axioms", check_distance_axioms);
  battery.check("channel magnitudes", check_channel_magnitudes);
  battery.check("co-phasing coherence", check_cophasing);
  battery.check("cascade factorization", check_cascade_model);
  battery.check("pseudo-inverse properties", check_pseudo_inverse);
  battery.check("zero-forcing consistency", check_zero_forcing);
  battery.check("water-filling optimality", check_waterfilling);
  battery.check("matching stability", check_matching);
  battery.check("random association uniformity",
                check_random_association_uniformity);
  battery.check("trial determinism", check_trial_determinism);
  battery.check("scheme ordering", check_scheme_ordering);
  battery.check("config round trip", check_config_round_trip);
  return battery.results;
}

} // namespace dtris
