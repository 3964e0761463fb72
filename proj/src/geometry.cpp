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

#include "dtris/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dtris {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool finite(const Eigen::Vector3d &p) {
  return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}
} // namespace

void validate_carrier(const CarrierConfig &carrier) {
  if (!(carrier.frequency_hz > 0.0))
    throw InvalidInputError("carrier frequency must be positive");
  if (!(carrier.bandwidth_hz > 0.0))
    throw InvalidInputError("channel bandwidth must be positive");
  if (carrier.element_side_m < 0.0)
    throw InvalidInputError("element side length must be nonnegative");
}

void validate_geometry(const NetworkGeometry &geometry) {
  if (geometry.devices() < 1)
    throw InvalidGeometryError("at least one device is required");
  if (geometry.ris_count() < 1)
    throw InvalidGeometryError("at least one RIS is required");
  if (geometry.antennas < 1)
    throw InvalidGeometryError("at least one AP antenna is required");
  if (geometry.elements_y < 1 || geometry.elements_z < 1)
    throw InvalidGeometryError("RIS element grid must be at least 1x1");
  if (geometry.devices() > geometry.antennas)
    throw InvalidGeometryError(
        "device count exceeds AP antenna count (zero-forcing infeasible)");

  if (!finite(geometry.ap_position))
    throw InvalidGeometryError("AP position is not finite");
  for (const auto &p : geometry.device_positions)
    if (!finite(p))
      throw InvalidGeometryError("device position is not finite");

  double max_terrestrial = -std::numeric_limits<double>::infinity();
  double min_haps = std::numeric_limits<double>::infinity();
  for (const auto &site : geometry.ris_sites) {
    if (!finite(site.position))
      throw InvalidGeometryError("RIS position is not finite");
    if (site.tier == RisTier::kTerrestrial)
      max_terrestrial = std::max(max_terrestrial, site.position.z());
    else
      min_haps = std::min(min_haps, site.position.z());
  }
  if (min_haps <= max_terrestrial)
    throw InvalidGeometryError(
        "HAPS-tier RIS altitude must exceed every terrestrial RIS altitude");
}

double distance(const Eigen::Vector3d &p, const Eigen::Vector3d &q) {
  if (!finite(p) || !finite(q))
    throw InvalidGeometryError("distance: non-finite coordinates");
  return (p - q).norm();
}

double path_loss_linear(double frequency_hz, double distance_m) {
  if (!(frequency_hz > 0.0))
    throw InvalidInputError("path_loss_linear: frequency must be positive");
  if (!(distance_m > 0.0))
    throw DegenerateDistanceError(
        "path_loss_linear: distance must be positive, got " +
        std::to_string(distance_m));
  const double x = kSpeedOfLight / (4.0 * kPi * frequency_hz * distance_m);
  return x * x;
}

double noise_power_watts(double noise_density_dbm_hz, double bandwidth_hz,
                         double noise_figure_db) {
  if (!(bandwidth_hz > 0.0))
    throw InvalidInputError("noise_power: bandwidth must be positive");
  const double dbm =
      noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return dbm_to_watts(dbm);
}

Eigen::Vector3d ap_antenna_position(const NetworkGeometry &geometry,
                                    const CarrierConfig &carrier, Index n) {
  if (n < 0 || n >= geometry.antennas)
    throw InvalidInputError("ap_antenna_position: antenna index out of range");
  const double offset =
      (static_cast<double>(n) - 0.5 * static_cast<double>(geometry.antennas - 1)) *
      carrier.antenna_spacing();
  return geometry.ap_position + Eigen::Vector3d(0.0, offset, 0.0);
}

Eigen::Vector3d ris_element_position(const NetworkGeometry &geometry,
                                     const CarrierConfig &carrier, Index l,
                                     Index m) {
  if (l < 0 || l >= geometry.ris_count())
    throw InvalidInputError("ris_element_position: RIS index out of range");
  if (m < 0 || m >= geometry.elements())
    throw InvalidInputError("ris_element_position: element index out of range");
  const Index iy = m % geometry.elements_y;
  const Index iz = m / geometry.elements_y;
  const double side = carrier.element_side();
  const double dy =
      (static_cast<double>(iy) - 0.5 * static_cast<double>(geometry.elements_y - 1)) *
      side;
  const double dz =
      (static_cast<double>(iz) - 0.5 * static_cast<double>(geometry.elements_z - 1)) *
      side;
  return geometry.ris_sites[static_cast<std::size_t>(l)].position +
         Eigen::Vector3d(0.0, dy, dz);
}

NetworkGeometry sample_geometry(Index devices, Index ris_count, Index antennas,
                                Index elements_y, Index elements_z,
                                const GeometrySampler &sampler, Rng &rng) {
  NetworkGeometry g;
  g.antennas = antennas;
  g.elements_y = elements_y;
  g.elements_z = elements_z;
  g.ap_position = Eigen::Vector3d(0.0, 0.0, sampler.ap_height_m);

  const double half = 0.5 * sampler.area_side_m;
  g.device_positions.reserve(static_cast<std::size_t>(devices));
  for (Index k = 0; k < devices; ++k) {
    const double x = rng.uniform(-half, half);
    const double y = rng.uniform(-half, half);
    g.device_positions.emplace_back(x, y, sampler.device_height_m);
  }

  g.ris_sites.reserve(static_cast<std::size_t>(ris_count));
  for (Index l = 0; l + 1 < ris_count; ++l) {
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    g.ris_sites.push_back(
        {Eigen::Vector3d(sampler.ring_radius_m * std::cos(angle),
                         sampler.ring_radius_m * std::sin(angle),
                         sampler.ring_height_m),
         RisTier::kTerrestrial});
  }
  g.ris_sites.push_back(
      {Eigen::Vector3d(0.0, 0.0, sampler.haps_altitude_m), RisTier::kHaps});

  validate_geometry(g);
  return g;
}

} // namespace dtris
