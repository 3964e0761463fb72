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
// Network layout and link-budget primitives.
//
// Coordinate conventions (meters, right-handed):
//   - The AP is a uniform linear array along the global y axis, half-
//     wavelength spacing, centered at its site position.
//   - Each RIS is a uniform elements_y x elements_z grid in the y-z plane,
//     element pitch equal to the element side length, centered at its site.
//   - Devices are single-antenna points.

#pragma once

#include <cstdint>
#include <vector>

#include "dtris/errors.hpp"
#include "dtris/rng.hpp"
#include "dtris/types.hpp"

namespace dtris {

// Carrier and receiver-noise parameters.
struct CarrierConfig {
  double frequency_hz = 15e9;
  double bandwidth_hz = 400e6;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 10.0;
  double element_side_m = 0.0; // 0 selects the half-wavelength default

  double wavelength() const { return kSpeedOfLight / frequency_hz; }
  // Wave number 2*pi*f/c in rad/m.
  double wave_number() const {
    return 2.0 * 3.14159265358979323846 * frequency_hz / kSpeedOfLight;
  }
  double element_side() const {
    return element_side_m > 0.0 ? element_side_m : 0.5 * wavelength();
  }
  double antenna_spacing() const { return 0.5 * wavelength(); }
};

// Throws InvalidInputError on non-positive frequency or bandwidth.
void validate_carrier(const CarrierConfig &carrier);

enum class RisTier { kTerrestrial, kHaps };

struct RisSite {
  Eigen::Vector3d position;
  RisTier tier = RisTier::kTerrestrial;
};

// Static scene: one multi-antenna AP, L reflecting surfaces over two tiers,
// K single-antenna devices.
struct NetworkGeometry {
  Eigen::Vector3d ap_position = Eigen::Vector3d::Zero();
  std::vector<RisSite> ris_sites;
  std::vector<Eigen::Vector3d> device_positions;
  Index antennas = 0;   // N
  Index elements_y = 0; // grid columns per RIS
  Index elements_z = 0; // grid rows per RIS

  Index devices() const { return static_cast<Index>(device_positions.size()); }
  Index ris_count() const { return static_cast<Index>(ris_sites.size()); }
  Index elements() const { return elements_y * elements_z; }
};

// Enforces: K >= 1, L >= 1, N >= 1, M >= 1, K <= N (zero-forcing needs at
// least as many AP antennas as served devices), finite coordinates, and
// every HAPS-tier altitude strictly above every terrestrial-tier altitude.
// Throws InvalidGeometryError.
void validate_geometry(const NetworkGeometry &geometry);

// Euclidean distance between two points. Throws InvalidGeometryError on
// non-finite coordinates.
double distance(const Eigen::Vector3d &p, const Eigen::Vector3d &q);

// Free-space (Friis) power gain (c / (4*pi*f*d))^2, dimensionless.
// Throws DegenerateDistanceError for d <= 0, InvalidInputError for f <= 0.
double path_loss_linear(double frequency_hz, double distance_m);

// Receiver noise power in watts:
//   sigma^2 = 10^((density_dbm_hz + 10*log10(bandwidth) + nf_db - 30)/10).
double noise_power_watts(double noise_density_dbm_hz, double bandwidth_hz,
                         double noise_figure_db);

inline double noise_power_watts(const CarrierConfig &carrier) {
  return noise_power_watts(carrier.noise_density_dbm_hz, carrier.bandwidth_hz,
                           carrier.noise_figure_db);
}

// Position of AP antenna n (0-based) on the centered y-axis array.
Eigen::Vector3d ap_antenna_position(const NetworkGeometry &geometry,
                                    const CarrierConfig &carrier, Index n);

// Position of element m of RIS l. Elements are indexed row-major over the
// grid: m = iy + elements_y * iz.
Eigen::Vector3d ris_element_position(const NetworkGeometry &geometry,
                                     const CarrierConfig &carrier, Index l,
                                     Index m);

// Placement rules for randomized scenes: devices uniform over a square on
// the ground, terrestrial RIS sites uniform on a horizontal ring at rooftop
// height, a single HAPS-tier RIS fixed above the area center, and the AP at
// the center at rooftop height.
struct GeometrySampler {
  double area_side_m = 500.0;
  double device_height_m = 0.0;
  double ap_height_m = 25.0;
  double ring_height_m = 25.0;
  double ring_radius_m = 250.0;
  double haps_altitude_m = 20000.0;

  bool operator==(const GeometrySampler &) const = default;
};

// Draws a scene with K devices and L RIS sites (L-1 terrestrial followed by
// one HAPS-tier site at the last index). Consumes 2K + (L-1) uniform draws.
NetworkGeometry sample_geometry(Index devices, Index ris_count, Index antennas,
                                Index elements_y, Index elements_z,
                                const GeometrySampler &sampler, Rng &rng);

} // namespace dtris
