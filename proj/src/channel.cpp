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

#include "dtris/channel.hpp"

#include <cmath>
#include <string>

namespace dtris {

namespace {

inline Complex phasor(double angle) {
#if defined(__GLIBC__)
  double s, c;
  ::sincos(angle, &s, &c);
  return {c, s};
#else
  return {std::cos(angle), std::sin(angle)};
#endif
}

} // namespace

CMatrix gen_ap_ris_channel(const NetworkGeometry &geometry,
                           const CarrierConfig &carrier, Index l) {
  validate_geometry(geometry);
  validate_carrier(carrier);
  if (l < 0 || l >= geometry.ris_count())
    throw InvalidInputError("gen_ap_ris_channel: RIS index out of range");

  const Index elements = geometry.elements();
  const Index antennas = geometry.antennas;
  const double omega = carrier.wave_number();
  const double hop_distance =
      distance(geometry.ap_position,
               geometry.ris_sites[static_cast<std::size_t>(l)].position);
  const double amplitude =
      std::sqrt(path_loss_linear(carrier.frequency_hz, hop_distance));

  CMatrix h(elements, antennas);
  for (Index n = 0; n < antennas; ++n) {
    const Eigen::Vector3d antenna = ap_antenna_position(geometry, carrier, n);
    for (Index m = 0; m < elements; ++m) {
      const double r =
          distance(antenna, ris_element_position(geometry, carrier, l, m));
      h(m, n) = amplitude * phasor(-omega * r);
    }
  }
  return h;
}

CVector gen_ris_device_channel(const NetworkGeometry &geometry,
                               const CarrierConfig &carrier, Index l, Index k) {
  validate_geometry(geometry);
  validate_carrier(carrier);
  if (l < 0 || l >= geometry.ris_count())
    throw InvalidInputError("gen_ris_device_channel: RIS index out of range");
  if (k < 0 || k >= geometry.devices())
    throw InvalidInputError("gen_ris_device_channel: device index out of range");

  const Index elements = geometry.elements();
  const double omega = carrier.wave_number();
  const Eigen::Vector3d &device =
      geometry.device_positions[static_cast<std::size_t>(k)];
  const double hop_distance =
      distance(geometry.ris_sites[static_cast<std::size_t>(l)].position, device);
  const double amplitude =
      std::sqrt(path_loss_linear(carrier.frequency_hz, hop_distance));

  CVector h(elements);
  for (Index m = 0; m < elements; ++m) {
    const double r =
        distance(ris_element_position(geometry, carrier, l, m), device);
    h(m) = amplitude * phasor(-omega * r);
  }
  return h;
}

CVector configure_ris_phases(const CMatrix &ap_ris, const CVector &ris_device,
                             Index reference_antenna) {
  if (ap_ris.rows() != ris_device.size())
    throw ShapeError("configure_ris_phases: element counts disagree");
  if (reference_antenna < 0 || reference_antenna >= ap_ris.cols())
    throw InvalidInputError(
        "configure_ris_phases: reference antenna out of range");

  const Index elements = ap_ris.rows();
  CVector theta(elements);
  for (Index m = 0; m < elements; ++m) {
    // Phase of the un-steered per-element cascade at the reference antenna.
    const Complex z =
        std::conj(ap_ris(m, reference_antenna)) * ris_device(m);
    const double mag = std::abs(z);
    if (mag == 0.0)
      throw DegenerateChannelError(
          "configure_ris_phases: zero-magnitude channel at element " +
          std::to_string(m));
    theta(m) = std::conj(z) / mag; // unit modulus, cancels arg(z)
  }
  return theta;
}

CVector cascaded_channel(const CMatrix &ap_ris, const CVector &theta,
                         const CVector &ris_device) {
  if (ap_ris.rows() != theta.size() || ap_ris.rows() != ris_device.size())
    throw ShapeError("cascaded_channel: dimension mismatch");
  return ap_ris.adjoint() * theta.cwiseProduct(ris_device);
}

StackedChannel assemble_channel_matrix(
    const std::vector<std::vector<CVector>> &cascades, const Association &assoc) {
  const auto ris_count = cascades.size();
  if (ris_count == 0)
    throw ShapeError("assemble_channel_matrix: no cascades");
  if (assoc.ris_to_device.size() != ris_count)
    throw InvalidAssociationError(
        "assemble_channel_matrix: association does not match cascade count");

  StackedChannel out;
  out.devices = assoc.matched_devices();
  if (out.devices.empty())
    throw InvalidAssociationError(
        "assemble_channel_matrix: association matches no device");

  const int k0 = out.devices.front();
  const int l0 = assoc.device_to_ris[static_cast<std::size_t>(k0)];
  const Index antennas =
      cascades[static_cast<std::size_t>(l0)][static_cast<std::size_t>(k0)].size();
  out.matrix.resize(static_cast<Index>(out.devices.size()), antennas);
  for (std::size_t row = 0; row < out.devices.size(); ++row) {
    const int k = out.devices[row];
    const int l = assoc.device_to_ris[static_cast<std::size_t>(k)];
    const CVector &g = cascades[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
    if (g.size() != antennas)
      throw ShapeError("assemble_channel_matrix: inconsistent cascade length");
    out.matrix.row(static_cast<Index>(row)) = g.adjoint();
  }
  return out;
}

ChannelRealization materialize_realization(const NetworkGeometry &geometry,
                                           const CarrierConfig &carrier,
                                           const Association &assoc) {
  validate_geometry(geometry);
  validate_carrier(carrier);
  const Index ris_count = geometry.ris_count();
  const Index devices = geometry.devices();
  if (assoc.ris_to_device.size() != static_cast<std::size_t>(ris_count) ||
      assoc.device_to_ris.size() != static_cast<std::size_t>(devices))
    throw InvalidAssociationError(
        "materialize_realization: association does not match geometry");

  ChannelRealization r;
  r.ap_ris.reserve(static_cast<std::size_t>(ris_count));
  r.ris_device.resize(static_cast<std::size_t>(ris_count));
  r.cascades.resize(static_cast<std::size_t>(ris_count));
  r.ris_phases.resize(static_cast<std::size_t>(ris_count));

  for (Index l = 0; l < ris_count; ++l) {
    r.ap_ris.push_back(gen_ap_ris_channel(geometry, carrier, l));
    auto &per_device = r.ris_device[static_cast<std::size_t>(l)];
    auto &per_cascade = r.cascades[static_cast<std::size_t>(l)];
    per_device.reserve(static_cast<std::size_t>(devices));
    per_cascade.reserve(static_cast<std::size_t>(devices));
    for (Index k = 0; k < devices; ++k) {
      per_device.push_back(gen_ris_device_channel(geometry, carrier, l, k));
      const CVector theta = configure_ris_phases(
          r.ap_ris[static_cast<std::size_t>(l)], per_device.back());
      per_cascade.push_back(cascaded_channel(
          r.ap_ris[static_cast<std::size_t>(l)], theta, per_device.back()));
    }
    // The stored configuration is the one steering toward the assigned
    // device; an unassigned RIS keeps an identity configuration.
    const int assigned = assoc.ris_to_device[static_cast<std::size_t>(l)];
    if (assigned >= 0)
      r.ris_phases[static_cast<std::size_t>(l)] = configure_ris_phases(
          r.ap_ris[static_cast<std::size_t>(l)],
          per_device[static_cast<std::size_t>(assigned)]);
    else
      r.ris_phases[static_cast<std::size_t>(l)] =
          CVector::Ones(geometry.elements());
  }
  r.stacked = assemble_channel_matrix(r.cascades, assoc);
  return r;
}

CascadeModel CascadeModel::build(const NetworkGeometry &geometry,
                                 const CarrierConfig &carrier) {
  validate_geometry(geometry);
  validate_carrier(carrier);

  const Index ris_count = geometry.ris_count();
  const Index devices = geometry.devices();
  const Index antennas = geometry.antennas;
  const Index elements = geometry.elements();
  const double omega = carrier.wave_number();

  CascadeModel model;
  model.profiles_.resize(antennas, ris_count);
  model.amplitudes_.resize(ris_count, devices);

  Eigen::Matrix3Xd antenna_pos(3, antennas);
  for (Index n = 0; n < antennas; ++n)
    antenna_pos.col(n) = ap_antenna_position(geometry, carrier, n);

  Eigen::ArrayXd ex(elements), ey(elements), ez(elements);
  Eigen::ArrayXd dist_ref(elements), dist_n(elements);

  for (Index l = 0; l < ris_count; ++l) {
    const auto &site = geometry.ris_sites[static_cast<std::size_t>(l)];
    const double ap_hop_amplitude = std::sqrt(path_loss_linear(
        carrier.frequency_hz, distance(geometry.ap_position, site.position)));

    for (Index m = 0; m < elements; ++m) {
      const Eigen::Vector3d p = ris_element_position(geometry, carrier, l, m);
      ex(m) = p.x();
      ey(m) = p.y();
      ez(m) = p.z();
    }
    dist_ref = ((ex - antenna_pos(0, 0)).square() +
                (ey - antenna_pos(1, 0)).square() +
                (ez - antenna_pos(2, 0)).square())
                   .sqrt();

    for (Index n = 0; n < antennas; ++n) {
      dist_n = ((ex - antenna_pos(0, n)).square() +
                (ey - antenna_pos(1, n)).square() +
                (ez - antenna_pos(2, n)).square())
                   .sqrt();
      double sum_cos = 0.0, sum_sin = 0.0;
      for (Index m = 0; m < elements; ++m) {
        const double phase = omega * (dist_n(m) - dist_ref(m));
#if defined(__GLIBC__)
        double s, c;
        ::sincos(phase, &s, &c);
#else
        const double s = std::sin(phase), c = std::cos(phase);
#endif
        sum_cos += c;
        sum_sin += s;
      }
      model.profiles_(n, l) = ap_hop_amplitude * Complex(sum_cos, sum_sin);
    }

    for (Index k = 0; k < devices; ++k) {
      const double hop = distance(
          site.position, geometry.device_positions[static_cast<std::size_t>(k)]);
      model.amplitudes_(l, k) =
          std::sqrt(path_loss_linear(carrier.frequency_hz, hop));
    }
  }
  model.profile_norm_sq_ = model.profiles_.colwise().squaredNorm();
  return model;
}

StackedChannel CascadeModel::stacked_matrix(const Association &assoc) const {
  if (assoc.ris_to_device.size() != static_cast<std::size_t>(ris_count()) ||
      assoc.device_to_ris.size() != static_cast<std::size_t>(devices()))
    throw InvalidAssociationError(
        "stacked_matrix: association does not match model shape");

  StackedChannel out;
  out.devices = assoc.matched_devices();
  if (out.devices.empty())
    throw InvalidAssociationError("stacked_matrix: association matches no device");
  out.matrix.resize(static_cast<Index>(out.devices.size()), antennas());
  for (std::size_t row = 0; row < out.devices.size(); ++row) {
    const int k = out.devices[row];
    const int l = assoc.device_to_ris[static_cast<std::size_t>(k)];
    out.matrix.row(static_cast<Index>(row)) =
        amplitudes_(l, k) * profiles_.col(l).adjoint();
  }
  return out;
}

} // namespace dtris
