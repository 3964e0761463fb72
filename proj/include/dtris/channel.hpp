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
// Deterministic line-of-sight channel synthesis.
//
// Per-link model: every coefficient has magnitude equal to the square root
// of the free-space gain at the hop's center-to-center distance, and phase
// -omega * r where r is the exact element-to-antenna (or element-to-device)
// distance. Amplitude variation across an aperture is negligible at the
// ranges of interest; the phase structure is what the co-phasing rule and
// the beamformer consume.

#pragma once

#include <vector>

#include "dtris/association.hpp"
#include "dtris/geometry.hpp"
#include "dtris/types.hpp"

namespace dtris {

// AP -> RIS l channel, elements x antennas.
CMatrix gen_ap_ris_channel(const NetworkGeometry &geometry,
                           const CarrierConfig &carrier, Index l);

// RIS l -> device k channel, one coefficient per element.
CVector gen_ris_device_channel(const NetworkGeometry &geometry,
                               const CarrierConfig &carrier, Index l, Index k);

// Unit-modulus reflection coefficients (the diagonal of the RIS
// configuration matrix) chosen so that the cascade through every element
// adds coherently at the given reference antenna:
//   theta_m = -arg( conj(H(m, ref)) * h(m) ).
// Lossless reflection: every returned entry has magnitude one. Throws
// DegenerateChannelError when a required coefficient has zero magnitude.
CVector configure_ris_phases(const CMatrix &ap_ris, const CVector &ris_device,
                             Index reference_antenna = 0);

// Cascaded AP -> RIS -> device channel g = H^H * diag(theta) * h, one
// coefficient per AP antenna. Throws ShapeError on dimension mismatch.
CVector cascaded_channel(const CMatrix &ap_ris, const CVector &theta,
                         const CVector &ris_device);

// Effective channel matrix for a matching: one row per matched device in
// ascending device order, row = (cascade through the assigned RIS)^H.
// Devices without an assigned RIS are excluded and later scored at zero
// rate.
struct StackedChannel {
  CMatrix matrix;           // matched_count x antennas
  std::vector<int> devices; // row -> device index
};

StackedChannel assemble_channel_matrix(
    const std::vector<std::vector<CVector>> &cascades, const Association &assoc);

// Fully materialized channel quantities for one scene and one matching.
// Memory grows as L*M*N + L*K*(M+N); intended for analysis and tests at
// small sizes. The simulator itself runs on CascadeModel below.
struct ChannelRealization {
  std::vector<CMatrix> ap_ris;                  // per RIS: elements x antennas
  std::vector<std::vector<CVector>> ris_device; // [l][k]: elements
  std::vector<CVector> ris_phases;    // per RIS: diag of the config matrix
  std::vector<std::vector<CVector>> cascades; // [l][k]: co-phased, antennas
  StackedChannel stacked;
};

ChannelRealization materialize_realization(const NetworkGeometry &geometry,
                                           const CarrierConfig &carrier,
                                           const Association &assoc);

// Compact co-phased cascade representation.
//
// With constant per-hop magnitudes, the co-phased cascade for pair (l, k)
// factors exactly as
//   g_{l,k} = B(l, k) * profile_l,
//   profile_l[n] = A_l * sum_m exp(j*omega*(r(n, m) - r(ref, m))),
// where A_l and B(l, k) are the hop amplitudes and r(n, m) the exact
// antenna-to-element distances: the device-side phases cancel against the
// phase configuration element by element. This collapses per-pair cascade
// synthesis from O(M*N) to an O(1) scale of a per-RIS profile and makes
// exhaustive matching enumeration affordable.
class CascadeModel {
public:
  static CascadeModel build(const NetworkGeometry &geometry,
                            const CarrierConfig &carrier);

  Index ris_count() const { return amplitudes_.rows(); }
  Index devices() const { return amplitudes_.cols(); }
  Index antennas() const { return profiles_.rows(); }

  const CMatrix &profiles() const { return profiles_; }   // antennas x L
  const RMatrix &amplitudes() const { return amplitudes_; } // L x devices

  CVector pair_cascade(Index l, Index k) const {
    return amplitudes_(l, k) * profiles_.col(l);
  }
  // Squared norm of the co-phased cascade for pair (l, k).
  double pair_gain(Index l, Index k) const {
    return amplitudes_(l, k) * amplitudes_(l, k) * profile_norm_sq_(l);
  }

  StackedChannel stacked_matrix(const Association &assoc) const;

private:
  CMatrix profiles_;        // column l = co-phased AP-side profile of RIS l
  RMatrix amplitudes_;      // (l, k) = device-hop amplitude sqrt(PL(r_lk))
  RVector profile_norm_sq_; // per-RIS squared profile norm
};

} // namespace dtris
