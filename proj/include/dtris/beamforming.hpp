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
// Zero-forcing transmit beamforming and SINR/rate evaluation.

#pragma once

#include "dtris/numerics.hpp"
#include "dtris/types.hpp"

namespace dtris {

// Unit-norm beam directions plus the effective channel power after
// zero-forcing: column_gains(k) = 1 / || pinv(G) e_k ||^2, so that device k
// sees |g_k^H w_k|^2 = column_gains(k) and zero interference.
struct Beamformer {
  CMatrix directions;   // antennas x devices, unit-norm columns
  RVector column_gains; // per-device effective power gain
};

// Zero-forcing beamformer from the stacked K x N channel matrix G, K <= N
// full row rank. Propagates SingularChannelError from the pseudo-inverse.
Beamformer zf_beamformer(const CMatrix &stacked, double rtol = kRankRtol);

// column_gains without forming beam vectors: the diagonal of (G G^H)^-1
// gives 1/gain directly. Same rank gate as zf_beamformer; this is the hot
// path for matching enumeration.
RVector zf_column_gains(const CMatrix &stacked, double rtol = kRankRtol);

struct RateVector {
  RVector sinr;         // dimensionless
  RVector rate;         // bits/s/Hz, log2(1 + sinr)
  double sum_rate = 0.0; // bits/s/Hz
};

// Interference-free SINR under zero-forcing: sinr_k = p_k * gain_k / noise.
// Throws InvalidNoiseError for noise <= 0, InvalidInputError for p_k < 0.
RateVector sinr_zf(const Beamformer &beamformer, const RVector &powers,
                   double noise_watts);

RateVector sinr_zf(const RVector &column_gains, const RVector &powers,
                   double noise_watts);

// General multiuser SINR for an arbitrary set of unit beams:
//   sinr_k = p_k |g_k^H w_k|^2 /
//            ( sum_{i != k} p_i |g_k^H w_i|^2 + noise ),
// where row k of `effective_rows` is g_k^H (the cascade through device k's
// assigned surface) and column i of `directions` is w_i.
RateVector sinr_general(const CMatrix &effective_rows, const CMatrix &directions,
                        const RVector &powers, double noise_watts);

} // namespace dtris
