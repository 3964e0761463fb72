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

#include "dtris/beamforming.hpp"

#include <cmath>

namespace dtris {

namespace {

void check_noise(double noise_watts) {
  if (!(noise_watts > 0.0))
    throw InvalidNoiseError("noise power must be positive");
}

void check_powers(const RVector &powers) {
  for (Index k = 0; k < powers.size(); ++k)
    if (!(powers(k) >= 0.0))
      throw InvalidInputError("transmit powers must be nonnegative");
}

double rate_bps_hz(double sinr) { return std::log1p(sinr) / M_LN2; }

} // namespace

Beamformer zf_beamformer(const CMatrix &stacked, double rtol) {
  const CMatrix raw = pseudo_inverse(stacked, rtol);
  const Index devices = stacked.rows();

  Beamformer bf;
  bf.directions.resize(raw.rows(), devices);
  bf.column_gains.resize(devices);
  for (Index k = 0; k < devices; ++k) {
    const double norm_sq = raw.col(k).squaredNorm();
    bf.column_gains(k) = 1.0 / norm_sq;
    bf.directions.col(k) = raw.col(k) / std::sqrt(norm_sq);
  }
  return bf;
}

RVector zf_column_gains(const CMatrix &stacked, double rtol) {
  if (stacked.rows() == 0 || stacked.cols() == 0)
    throw ShapeError("zf_column_gains: empty matrix");
  if (stacked.rows() > stacked.cols())
    throw ShapeError("zf_column_gains: requires rows <= cols");

  const CMatrix gram = gram_matrix(stacked);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
  const auto &lambda = solver.eigenvalues();
  const double largest = lambda(lambda.size() - 1);
  const double smallest = lambda(0);
  if (!(largest > 0.0) || !(smallest > rtol * largest))
    throw SingularChannelError(
        "zf_column_gains: rank-deficient channel matrix");

  CMatrix inverse;
  if (largest / smallest > kSvdFallbackCondition) {
    inverse = solver.eigenvectors() *
              lambda.array().inverse().matrix().asDiagonal() *
              solver.eigenvectors().adjoint();
  } else {
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
      throw SingularChannelError("zf_column_gains: Cholesky factorization failed");
    inverse = llt.solve(CMatrix::Identity(gram.rows(), gram.cols()));
  }
  return inverse.diagonal().real().cwiseInverse();
}

RateVector sinr_zf(const RVector &column_gains, const RVector &powers,
                   double noise_watts) {
  check_noise(noise_watts);
  if (column_gains.size() != powers.size())
    throw ShapeError("sinr_zf: gain and power vectors disagree");
  check_powers(powers);

  RateVector out;
  out.sinr = powers.cwiseProduct(column_gains) / noise_watts;
  out.rate.resize(out.sinr.size());
  for (Index k = 0; k < out.sinr.size(); ++k)
    out.rate(k) = rate_bps_hz(out.sinr(k));
  out.sum_rate = out.rate.sum();
  return out;
}

RateVector sinr_zf(const Beamformer &beamformer, const RVector &powers,
                   double noise_watts) {
  return sinr_zf(beamformer.column_gains, powers, noise_watts);
}

RateVector sinr_general(const CMatrix &effective_rows, const CMatrix &directions,
                        const RVector &powers, double noise_watts) {
  check_noise(noise_watts);
  const Index devices = effective_rows.rows();
  if (directions.cols() != devices || powers.size() != devices)
    throw ShapeError("sinr_general: device counts disagree");
  if (directions.rows() != effective_rows.cols())
    throw ShapeError("sinr_general: antenna counts disagree");
  check_powers(powers);

  // coupling(k, i) = g_k^H w_i
  const CMatrix coupling = effective_rows * directions;

  RateVector out;
  out.sinr.resize(devices);
  out.rate.resize(devices);
  for (Index k = 0; k < devices; ++k) {
    const double signal =
        powers(k) * std::norm(coupling(k, k));
    double interference = 0.0;
    for (Index i = 0; i < devices; ++i)
      if (i != k)
        interference += powers(i) * std::norm(coupling(k, i));
    out.sinr(k) = signal / (interference + noise_watts);
    out.rate(k) = rate_bps_hz(out.sinr(k));
  }
  out.sum_rate = out.rate.sum();
  return out;
}

} // namespace dtris
