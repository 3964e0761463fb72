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
// Dense complex linear algebra for wide (rows <= cols) channel matrices:
// Gram-matrix conditioning and the Moore-Penrose right pseudo-inverse.
// Free functions over Eigen expressions, templated on the scalar type.

#pragma once

#include <limits>

#include <Eigen/Dense>

#include "dtris/errors.hpp"
#include "dtris/types.hpp"

namespace dtris {

// Default relative rank tolerance on the Gram spectrum.
inline constexpr double kRankRtol = 1e-10;

// Above this Gram condition estimate the Cholesky path is abandoned for a
// full SVD.
inline constexpr double kSvdFallbackCondition = 1e10;

template <typename Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                                  Eigen::Dynamic>;

// G * G^H, a Hermitian positive semidefinite rows x rows matrix.
template <typename Derived>
PlainMatrix<Derived> gram_matrix(const Eigen::MatrixBase<Derived> &G) {
  return G * G.adjoint();
}

// Ratio of extreme eigenvalues of a Hermitian PSD matrix; +inf when the
// smallest eigenvalue is nonpositive.
template <typename Derived>
double hermitian_condition(const Eigen::MatrixBase<Derived> &A) {
  Eigen::SelfAdjointEigenSolver<PlainMatrix<Derived>> solver(
      A, Eigen::EigenvaluesOnly);
  const auto &lambda = solver.eigenvalues(); // ascending
  const double largest = lambda(lambda.size() - 1);
  const double smallest = lambda(0);
  if (!(smallest > 0.0) || !(largest > 0.0))
    return std::numeric_limits<double>::infinity();
  return largest / smallest;
}

// Condition estimate of G * G^H, used to gate the singular-channel error.
// Requires rows <= cols.
template <typename Derived>
double gram_condition(const Eigen::MatrixBase<Derived> &G) {
  if (G.rows() == 0 || G.cols() == 0)
    throw ShapeError("gram_condition: empty matrix");
  if (G.rows() > G.cols())
    throw ShapeError("gram_condition: requires rows <= cols");
  return hermitian_condition(gram_matrix(G));
}

// Right pseudo-inverse W = G^H (G G^H)^-1 of a full-row-rank K x N matrix,
// K <= N, satisfying G * W = I_K. The K x K Gram system is solved by
// Cholesky; when the Gram condition estimate exceeds kSvdFallbackCondition
// the result is computed from a full SVD of G instead. Throws
// SingularChannelError when the smallest Gram eigenvalue falls below
// rtol times the largest.
template <typename Derived>
PlainMatrix<Derived> pseudo_inverse(const Eigen::MatrixBase<Derived> &G,
                                    double rtol = kRankRtol) {
  using Mat = PlainMatrix<Derived>;
  if (G.rows() == 0 || G.cols() == 0)
    throw ShapeError("pseudo_inverse: empty matrix");
  if (G.rows() > G.cols())
    throw ShapeError("pseudo_inverse: requires rows <= cols");

  const Mat dense = G;
  const Mat gram = gram_matrix(dense);
  Eigen::SelfAdjointEigenSolver<Mat> solver(gram, Eigen::EigenvaluesOnly);
  const auto &lambda = solver.eigenvalues();
  const double largest = lambda(lambda.size() - 1);
  const double smallest = lambda(0);
  if (!(largest > 0.0) || !(smallest > rtol * largest))
    throw SingularChannelError(
        "pseudo_inverse: rank-deficient matrix (Gram eigenvalue ratio below "
        "tolerance)");

  if (largest / smallest > kSvdFallbackCondition) {
    Eigen::BDCSVD<Mat> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sigma = svd.singularValues();
    Eigen::VectorXd inv = sigma.array().inverse();
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  }

  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw SingularChannelError("pseudo_inverse: Cholesky factorization failed");
  const Mat x = llt.solve(dense); // (G G^H)^-1 G
  return x.adjoint();
}

} // namespace dtris
