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

#include <doctest.h>

#include <cmath>

#include "dtris/numerics.hpp"
#include "dtris/rng.hpp"

using namespace dtris;

namespace {

CMatrix random_complex(Index rows, Index cols, Rng &rng) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

} // namespace

TEST_CASE("pseudo-inverse: identity and scalar") {
  const CMatrix identity = CMatrix::Identity(2, 2);
  CHECK((pseudo_inverse(identity) - identity).norm() < 1e-14);

  CMatrix scalar(1, 1);
  scalar(0, 0) = Complex(2.0, 0.0);
  const CMatrix inverse = pseudo_inverse(scalar);
  CHECK(inverse(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(inverse(0, 0).imag()) < 1e-15);
}

TEST_CASE("pseudo-inverse: right-inverse residual on a random 4x8 matrix") {
  Rng rng(201);
  const CMatrix g = random_complex(4, 8, rng);
  const CMatrix w = pseudo_inverse(g);
  REQUIRE(w.rows() == 8);
  REQUIRE(w.cols() == 4);
  CHECK((g * w - CMatrix::Identity(4, 4)).norm() <= 1e-9 * g.norm());
}

TEST_CASE("pseudo-inverse: Penrose conditions on random wide matrices") {
  Rng rng(202);
  for (auto [rows, cols] :
       {std::pair<Index, Index>{2, 4}, {3, 8}, {5, 12}, {8, 8}}) {
    const CMatrix g = random_complex(rows, cols, rng);
    const CMatrix w = pseudo_inverse(g);
    CHECK((g * w * g - g).norm() <= 1e-8 * g.norm());
    CHECK((w * g * w - w).norm() <= 1e-8 * w.norm());
    CHECK(((g * w).adjoint() - g * w).norm() <= 1e-8 * (g * w).norm());
    CHECK(((w * g).adjoint() - w * g).norm() <= 1e-8 * (w * g).norm());
  }
}

TEST_CASE("pseudo-inverse: real scalar scaling") {
  Rng rng(203);
  const CMatrix g = random_complex(3, 6, rng);
  const CMatrix w = pseudo_inverse(g);
  for (double c : {2.0, -0.5, 10.0}) {
    const CMatrix scaled = pseudo_inverse((c * g).eval());
    CHECK((scaled - w / c).norm() <= 1e-10 * w.norm() / std::abs(c));
  }
}

TEST_CASE("pseudo-inverse: accepts Eigen expressions") {
  Rng rng(204);
  const CMatrix g = random_complex(2, 5, rng);
  // expression argument, no named temporary
  const CMatrix w = pseudo_inverse(g * Complex(2.0, 0.0));
  CHECK(((g * 2.0) * w - CMatrix::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("pseudo-inverse: rank-deficient input is rejected") {
  CMatrix g(2, 4);
  g.row(0) = CMatrix::Constant(1, 4, Complex(1.0, 0.5));
  g.row(1) = g.row(0); // duplicated row
  CHECK_THROWS_AS(pseudo_inverse(g), SingularChannelError);
}

TEST_CASE("pseudo-inverse: SVD fallback on ill-conditioned full-rank input") {
  // Orthogonal rows with norms 1 and 1e-6: Gram condition 1e12. The
  // default gate rejects it; a looser tolerance routes through the SVD.
  CMatrix g = CMatrix::Zero(2, 4);
  g(0, 0) = Complex(1.0, 0.0);
  g(1, 1) = Complex(1e-6, 0.0);

  CHECK_THROWS_AS(pseudo_inverse(g), SingularChannelError);

  const CMatrix w = pseudo_inverse(g, 1e-14);
  CHECK((g * w - CMatrix::Identity(2, 2)).norm() < 1e-8);
}

TEST_CASE("pseudo-inverse: shape errors") {
  CHECK_THROWS_AS(pseudo_inverse(CMatrix::Ones(4, 2)), ShapeError);
  CHECK_THROWS_AS(pseudo_inverse(CMatrix()), ShapeError);
}

TEST_CASE("gram condition: orthonormal, scaled, and duplicated rows") {
  // Orthonormal rows.
  CMatrix q = CMatrix::Zero(2, 4);
  q(0, 0) = Complex(1.0, 0.0);
  q(1, 1) = Complex(0.0, 1.0);
  CHECK(gram_condition(q) == doctest::Approx(1.0).epsilon(1e-9));

  // Scaling one of two orthogonal rows by 10 gives eigenvalues (100, 1).
  CMatrix scaled = q;
  scaled.row(0) *= 10.0;
  CHECK(gram_condition(scaled) == doctest::Approx(100.0).epsilon(1e-6));

  // Duplicated row: no finite condition.
  CMatrix dup(2, 4);
  dup.row(0) = CMatrix::Constant(1, 4, Complex(1.0, -1.0));
  dup.row(1) = dup.row(0);
  CHECK(std::isinf(gram_condition(dup)));

  CHECK_THROWS_AS(gram_condition(CMatrix::Ones(4, 2)), ShapeError);
}
