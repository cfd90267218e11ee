// Copyright 2026 The qcontract developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcontract/linalg.hpp"

using namespace qcontract;

namespace {

// Independent oracle: power iteration on M† M.
double power_iteration_norm(const CMatrix& m, int iters = 3000) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const CMatrix gram = m.adjoint() * m;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  CVector v(m.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v.normalize();
  double lambda = 0;
  for (int i = 0; i < iters; ++i) {
    v = gram * v;
    lambda = v.norm();
    if (lambda == 0) return 0;
    v /= lambda;
  }
  return std::sqrt(lambda);
}

CMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

}  // namespace

TEST_CASE("spectral norm basics") {
  CHECK(spectral_norm(CMatrix::Identity(3, 3)) == Catch::Approx(1.0));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 1;
  CHECK(spectral_norm(d) == Catch::Approx(2.0));
  CHECK(spectral_norm(CMatrix(0, 0)) == 0.0);
  CHECK(spectral_norm(CMatrix(3, 0)) == 0.0);
}

TEST_CASE("spectral norm matches the power-iteration oracle") {
  const CMatrix m = random_dense(5, 5, 1234);
  CHECK(std::abs(spectral_norm(m) - power_iteration_norm(m)) < 1e-10);
}

TEST_CASE("solve_linear closed forms") {
  const CMatrix b = random_dense(2, 3, 7);
  CHECK(spectral_norm(solve_linear(CMatrix::Identity(2, 2), b) - b) < 1e-14);

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 2;
  diag(1, 1) = 4;
  const CMatrix inv = solve_linear(diag, CMatrix::Identity(2, 2));
  CHECK(std::abs(inv(0, 0) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(inv(1, 1) - Complex(0.25, 0)) < 1e-14);

  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CMatrix rhs(2, 1);
  rhs << 1, 0;
  const CMatrix x = solve_linear(swap, rhs);
  CHECK(std::abs(x(0, 0)) < 1e-14);
  CHECK(std::abs(x(1, 0) - Complex(1, 0)) < 1e-14);
}

TEST_CASE("solve_linear flags rank deficiency") {
  CMatrix singular(2, 2);
  singular << 1, 1, 1, 1;
  CHECK_THROWS_AS(solve_linear(singular, CMatrix::Identity(2, 2)),
                  SingularMatrix);
  CHECK_THROWS_AS(solve_linear(CMatrix::Zero(2, 3), CMatrix::Zero(2, 1)),
                  ShapeMismatch);
}

TEST_CASE("solve residual stays below 1e-10 relative on random systems") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Index n = 1 + static_cast<Index>(i % 7);
    const CMatrix a =
        random_dense(n, n, 100 + i) + 3.0 * CMatrix::Identity(n, n);
    const CMatrix b = random_dense(n, 2, 200 + i);
    const CMatrix x = solve_linear(a, b);
    CHECK(spectral_norm(a * x - b) <= 1e-10 * std::max(1.0, spectral_norm(b)));
  }
}

TEST_CASE("random_unitary properties") {
  CHECK(random_unitary(0, 5).rows() == 0);

  const CMatrix one = random_unitary(1, 3);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) < 1e-13);

  const CMatrix u = random_unitary(4, 7);
  CHECK(spectral_norm(CMatrix(u.adjoint() * u) - CMatrix::Identity(4, 4)) <
        1e-12);
  CHECK(std::abs(spectral_norm(u) - 1.0) < 1e-10);

  const CMatrix v = random_unitary(4, 7);
  CHECK((u.array() == v.array()).all());  // bitwise reproducible
  const CMatrix w = random_unitary(4, 8);
  CHECK(spectral_norm(u - w) > 1e-3);
}

TEST_CASE("is_unitary") {
  CHECK(is_unitary(CMatrix::Identity(5, 5), 1e-10));
  CHECK(is_unitary(CMatrix(0, 0), 1e-10));
  CMatrix d = CMatrix::Identity(2, 2);
  d(1, 1) = 0.5;
  CHECK_FALSE(is_unitary(d, 1e-10));
  CHECK_FALSE(is_unitary(CMatrix::Zero(2, 3), 1e-10));

  // generic 2x2 with t = 3/5, r = 4/5, omega = 1
  CMatrix u(2, 2);
  u << Complex(0.6, 0), Complex(-0.8, 0), Complex(0.8, 0), Complex(0.6, 0);
  CHECK(is_unitary(u, 1e-10));
}

TEST_CASE("submultiplicativity on random pairs") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const CMatrix a = random_dense(4, 3, 300 + i);
    const CMatrix b = random_dense(3, 5, 400 + i);
    CHECK(spectral_norm(a * b) <=
          spectral_norm(a) * spectral_norm(b) + 1e-12);
  }
}

TEST_CASE("helper bases") {
  const CMatrix u = random_unitary(5, 11);
  const CMatrix w = u.leftCols(2);
  const CMatrix comp = orthonormal_complement(w, 5);
  REQUIRE(comp.cols() == 3);
  CHECK(spectral_norm(CMatrix(w.adjoint() * comp)) < 1e-12);

  CMatrix rank1(3, 2);
  rank1.col(0) = u.col(0).head(3);
  rank1.col(1) = 2.0 * u.col(0).head(3);
  CHECK(orthonormal_columns(rank1, 1e-10).cols() == 1);

  CMatrix m(2, 3);
  m << 1, 0, 0, 0, 1, 0;
  const CMatrix ns = nullspace(m, 1e-12);
  REQUIRE(ns.cols() == 1);
  CHECK(spectral_norm(m * ns) < 1e-12);

  CHECK(matrix_rank(CMatrix::Identity(4, 4), 1e-12) == 4);
  CHECK(matrix_power(m.topLeftCorner(2, 2), 0)
            .isApprox(CMatrix::Identity(2, 2)));
}
