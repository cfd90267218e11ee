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

#include "qcontract/operator_contraction.hpp"

using namespace qcontract;

namespace {

OperatorContractionProblem scalar_problem(Complex a00, Complex a01,
                                          Complex a10, Complex a11,
                                          Complex b) {
  OperatorContractionProblem p;
  p.a = CMatrix(2, 2);
  p.a << a00, a01, a10, a11;
  p.b = CMatrix::Constant(1, 1, b);
  p.part_h = Partition{1, 1};
  p.part_f = Partition{1, 1};
  return p;
}

}  // namespace

TEST_CASE("geometric feedback sums to the closed value") {
  // A = [[1,1],[1,1/2]], B = 1: S = 1 + 1/(1 - 1/2) = 3.
  const auto p = scalar_problem(1, 1, 1, 0.5, 1);
  for (const auto m : {ContractionMethod::series, ContractionMethod::power,
                       ContractionMethod::resolvent}) {
    const auto res = contract_operator(p, m, 1e-12);
    REQUIRE(res.s.rows() == 1);
    CHECK(std::abs(res.s(0, 0) - Complex(3, 0)) < 1e-10);
  }
}

TEST_CASE("divergent feedback is refused") {
  // Internal ratio F1 A B = 2.
  const auto p = scalar_problem(0, 1, 1, 2, 1);
  CHECK_THROWS_AS(contract_operator(p, ContractionMethod::series, 1e-10, 500),
                  NotConverged);
  CHECK_THROWS_AS(contract_operator(p, ContractionMethod::power, 1e-10, 500),
                  NotConverged);
  CHECK_THROWS_AS(contract_operator(p, ContractionMethod::resolvent, 1e-10),
                  DefinitionMismatch);

  const auto rep = solvability_check(p, 1e-9);
  CHECK(rep.exists_for_all);  // I - F1AB = -1 is invertible
  CHECK(rep.phi0_unique);
  CHECK_FALSE(rep.series_converges);
  CHECK(rep.krylov_contraction == Catch::Approx(2.0));
}

TEST_CASE("solvable but non-unique input is diagnosed") {
  // A = [[0,1],[0,1]], B = 1: V1 = F1 and F0 A B V1 != 0.
  const auto p = scalar_problem(0, 1, 0, 1, 1);
  const auto rep = solvability_check(p, 1e-9);
  CHECK(rep.exists_for_all);
  CHECK_FALSE(rep.phi0_unique);
  CHECK(rep.v1_dim == 1);
  // No internal component is ever produced, so the series value exists and
  // is the canonical one.
  CHECK(rep.series_converges);
  const auto res = contract_operator(p, ContractionMethod::series, 1e-12);
  CHECK(std::abs(res.s(0, 0)) < 1e-12);
}

TEST_CASE("unitary specialization matches the unitary module") {
  UnitaryContractionProblem up;
  up.u = random_unitary(6, 91);
  up.omega = random_unitary(2, 92);
  up.part_h = Partition{4, 2};
  up.part_f = up.part_h;
  const auto probe =
      contract_unitary(up, ContractionMethod::block_solve, 1e-11);
  if (probe.convergence_n <= 0.95) {
    OperatorContractionProblem p{up.u, up.omega, up.part_h, up.part_f};
    const auto rep = solvability_check(p, 1e-9);
    CHECK(rep.exists_for_all);
    CHECK(rep.phi0_unique);
    const auto res = contract_operator(p, ContractionMethod::series, 1e-13);
    CHECK(spectral_norm(res.s - probe.s) < 1e-10);
  }
}

TEST_CASE("rectangular problems are handled") {
  // dim H = 3 (2 + 1), dim F = 2 (1 + 1): A is 2x3.
  OperatorContractionProblem p;
  p.a = CMatrix(2, 3);
  p.a << 1, 0, 0.5, 0, 0.25, 0.5;
  p.b = CMatrix::Constant(1, 1, 1.0);
  p.part_h = Partition{2, 1};
  p.part_f = Partition{1, 1};
  const auto rep = solvability_check(p, 1e-9);
  CHECK(rep.series_converges);
  const auto res = contract_operator(p, ContractionMethod::series, 1e-12);
  // phi1 = (0, 0.25) psi0 + 0.5 phi1 => phi1 = (0, 0.5) psi0;
  // phi0 = (1, 0) psi0 + 0.5 phi1 = (1, 0.25) psi0.
  REQUIRE(res.s.rows() == 1);
  REQUIRE(res.s.cols() == 2);
  CHECK(std::abs(res.s(0, 0) - Complex(1, 0)) < 1e-10);
  CHECK(std::abs(res.s(0, 1) - Complex(0.25, 0)) < 1e-10);
}

TEST_CASE("shape violations throw") {
  OperatorContractionProblem p;
  p.a = CMatrix::Zero(2, 2);
  p.b = CMatrix::Zero(2, 1);  // wrong: dim H1 = 1
  p.part_h = Partition{1, 1};
  p.part_f = Partition{1, 1};
  CHECK_THROWS_AS(p.validate(), InvalidProblem);

  const auto q = scalar_problem(1, 0, 0, 0.5, 1);
  CHECK_THROWS_AS(contract_operator(q, ContractionMethod::block_solve),
                  InvalidProblem);
}
