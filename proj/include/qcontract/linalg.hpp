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

#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "qcontract/errors.hpp"

namespace qcontract {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Ordered split of a coordinate space into sector 0 = [0, dim0) and
// sector 1 = [dim0, dim0 + dim1). All projectors in this library are
// coordinate-range selections under this convention, so they are exact;
// general subspaces must be rotated into range form first.
struct Partition {
  Index dim0 = 0;
  Index dim1 = 0;

  Index total() const { return dim0 + dim1; }
  bool operator==(const Partition&) const = default;
};

// Largest singular value; 0 for an empty matrix.
double spectral_norm(const CMatrix& m);

// Solves A X = B for square A. Throws SingularMatrix when A is
// rank-deficient beyond a 1e-10 relative pivot threshold.
CMatrix solve_linear(const CMatrix& a, const CMatrix& b);

// Haar-distributed unitary, deterministic for a fixed seed
// (QR of a seeded complex Gaussian matrix with phase-fixed R diagonal).
CMatrix random_unitary(Index n, std::uint64_t seed);

// True iff m is square and ||m† m - I|| <= tol in spectral norm.
// The empty 0x0 matrix counts as unitary.
bool is_unitary(const CMatrix& m, double tol);

bool all_finite(const CMatrix& m);

// m^p for square m, p >= 0, by binary exponentiation.
CMatrix matrix_power(const CMatrix& m, Index p);

// Orthonormal basis of the column space; singular values below
// tol * max(sigma_max, 1) are treated as zero.
CMatrix orthonormal_columns(const CMatrix& m, double tol = 1e-12);

// Orthonormal basis of the right null space {x : m x ~ 0}, with singular
// values below tol * max(sigma_max, 1) treated as zero.
CMatrix nullspace(const CMatrix& m, double tol);

// Given orthonormal columns w in C^dim, an orthonormal basis of their
// orthogonal complement.
CMatrix orthonormal_complement(const CMatrix& w, Index dim);

// Numerical rank with threshold tol * max(sigma_max, 1).
Index matrix_rank(const CMatrix& m, double tol);

}  // namespace qcontract
