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

#include "qcontract/linalg.hpp"

#include <algorithm>
#include <random>

namespace qcontract {

double spectral_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix solve_linear(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols())
    throw ShapeMismatch("solve_linear: coefficient matrix must be square");
  if (a.rows() != b.rows())
    throw ShapeMismatch("solve_linear: row counts of A and B differ");
  if (a.rows() == 0) return CMatrix(0, b.cols());

  Eigen::FullPivLU<CMatrix> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < a.rows())
    throw SingularMatrix(
        "solve_linear: matrix is rank-deficient within 1e-10 relative "
        "tolerance");
  return lu.solve(b);
}

CMatrix random_unitary(Index n, std::uint64_t seed) {
  if (n < 0) throw InvalidProblem("random_unitary: negative dimension");
  if (n == 0) return CMatrix(0, 0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }

  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;  // the unique map 0 -> 0 is unitary
  const CMatrix defect =
      m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols());
  return spectral_norm(defect) <= tol;
}

bool all_finite(const CMatrix& m) { return m.allFinite(); }

CMatrix matrix_power(const CMatrix& m, Index p) {
  if (m.rows() != m.cols())
    throw ShapeMismatch("matrix_power: matrix must be square");
  CMatrix result = CMatrix::Identity(m.rows(), m.rows());
  CMatrix base = m;
  Index e = p;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

CMatrix orthonormal_columns(const CMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double thresh = tol * std::max(s(0), 1.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > thresh) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix nullspace(const CMatrix& m, double tol) {
  if (m.cols() == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thresh = tol * std::max(s(0), 1.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > thresh) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

CMatrix orthonormal_complement(const CMatrix& w, Index dim) {
  if (w.cols() == 0) return CMatrix::Identity(dim, dim);
  if (w.rows() != dim)
    throw ShapeMismatch("orthonormal_complement: basis has wrong row count");
  Eigen::HouseholderQR<CMatrix> qr(w);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  return q.rightCols(dim - w.cols());
}

Index matrix_rank(const CMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double thresh = tol * std::max(s(0), 1.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > thresh) ++rank;
  return rank;
}

}  // namespace qcontract
