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

#include "qcontract/operator_contraction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qcontract {

namespace {

struct Blocks {
  Index h0, h1, f0, f1;
  CMatrix a00;    // F0 A H0
  CMatrix a10;    // F1 A H0
  CMatrix f0ab;   // F0 A B : F1 -> F0
  CMatrix f1ab;   // F1 A B : F1 -> F1
};

Blocks split(const OperatorContractionProblem& p) {
  Blocks b;
  b.h0 = p.part_h.dim0;
  b.h1 = p.part_h.dim1;
  b.f0 = p.part_f.dim0;
  b.f1 = p.part_f.dim1;
  b.a00 = p.a.topLeftCorner(b.f0, b.h0);
  b.a10 = p.a.bottomLeftCorner(b.f1, b.h0);
  const CMatrix ab = p.a.rightCols(b.h1) * p.b;  // A B : F1 -> F
  b.f0ab = ab.topRows(b.f0);
  b.f1ab = ab.bottomRows(b.f1);
  return b;
}

}  // namespace

void OperatorContractionProblem::validate() const {
  if (!all_finite(a) || !all_finite(b))
    throw InvalidProblem("operator problem: non-finite matrix entries");
  if (part_h.dim0 < 0 || part_h.dim1 < 0 || part_f.dim0 < 0 ||
      part_f.dim1 < 0)
    throw InvalidProblem("operator problem: negative partition dimension");
  if (a.cols() != part_h.total())
    throw InvalidProblem("operator problem: A column count must match dim H");
  if (a.rows() != part_f.total())
    throw InvalidProblem("operator problem: A row count must match dim F");
  if (b.rows() != part_h.dim1 || b.cols() != part_f.dim1)
    throw InvalidProblem("operator problem: B must be dim H1 x dim F1");
}

SolvabilityReport solvability_check(const OperatorContractionProblem& p,
                                    double tol) {
  p.validate();
  const Blocks blk = split(p);
  SolvabilityReport rep;
  rep.norm_f1ab = spectral_norm(blk.f1ab);

  const CMatrix resid_op =
      CMatrix::Identity(blk.f1, blk.f1) - blk.f1ab;  // I - F1 A B

  // Existence: range(F1 A H0) within range(I - F1 A B), by rank comparison.
  if (blk.f1 == 0 || blk.h0 == 0) {
    rep.exists_for_all = true;
  } else {
    CMatrix stacked(blk.f1, blk.f1 + blk.h0);
    stacked.leftCols(blk.f1) = resid_op;
    stacked.rightCols(blk.h0) = blk.a10;
    rep.exists_for_all =
        matrix_rank(stacked, tol) == matrix_rank(resid_op, tol);
  }

  // Uniqueness of phi0: F0 A B annihilates the eigenvalue-1 space V1.
  const CMatrix v1 = nullspace(resid_op, tol);
  rep.v1_dim = v1.cols();
  rep.unique_residual =
      (v1.cols() > 0) ? spectral_norm(blk.f0ab * v1) : 0.0;
  rep.phi0_unique =
      rep.unique_residual <= tol * std::max(1.0, spectral_norm(blk.f0ab));

  // Series convergence: minimal F1AB-invariant Krylov space W containing
  // F1 A H0, then ||(F1 A B)^k|| < 1 restricted to W for some k <= dim W.
  CMatrix w = orthonormal_columns(blk.a10, 1e-12);
  for (Index pass = 0; pass < blk.f1 && w.cols() < blk.f1; ++pass) {
    CMatrix ext(blk.f1, 2 * w.cols());
    ext.leftCols(w.cols()) = w;
    ext.rightCols(w.cols()) = blk.f1ab * w;
    CMatrix w2 = orthonormal_columns(ext, 1e-12);
    if (w2.cols() == w.cols()) break;
    w = w2;
  }
  rep.krylov_dim = w.cols();
  if (w.cols() == 0) {
    rep.series_converges = true;  // no internal component is ever produced
    rep.krylov_contraction = 0.0;
  } else {
    const CMatrix cw = w.adjoint() * blk.f1ab * w;
    double best = spectral_norm(cw);
    CMatrix powk = cw;
    for (Index k = 2; k <= w.cols(); ++k) {
      powk = powk * cw;
      best = std::min(best, spectral_norm(powk));
    }
    rep.krylov_contraction = best;
    rep.series_converges = best < 1.0 - tol;
  }

  // Non-canonical resolvent value, exposed as a diagnostic only.
  if (matrix_rank(resid_op, tol) == blk.f1) {
    Eigen::FullPivLU<CMatrix> lu(resid_op);
    rep.resolvent_value_norm =
        spectral_norm(blk.a00 + blk.f0ab * lu.solve(blk.a10));
  }
  return rep;
}

OperatorContractionResult contract_operator(
    const OperatorContractionProblem& p, ContractionMethod method, double tol,
    Index max_terms) {
  if (tol <= 0) throw InvalidProblem("contract_operator: tol must be > 0");
  if (max_terms < 1)
    throw InvalidProblem("contract_operator: max_terms must be >= 1");
  p.validate();
  const Blocks blk = split(p);

  OperatorContractionResult res;
  res.method = method;

  const Index window = std::max<Index>(blk.f1, 1);

  switch (method) {
    case ContractionMethod::block_solve:
      throw InvalidProblem(
          "contract_operator: block_solve is not defined for general "
          "operators; use resolvent, series or power");

    case ContractionMethod::resolvent: {
      const SolvabilityReport rep = solvability_check(p, tol);
      if (!rep.series_converges)
        throw DefinitionMismatch(
            "contract_operator: resolvent value requested but the series "
            "does not converge; the two definitions differ in general");
      CMatrix lhs = CMatrix::Identity(p.a.rows(), p.a.rows());
      lhs.rightCols(blk.f1) -= p.a.rightCols(blk.h1) * p.b;
      const CMatrix x = solve_linear(lhs, p.a.leftCols(blk.h0));
      res.s = x.topRows(blk.f0);
      res.terms_used = 0;
      return res;
    }

    case ContractionMethod::series: {
      res.s = blk.a00;
      res.terms_used = 1;
      if (blk.f1 == 0 || blk.h0 == 0) return res;

      CMatrix y = blk.a10;  // (F1 A B)^k F1 A H0
      const double scale = std::max(1.0, y.norm());
      std::deque<double> ynorms{y.norm()};
      std::deque<double> deltas;
      for (Index k = 1; k <= max_terms; ++k) {
        const CMatrix contrib = blk.f0ab * y;
        res.s += contrib;
        y = blk.f1ab * y;
        ++res.terms_used;

        const double yn = y.norm();
        deltas.push_back(contrib.norm());
        ynorms.push_back(yn);
        if (static_cast<Index>(ynorms.size()) > window + 1) {
          ynorms.pop_front();
          deltas.pop_front();
        }

        if (yn <= tol * 1e-6) {  // series terminated exactly
          res.tail_estimate = yn;
          return res;
        }
        if (static_cast<Index>(ynorms.size()) == window + 1 &&
            ynorms.back() < ynorms.front()) {
          const bool small = std::all_of(
              deltas.begin(), deltas.end(),
              [&](double d) { return d <= tol; }) && yn <= tol;
          if (small) {
            const double r = std::pow(ynorms.back() / ynorms.front(),
                                      1.0 / static_cast<double>(window));
            res.tail_estimate =
                yn * spectral_norm(blk.f0ab) / std::max(1.0 - r, 1e-3);
            return res;
          }
        }
        if (yn > 1e12 * scale)
          throw NotConverged(
              "contract_operator: series diverges (internal term grew by "
              "12 orders of magnitude)",
              yn);
      }
      throw NotConverged("contract_operator: series exceeded max_terms",
                         y.norm());
    }

    case ContractionMethod::power: {
      CMatrix x = p.a.leftCols(blk.h0);  // (F0 + A B F1)^k A H0
      const CMatrix ab = p.a.rightCols(blk.h1) * p.b;
      const double scale = std::max(1.0, x.norm());
      std::deque<double> deltas;
      for (Index k = 1; k <= max_terms; ++k) {
        CMatrix xn = CMatrix::Zero(x.rows(), x.cols());
        xn.topRows(blk.f0) = x.topRows(blk.f0);
        xn += ab * x.bottomRows(blk.f1);
        const double delta = (xn - x).norm();
        x = xn;
        ++res.terms_used;

        deltas.push_back(delta);
        if (static_cast<Index>(deltas.size()) > window) deltas.pop_front();
        if (static_cast<Index>(deltas.size()) == window &&
            std::all_of(deltas.begin(), deltas.end(),
                        [&](double d) { return d <= tol; })) {
          res.s = x.topRows(blk.f0);
          res.tail_estimate = delta;
          return res;
        }
        if (x.norm() > 1e12 * scale)
          throw NotConverged(
              "contract_operator: power iteration diverges", x.norm());
      }
      throw NotConverged("contract_operator: power iteration exceeded "
                         "max_terms",
                         deltas.empty() ? 0.0 : deltas.back());
    }
  }
  throw InvalidProblem("contract_operator: unknown method");
}

}  // namespace qcontract
