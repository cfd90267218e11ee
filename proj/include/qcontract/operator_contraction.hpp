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
//
// Contraction B . A of general linear operators. Unlike the unitary case,
// existence is not guaranteed: the canonical value is defined as the sum of
// the feedback series and is returned only when that series converges.

#pragma once

#include "qcontract/linalg.hpp"
#include "qcontract/unitary_contraction.hpp"

namespace qcontract {

struct OperatorContractionProblem {
  CMatrix a;        // dim F x dim H
  CMatrix b;        // dim H1 x dim F1
  Partition part_h;
  Partition part_f;

  // Shapes and finiteness only; no unitarity or squareness is required.
  void validate() const;
};

struct SolvabilityReport {
  bool exists_for_all = false;   // range(F1 A H0) within range(I - F1 A B)
  bool phi0_unique = false;      // F0 A B annihilates V1
  bool series_converges = false; // Krylov subspace norm criterion
  Index v1_dim = 0;
  // diagnostics
  double norm_f1ab = 0;          // ||F1 A B||
  double unique_residual = 0;    // ||F0 A B V1||
  double krylov_contraction = 0; // min_k ||(F1 A B)^k|| restricted to W
  Index krylov_dim = 0;          // dim of the minimal invariant W
  double resolvent_value_norm = 0;  // norm of the non-canonical resolvent
                                    // value when (I - F1 A B) is invertible
};

// Existence / uniqueness / series-convergence diagnostics. Total: never
// throws on a shape-valid problem.
SolvabilityReport solvability_check(const OperatorContractionProblem& p,
                                    double tol = 1e-9);

struct OperatorContractionResult {
  CMatrix s;                 // dim F0 x dim H0
  ContractionMethod method;
  Index terms_used = 0;
  double tail_estimate = 0;
};

// Computes B . A. `series` sums the iterative solution, declaring
// convergence once the internal-term norms decrease geometrically over a
// window of dim F1 consecutive terms and the tail falls below tol; `power`
// iterates (F0 + A B F1)^n A H0 with the same confirmation; `resolvent`
// evaluates F0 (I - A B F1)^{-1} A H0 and is offered only when
// solvability_check reports series convergence (the two definitions differ
// in general), otherwise DefinitionMismatch is thrown. Divergence raises
// NotConverged.
OperatorContractionResult contract_operator(const OperatorContractionProblem& p,
                                            ContractionMethod method,
                                            double tol = 1e-9,
                                            Index max_terms = 1000000);

}  // namespace qcontract
