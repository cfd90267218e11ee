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
// Contraction of a unitary operator to a subspace.
//
// Given a unitary U : H -> F, sector splits H = H0 + H1 and F = F0 + F1,
// and a unitary connection Omega : F1 -> H1 that feeds the sector-1 output
// of U back into its sector-1 input, the contraction is the (provably
// unitary) effective map H0 -> F0 obtained by eliminating the internal
// sector. Four equivalent algorithms are provided, along with extraction
// of the per-pass Kraus operators and POVM, detection and removal of
// decoupled invariant subspaces, a reciprocity check, and assembly of
// multi-node unitary networks into a single contraction problem.

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcontract/linalg.hpp"

namespace qcontract {

enum class ContractionMethod { block_solve, resolvent, series, power };

std::string to_string(ContractionMethod m);

struct UnitaryContractionProblem {
  CMatrix u;        // n x n unitary, H -> F
  CMatrix omega;    // dim H1 x dim F1 unitary, F1 -> H1
  Partition part_h; // split of the domain H
  Partition part_f; // split of the codomain F

  Index dim() const { return part_h.total(); }

  // Throws InvalidProblem on shape/finiteness/unitarity violations.
  void validate(double tol = 1e-10) const;
};

struct ContractionResult {
  CMatrix s;                 // contracted map, dim F0 x dim H0
  ContractionMethod method;  // algorithm actually used (after any fallback)
  Index terms_used = 0;      // series terms / power iterations; 0 for solves
  double convergence_n = 0;  // ||(U~11)^d|| on the stripped problem
  CMatrix v_basis;           // n x dim V, orthonormal columns in F coords
  CMatrix v1_basis;          // n x dim V1, orthonormal columns in F coords
};

struct InvariantSubspaces {
  CMatrix v_basis;   // n x dim V; the largest U Omega-invariant subspace of
                     // F1 (equivalently of F1 ∩ U H1), embedded in F coords
  CMatrix v1_basis;  // n x dim V1; fixed points of U Omega inside F1
};

struct StrippedProblem {
  UnitaryContractionProblem problem;  // V removed from F1, Omega V from H1
  CMatrix domain_basis;    // n x (n - dim V); columns = new H basis, old coords
  CMatrix codomain_basis;  // n x (n - dim V); columns = new F basis, old coords
  InvariantSubspaces removed;
};

// The decoupled subspaces of the problem. V1 is the eigenvalue-1 fixed-point
// space of U Omega within F1; V is the largest U Omega-invariant subspace of
// F1, computed from the unit-modulus eigenvectors of F1 U Omega F1 and then
// stabilized so that the invariance residual is below tol. V1 is always
// contained in V.
InvariantSubspaces invariant_subspaces(const UnitaryContractionProblem& p,
                                       double tol = 1e-9);

// Equivalent problem with V and Omega V removed (bases rotated so the
// partitions remain coordinate ranges). Contraction and the operator family
// (U Omega F1)^n U H0 are preserved.
StrippedProblem strip_decoupled(const UnitaryContractionProblem& p,
                                double tol = 1e-9);

// Computes Omega . U by the selected method. V is stripped first in every
// case; series/power fall back to block_solve when the convergence parameter
// is still within 1e-9 of 1 after stripping. Throws NotConverged when a
// series/power run exceeds max_terms.
ContractionResult contract_unitary(const UnitaryContractionProblem& p,
                                   ContractionMethod method,
                                   double tol = 1e-9,
                                   Index max_terms = 1000000);

struct KrausSet {
  std::vector<CMatrix> ops;  // A_n = F0 (U Omega F1)^{n-1} U H0, n = 1..
  double tail_bound = 0;     // ||I - sum A_n† A_n|| for the returned list
};

// Per-pass Kraus operators of the contraction, truncated once the
// completeness defect drops below tail_tol. Coherently the A_n sum to
// Omega . U; incoherently they define a unital quantum channel.
KrausSet kraus_operators(const UnitaryContractionProblem& p,
                         double tail_tol = 1e-9, Index max_terms = 1000000);

// POVM elements Pi_n = A_n† A_n. Positive semidefinite; sum to the identity
// within the set's tail bound.
std::vector<CMatrix> povm(const KrausSet& k);

struct ReciprocityReport {
  bool reciprocal = false;      // direct check: (Omega.U)^{-1}.U == Omega^{-1}
  bool geometric = false;       // dim V1 == dim(F1 ∩ U H1)
  Index dim_v1 = 0;
  Index dim_f1_cap_uh1 = 0;
  double residual = 0;          // ||(Omega.U)^{-1}.U - Omega^{-1}||
};

// Checks whether the connection can be recovered by contracting the other
// sector with (Omega . U)^{-1}. The direct and geometric criteria are both
// evaluated; they agree on every valid problem.
ReciprocityReport check_reciprocity(const UnitaryContractionProblem& p,
                                    double tol = 1e-8);

// One node of a unitary network. The domain of `u` decomposes into input
// blocks from peers beta = 0..N (0 = external) and the codomain into output
// blocks toward the same peers, each listed in beta order.
struct NetworkNode {
  CMatrix u;
  std::vector<Index> in_dims;   // in_dims[beta]  = dim of input from beta
  std::vector<Index> out_dims;  // out_dims[beta] = dim of output toward beta
};

struct NetworkSpec {
  std::vector<NetworkNode> nodes;  // nodes alpha = 1..N at indices 0..N-1
  // (to, from) -> connection unitary feeding node `from`'s output for `to`
  // into node `to`'s input from `from`; both 1-based. Absent entries mean the
  // corresponding blocks have dimension zero.
  std::map<std::pair<int, int>, CMatrix> connections;
};

struct NetworkAssembly {
  UnitaryContractionProblem problem;
  // new-to-old coordinate maps recording the block ordering: external blocks
  // first (node order), then internal blocks in (to, from) lexicographic
  // order.
  std::vector<Index> domain_order;
  std::vector<Index> codomain_order;
};

// Assembles the direct sums U = ⊕ U_alpha and Omega = ⊕ Omega_{to,from}
// into a single contraction problem whose contraction is the network's
// external scattering map. Throws DimensionMismatch naming the violated
// dimension constraint.
NetworkAssembly assemble_network(const NetworkSpec& spec);

}  // namespace qcontract
