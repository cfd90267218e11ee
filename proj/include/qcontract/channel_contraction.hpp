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
// Superoperator algebra and contraction of quantum channels. A channel
// T : L(H) -> L(F) is contracted with a connection channel
// R : L(F1) -> L(H1) by feeding the sector-1 output block back into the
// sector-1 input; the result, when the feedback series converges in trace
// norm, is again a CPTP map L(H0) -> L(F0). A Monte Carlo sampler realizes
// the same map through the measure-and-reinject protocol.

#pragma once

#include <cstdint>
#include <vector>

#include "qcontract/linalg.hpp"
#include "qcontract/unitary_contraction.hpp"

namespace qcontract {

// Linear map on operators, stored as a matrix acting on column-stacked
// vectorizations: vec(rho)(i + rows*j) = rho(i,j). Under this convention the
// conjugation rho -> A rho A† has matrix conj(A) ⊗ A.
struct Superoperator {
  Index dim_in = 0;   // acts on dim_in x dim_in operators
  Index dim_out = 0;
  CMatrix m;          // dim_out^2 x dim_in^2

  void validate() const;  // shape/finiteness; throws ShapeMismatch
};

CVector vec(const CMatrix& rho);
CMatrix unvec(const CVector& v, Index rows, Index cols);

// Superoperator of rho -> sum_i A_i rho A_i†. All ops must share one shape.
Superoperator superop_from_kraus(const std::vector<CMatrix>& ops);

Superoperator identity_superop(Index d);

// Composition a ∘ b (apply b first).
Superoperator compose(const Superoperator& a, const Superoperator& b);

CMatrix apply_superop(const Superoperator& t, const CMatrix& rho);

// Choi matrix under the column-stacking convention:
// choi[(i, k), (j, l)] = [T(|i><j|)]_{k,l}; complete positivity is
// equivalent to this matrix being positive semidefinite.
CMatrix choi_matrix(const Superoperator& t);

struct CptpReport {
  bool cptp = false;
  double choi_min_eig = 0;       // most negative Choi eigenvalue
  double tp_residual = 0;        // ||T†(I) - I||
  double choi_herm_residual = 0; // ||choi - choi†||
};

// CP via Choi positivity, TP via the adjoint map applied to the identity.
CptpReport is_cptp(const Superoperator& t, double tol = 1e-9);

// The sector-diagonal ("decohered") version of t: inputs and outputs are
// sandwiched between the partition projectors, so coherences between the
// sectors are discarded. CPTP whenever t is.
Superoperator decohere(const Superoperator& t, const Partition& part_h,
                       const Partition& part_f);

// Norm on positive superoperators: sup over unit-trace positive rho of
// Tr(T(rho)), i.e. the top eigenvalue of T†(I). Equals 1 for every quantum
// channel. On non-CP input the same formula is evaluated as a diagnostic.
double trace_norm(const Superoperator& t);

struct ChannelContractionProblem {
  Superoperator t;   // L(H) -> L(F)
  Superoperator r;   // L(F1) -> L(H1)
  Partition part_h;
  Partition part_f;

  // Requires both maps CPTP within tol (Choi eigenvalue floor) and
  // consistent dimensions. Throws InvalidProblem.
  void validate(double tol = 1e-9) const;
};

struct ChannelContractionResult {
  Superoperator s;       // L(H0) -> L(F0)
  Index terms_used = 0;
  double trace_ratio = 0;   // Tr(sigma1)/Tr(rho0) at the maximally mixed input
  double tail_norm = 0;     // trace-norm bound on the neglected tail
  bool converged = false;
};

// Contraction R . T. Convergence requires the trace norm of the d-th power
// of the internal feedback block T~11 to be below 1 (d = dim L(F1)); when it
// is not, NotConverged is thrown with positive_invariant set, certifying a
// nonzero positive invariant subspace. The decoupled case T10 = 0 converges
// in one step regardless.
ChannelContractionResult contract_channel(const ChannelContractionProblem& p,
                                          ContractionMethod method,
                                          double tol = 1e-9,
                                          Index max_terms = 1000000);

// 0 iff ||t11^d||_t < 1 - tol with d = dim L(F1); otherwise a positive
// lower bound on the dimension of the largest positive invariant subspace,
// obtained from the trace-preserved orbits of the top eigenspace of
// (t11^d)†(I).
Index positive_invariant_dim(const Superoperator& t11, double tol = 1e-9);

struct SampleResult {
  CMatrix sigma0;                    // Monte Carlo estimate of S(rho0)
  std::vector<Index> stop_histogram; // index n = trajectories stopped at step n
                                     // (index 0 unused)
  Index censored = 0;                // trajectories that hit max_steps
  Index trajectories = 0;
};

// Measure-and-reinject protocol: apply T, measure the PVM {F0, F1}, stop on
// F0, otherwise reinject through R and repeat. Trajectories are averaged
// over their stopped normalized states; each trajectory derives its RNG
// stream from (seed, trajectory index). Censored trajectories are counted,
// not dropped.
SampleResult sample_contraction(const ChannelContractionProblem& p,
                                const CMatrix& rho0, Index trajectories,
                                std::uint64_t seed, Index max_steps = 1000);

// Weighted mixture of unitary conjugations between the sectors. Block (j,k)
// holds unitaries H_k -> F_j with nonnegative weights; building the problem
// validates the column normalizations sum_j weight(j,k) = 1 and the
// connection mixture weights summing to 1.
struct UnitaryMixtureSpec {
  std::vector<double> weights[2][2];
  std::vector<CMatrix> blocks[2][2];
  std::vector<double> connection_weights;
  std::vector<CMatrix> connection_blocks;  // F1 -> H1
  Partition part_h;
  Partition part_f;
};

ChannelContractionProblem unitary_mixture_problem(const UnitaryMixtureSpec& spec);

}  // namespace qcontract
