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
// Scattering matrices of quantum graphs. Each vertex with self-adjoint
// boundary conditions A psi + B psi' = 0 defines a star-graph S-matrix
// (ikB + A)^{-1}(ikB - A); the S-matrix of an arbitrary metric graph is
// obtained by direct-summing its vertex stars and contracting every internal
// edge as a pair of leads joined with phase e^{ikl}.

#pragma once

#include <cstdint>
#include <vector>

#include "qcontract/linalg.hpp"

namespace qcontract {

// Boundary conditions at one vertex. Row/column i of both matrices refers
// to the vertex's local end slot i; the graph structure fixes which edge
// occupies each slot.
struct VertexConditions {
  CMatrix a;
  CMatrix b;

  Index degree() const { return a.rows(); }
};

struct VertexReport {
  bool valid = false;
  Index rank_defect = 0;      // degree - rank(A, B)
  double herm_residual = 0;   // ||A B† - (A B†)†||
};

// Self-adjointness: (A, B) has full row rank and A B† is Hermitian.
VertexReport validate_vertex(const VertexConditions& v, double tol = 1e-9);

// Star-graph scattering matrix (ikB + A)^{-1}(ikB - A); unitary for valid
// vertex conditions. Throws SingularMatrix if ikB + A is numerically
// singular (an invalid vertex slipped past tolerance).
CMatrix star_scattering(const VertexConditions& v, double k);

struct LeadPair {
  Index lead_a = 0;
  Index lead_b = 0;
  double length = 0;
};

struct GraphContractionSpec {
  std::vector<LeadPair> pairs;
};

// Joins the listed lead pairs of an existing L x L scattering matrix into
// internal lines of the given lengths, at wavenumber k. Surviving leads keep
// their relative order. Throws SingularMatrix at a resonant k, where
// (Omega^{-1} - S_II) is singular within 1e-10 and no value is defined.
CMatrix contract_scattering(const CMatrix& s, const GraphContractionSpec& spec,
                            double k);

// Same contraction through the explicit block formula
// S_EE + S_EI (Omega^{-1} - S_II)^{-1} S_IE; kept as an independent route
// for cross-checking the generic contraction path.
CMatrix contract_scattering_block(const CMatrix& s,
                                  const GraphContractionSpec& spec, double k);

struct EdgeEnd {
  Index vertex = 0;
  Index slot = 0;  // local end slot at that vertex
};

struct InternalEdge {
  EdgeEnd end_a;
  EdgeEnd end_b;
  double length = 0;
};

struct MetricGraph {
  std::vector<VertexConditions> vertices;
  std::vector<InternalEdge> internal_edges;
  std::vector<EdgeEnd> leads;  // defines the external index order of S(k)

  // Every vertex end referenced exactly once, degrees consistent, lengths
  // positive, at least one lead. Throws InvalidProblem.
  void validate() const;
};

// S(k) of the graph, indexed by the order of g.leads. Propagates
// SingularMatrix at resonant k and InvalidProblem for bad vertex conditions.
CMatrix graph_scattering(const MetricGraph& g, double k);

struct SweepRow {
  double k = 0;
  bool resonant = false;
  CMatrix s;  // empty when resonant
};

// One row per k, in input order; resonant points are flagged rather than
// interpolated.
std::vector<SweepRow> sweep(const MetricGraph& g,
                            const std::vector<double>& k_values);

// Canonical vertex families.
VertexConditions dirichlet_vertex(Index degree);
VertexConditions neumann_vertex(Index degree);
// Value continuity across all ends plus vanishing derivative sum, in the
// fixed representative with d-1 difference rows and one row of ones.
VertexConditions kirchhoff_vertex(Index degree);
// Random valid conditions A = I - W, B = i(I + W) with Haar W; guarantees
// both self-adjointness conditions. Test scaffolding.
VertexConditions random_vertex(Index degree, std::uint64_t seed);

}  // namespace qcontract
