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

#include "qcontract/quantum_graph.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "qcontract/unitary_contraction.hpp"

namespace qcontract {

namespace {

constexpr double kResonanceTol = 1e-10;

void validate_spec(const GraphContractionSpec& spec, Index n_leads) {
  std::set<Index> seen;
  for (const LeadPair& pr : spec.pairs) {
    if (pr.lead_a < 0 || pr.lead_a >= n_leads || pr.lead_b < 0 ||
        pr.lead_b >= n_leads)
      throw InvalidSpec("contraction spec: lead index out of range");
    if (!seen.insert(pr.lead_a).second || !seen.insert(pr.lead_b).second)
      throw InvalidSpec("contraction spec: lead indices must be pairwise "
                        "distinct");
    if (!(pr.length > 0) || !std::isfinite(pr.length))
      throw InvalidSpec("contraction spec: length must be positive and "
                        "finite");
  }
}

// Surviving leads in input order, then the contracted ones pair by pair.
std::vector<Index> contraction_order(const GraphContractionSpec& spec,
                                     Index n_leads) {
  std::set<Index> contracted;
  for (const LeadPair& pr : spec.pairs) {
    contracted.insert(pr.lead_a);
    contracted.insert(pr.lead_b);
  }
  std::vector<Index> order;
  order.reserve(static_cast<size_t>(n_leads));
  for (Index i = 0; i < n_leads; ++i)
    if (!contracted.count(i)) order.push_back(i);
  for (const LeadPair& pr : spec.pairs) {
    order.push_back(pr.lead_a);
    order.push_back(pr.lead_b);
  }
  return order;
}

CMatrix permuted(const CMatrix& s, const std::vector<Index>& order) {
  const Index n = s.rows();
  CMatrix out(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c)
      out(r, c) = s(order[static_cast<size_t>(r)],
                    order[static_cast<size_t>(c)]);
  return out;
}

CMatrix connection_matrix(const GraphContractionSpec& spec, double k) {
  const Index r = static_cast<Index>(spec.pairs.size());
  CMatrix omega = CMatrix::Zero(2 * r, 2 * r);
  for (Index ell = 0; ell < r; ++ell) {
    const Complex w =
        std::exp(Complex(0, k * spec.pairs[static_cast<size_t>(ell)].length));
    omega(2 * ell, 2 * ell + 1) = w;
    omega(2 * ell + 1, 2 * ell) = w;
  }
  return omega;
}

void check_resonance(const CMatrix& sp, const CMatrix& omega, Index r) {
  const CMatrix s_ii = sp.bottomRightCorner(2 * r, 2 * r);
  const CMatrix m = omega.adjoint() - s_ii;  // Omega^{-1} = Omega† here
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= kResonanceTol * std::max(sv(0), 1.0))
    throw SingularMatrix(
        "contract_scattering: resonant wavenumber, Omega^{-1} - S_II is "
        "singular");
}

}  // namespace

VertexReport validate_vertex(const VertexConditions& v, double tol) {
  if (v.a.rows() != v.a.cols() || v.b.rows() != v.b.cols() ||
      v.a.rows() != v.b.rows())
    throw ShapeMismatch("vertex: A and B must be square of equal size");
  const Index d = v.degree();
  VertexReport rep;
  if (d == 0) {
    rep.valid = true;
    return rep;
  }
  CMatrix ab(d, 2 * d);
  ab.leftCols(d) = v.a;
  ab.rightCols(d) = v.b;
  rep.rank_defect = d - matrix_rank(ab, tol);
  const CMatrix h = v.a * v.b.adjoint();
  rep.herm_residual = spectral_norm(h - CMatrix(h.adjoint()));
  rep.valid = rep.rank_defect == 0 && rep.herm_residual <= tol;
  return rep;
}

CMatrix star_scattering(const VertexConditions& v, double k) {
  if (!(k > 0) || !std::isfinite(k))
    throw InvalidProblem("star_scattering: k must be positive and finite");
  const VertexReport rep = validate_vertex(v);
  if (!rep.valid)
    throw InvalidProblem(
        "star_scattering: vertex conditions are not self-adjoint");
  const Complex ik(0, k);
  return solve_linear(ik * v.b + v.a, ik * v.b - v.a);
}

CMatrix contract_scattering(const CMatrix& s, const GraphContractionSpec& spec,
                            double k) {
  if (s.rows() != s.cols())
    throw InvalidSpec("contract_scattering: S must be square");
  if (!(k > 0) || !std::isfinite(k))
    throw InvalidSpec("contract_scattering: k must be positive and finite");
  validate_spec(spec, s.rows());
  if (!is_unitary(s, 1e-8))
    throw InvalidProblem("contract_scattering: S is not unitary");
  const Index r = static_cast<Index>(spec.pairs.size());
  if (r == 0) return s;

  const std::vector<Index> order = contraction_order(spec, s.rows());
  const CMatrix sp = permuted(s, order);
  const CMatrix omega = connection_matrix(spec, k);
  check_resonance(sp, omega, r);

  UnitaryContractionProblem p;
  p.u = sp;
  p.omega = omega;
  p.part_h = Partition{s.rows() - 2 * r, 2 * r};
  p.part_f = p.part_h;
  return contract_unitary(p, ContractionMethod::block_solve, 1e-11).s;
}

CMatrix contract_scattering_block(const CMatrix& s,
                                  const GraphContractionSpec& spec,
                                  double k) {
  if (s.rows() != s.cols())
    throw InvalidSpec("contract_scattering_block: S must be square");
  validate_spec(spec, s.rows());
  const Index r = static_cast<Index>(spec.pairs.size());
  if (r == 0) return s;

  const Index e = s.rows() - 2 * r;
  const std::vector<Index> order = contraction_order(spec, s.rows());
  const CMatrix sp = permuted(s, order);
  const CMatrix omega = connection_matrix(spec, k);
  check_resonance(sp, omega, r);

  const CMatrix s_ee = sp.topLeftCorner(e, e);
  const CMatrix s_ei = sp.topRightCorner(e, 2 * r);
  const CMatrix s_ie = sp.bottomLeftCorner(2 * r, e);
  const CMatrix s_ii = sp.bottomRightCorner(2 * r, 2 * r);
  return s_ee +
         s_ei * solve_linear(CMatrix(omega.adjoint()) - s_ii, s_ie);
}

void MetricGraph::validate() const {
  if (leads.empty())
    throw InvalidProblem("graph: at least one lead is required");
  std::set<std::pair<Index, Index>> seen;
  auto take = [&](const EdgeEnd& e, const char* what) {
    if (e.vertex < 0 || e.vertex >= static_cast<Index>(vertices.size())) {
      std::ostringstream msg;
      msg << "graph: " << what << " references vertex " << e.vertex
          << " which does not exist";
      throw InvalidProblem(msg.str());
    }
    const Index d = vertices[static_cast<size_t>(e.vertex)].degree();
    if (e.slot < 0 || e.slot >= d) {
      std::ostringstream msg;
      msg << "graph: " << what << " references slot " << e.slot
          << " of vertex " << e.vertex << " with degree " << d;
      throw InvalidProblem(msg.str());
    }
    if (!seen.insert({e.vertex, e.slot}).second) {
      std::ostringstream msg;
      msg << "graph: end (" << e.vertex << "," << e.slot
          << ") referenced more than once";
      throw InvalidProblem(msg.str());
    }
  };
  for (const InternalEdge& e : internal_edges) {
    take(e.end_a, "internal edge");
    take(e.end_b, "internal edge");
    if (!(e.length > 0) || !std::isfinite(e.length))
      throw InvalidProblem("graph: internal edge length must be positive "
                           "and finite");
  }
  for (const EdgeEnd& e : leads) take(e, "lead");
  Index total = 0;
  for (const VertexConditions& v : vertices) total += v.degree();
  if (static_cast<Index>(seen.size()) != total)
    throw InvalidProblem(
        "graph: every vertex end must be referenced exactly once");
}

CMatrix graph_scattering(const MetricGraph& g, double k) {
  g.validate();

  // Global slot layout: vertex by vertex, local slots in order.
  std::vector<Index> offset(g.vertices.size() + 1, 0);
  for (size_t v = 0; v < g.vertices.size(); ++v)
    offset[v + 1] = offset[v] + g.vertices[v].degree();
  const Index total = offset[g.vertices.size()];

  CMatrix s = CMatrix::Zero(total, total);
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    const CMatrix sv = star_scattering(g.vertices[v], k);
    s.block(offset[v], offset[v], sv.rows(), sv.cols()) = sv;
  }

  GraphContractionSpec spec;
  for (const InternalEdge& e : g.internal_edges)
    spec.pairs.push_back(
        {offset[static_cast<size_t>(e.end_a.vertex)] + e.end_a.slot,
         offset[static_cast<size_t>(e.end_b.vertex)] + e.end_b.slot,
         e.length});
  const CMatrix contracted = contract_scattering(s, spec, k);

  // Survivors are the leads, ordered by ascending global slot; reindex to
  // g.leads order.
  std::set<Index> taken;
  for (const LeadPair& pr : spec.pairs) {
    taken.insert(pr.lead_a);
    taken.insert(pr.lead_b);
  }
  std::vector<Index> survivors;
  for (Index i = 0; i < total; ++i)
    if (!taken.count(i)) survivors.push_back(i);

  const Index n_leads = static_cast<Index>(g.leads.size());
  std::vector<Index> pos(static_cast<size_t>(n_leads));
  for (Index i = 0; i < n_leads; ++i) {
    const EdgeEnd& e = g.leads[static_cast<size_t>(i)];
    const Index gid = offset[static_cast<size_t>(e.vertex)] + e.slot;
    const auto it = std::lower_bound(survivors.begin(), survivors.end(), gid);
    pos[static_cast<size_t>(i)] =
        static_cast<Index>(it - survivors.begin());
  }
  CMatrix out(n_leads, n_leads);
  for (Index r = 0; r < n_leads; ++r)
    for (Index c = 0; c < n_leads; ++c)
      out(r, c) = contracted(pos[static_cast<size_t>(r)],
                             pos[static_cast<size_t>(c)]);
  return out;
}

std::vector<SweepRow> sweep(const MetricGraph& g,
                            const std::vector<double>& k_values) {
  g.validate();
  std::vector<SweepRow> rows;
  rows.reserve(k_values.size());
  for (double k : k_values) {
    SweepRow row;
    row.k = k;
    try {
      row.s = graph_scattering(g, k);
    } catch (const SingularMatrix&) {
      row.resonant = true;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

VertexConditions dirichlet_vertex(Index degree) {
  return {CMatrix::Identity(degree, degree), CMatrix::Zero(degree, degree)};
}

VertexConditions neumann_vertex(Index degree) {
  return {CMatrix::Zero(degree, degree), CMatrix::Identity(degree, degree)};
}

VertexConditions kirchhoff_vertex(Index degree) {
  if (degree < 1)
    throw InvalidProblem("kirchhoff_vertex: degree must be >= 1");
  CMatrix a = CMatrix::Zero(degree, degree);
  for (Index i = 0; i + 1 < degree; ++i) {
    a(i, i) = 1;
    a(i, i + 1) = -1;
  }
  CMatrix b = CMatrix::Zero(degree, degree);
  b.row(degree - 1).setOnes();
  return {a, b};
}

VertexConditions random_vertex(Index degree, std::uint64_t seed) {
  const CMatrix w = random_unitary(degree, seed);
  const CMatrix id = CMatrix::Identity(degree, degree);
  return {id - w, Complex(0, 1) * (id + w)};
}

}  // namespace qcontract
