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

#include "qcontract/unitary_contraction.hpp"

#include <cmath>
#include <sstream>

namespace qcontract {

namespace {

// Threshold for detecting unit-modulus eigenvalues of the internal feedback
// map. Kept fixed: the contraction is discontinuous exactly at the
// degenerate points, so detection must not track the caller's method
// tolerance.
constexpr double kStripTol = 1e-9;

// Input problems are accepted up to the unitarity defect a previous
// contraction is allowed to leave (10x the default method tolerance), so
// contractions can be chained.
constexpr double kValidateTol = 1e-8;

// U with the connection applied: G = U Omega as an isometry F1 -> F,
// expressed as an n x dim(F1) matrix.
CMatrix feedback_isometry(const UnitaryContractionProblem& p) {
  return p.u.rightCols(p.part_h.dim1) * p.omega;
}

CMatrix embed_f1(const CMatrix& cols_f1, Index n) {
  CMatrix out = CMatrix::Zero(n, cols_f1.cols());
  out.bottomRows(cols_f1.rows()) = cols_f1;
  return out;
}

}  // namespace

std::string to_string(ContractionMethod m) {
  switch (m) {
    case ContractionMethod::block_solve: return "block_solve";
    case ContractionMethod::resolvent: return "resolvent";
    case ContractionMethod::series: return "series";
    case ContractionMethod::power: return "power";
  }
  return "unknown";
}

void UnitaryContractionProblem::validate(double tol) const {
  if (!all_finite(u) || !all_finite(omega))
    throw InvalidProblem("problem: non-finite matrix entries");
  if (u.rows() != u.cols()) throw InvalidProblem("problem: U must be square");
  if (part_h.dim0 < 0 || part_h.dim1 < 0 || part_f.dim0 < 0 ||
      part_f.dim1 < 0)
    throw InvalidProblem("problem: negative partition dimension");
  const Index n = u.rows();
  if (part_h.total() != n || part_f.total() != n)
    throw InvalidProblem("problem: partition dims must sum to dim(U)");
  if (part_h.dim1 != part_f.dim1)
    throw InvalidProblem("problem: dim H1 must equal dim F1");
  if (omega.rows() != part_h.dim1 || omega.cols() != part_f.dim1)
    throw InvalidProblem("problem: Omega must be dim H1 x dim F1");
  if (!is_unitary(u, tol))
    throw InvalidProblem("problem: U is not unitary within tolerance");
  if (!is_unitary(omega, tol))
    throw InvalidProblem("problem: Omega is not unitary within tolerance");
}

InvariantSubspaces invariant_subspaces(const UnitaryContractionProblem& p,
                                       double tol) {
  const Index n = p.u.rows();
  const Index f1 = p.part_f.dim1;

  InvariantSubspaces out;
  if (f1 == 0) {
    out.v_basis = CMatrix(n, 0);
    out.v1_basis = CMatrix(n, 0);
    return out;
  }

  const CMatrix g = feedback_isometry(p);  // n x f1
  const CMatrix u11t = g.bottomRows(f1);   // F1 U Omega F1

  // V1 = ker(I - U~11). For unitary U, Omega the kernel coincides with the
  // fixed-point space of U Omega inside F1.
  const CMatrix v1 =
      nullspace(CMatrix::Identity(f1, f1) - u11t, tol);

  // Candidates for V: eigenvectors of U~11 with unit-modulus eigenvalue.
  // V1 vectors are added so V always contains V1.
  Eigen::ComplexEigenSolver<CMatrix> es(u11t);
  std::vector<Index> selected;
  for (Index i = 0; i < f1; ++i)
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) <= tol)
      selected.push_back(i);

  CMatrix cand(f1, static_cast<Index>(selected.size()) + v1.cols());
  for (Index j = 0; j < static_cast<Index>(selected.size()); ++j)
    cand.col(j) = es.eigenvectors().col(selected[static_cast<size_t>(j)]);
  cand.rightCols(v1.cols()) = v1;
  CMatrix w = orthonormal_columns(cand, 1e-10);

  // Stabilize: keep only the part of the candidate span that U Omega maps
  // back into itself. Each pass solves {v in span(w) : G v in span(w)}.
  while (w.cols() > 0) {
    const CMatrix gw = g * w;                       // n x k, F coords
    const CMatrix wf = embed_f1(w, n);  // span(w) embedded in F
    const CMatrix resid = gw - wf * (wf.adjoint() * gw);
    const CMatrix ns = nullspace(resid, tol);
    if (ns.cols() == w.cols()) break;
    w = orthonormal_columns(w * ns, 1e-10);
  }

  out.v_basis = embed_f1(w, n);
  out.v1_basis = embed_f1(v1, n);
  return out;
}

StrippedProblem strip_decoupled(const UnitaryContractionProblem& p,
                                double tol) {
  const Index n = p.u.rows();
  const Index h0 = p.part_h.dim0;
  const Index h1 = p.part_h.dim1;
  const Index f0 = p.part_f.dim0;
  const Index f1 = p.part_f.dim1;

  StrippedProblem out;
  out.removed = invariant_subspaces(p, tol);
  const Index v = out.removed.v_basis.cols();
  if (v == 0) {
    out.problem = p;
    out.domain_basis = CMatrix::Identity(n, n);
    out.codomain_basis = CMatrix::Identity(n, n);
    return out;
  }

  const CMatrix w = out.removed.v_basis.bottomRows(f1);  // F1 coords
  const CMatrix f1_keep = orthonormal_complement(w, f1);
  const CMatrix omega_w = p.omega * w;  // basis of Omega V inside H1
  const CMatrix h1_keep = orthonormal_complement(omega_w, h1);

  CMatrix bh = CMatrix::Zero(n, n - v);
  bh.topLeftCorner(h0, h0) = CMatrix::Identity(h0, h0);
  bh.bottomRightCorner(h1, h1 - v) = h1_keep;

  CMatrix bf = CMatrix::Zero(n, n - v);
  bf.topLeftCorner(f0, f0) = CMatrix::Identity(f0, f0);
  bf.bottomRightCorner(f1, f1 - v) = f1_keep;

  out.problem.u = bf.adjoint() * p.u * bh;
  out.problem.omega = h1_keep.adjoint() * p.omega * f1_keep;
  out.problem.part_h = Partition{h0, h1 - v};
  out.problem.part_f = Partition{f0, f1 - v};
  out.domain_basis = bh;
  out.codomain_basis = bf;
  return out;
}

ContractionResult contract_unitary(const UnitaryContractionProblem& p,
                                   ContractionMethod method, double tol,
                                   Index max_terms) {
  if (tol <= 0) throw InvalidProblem("contract_unitary: tol must be > 0");
  if (max_terms < 1)
    throw InvalidProblem("contract_unitary: max_terms must be >= 1");
  p.validate(kValidateTol);

  const StrippedProblem sp = strip_decoupled(p, kStripTol);
  const UnitaryContractionProblem& q = sp.problem;
  const Index h0 = q.part_h.dim0;
  const Index f0 = q.part_f.dim0;
  const Index d = q.part_f.dim1;
  const Index m = q.u.rows();

  const CMatrix g = feedback_isometry(q);
  const CMatrix u00 = q.u.topLeftCorner(f0, h0);
  const CMatrix u10 = q.u.bottomLeftCorner(d, h0);
  const CMatrix u01t = g.topRows(f0);
  const CMatrix u11t = g.bottomRows(d);

  const double conv_n =
      (d > 0) ? spectral_norm(matrix_power(u11t, d)) : 0.0;

  ContractionResult res;
  res.convergence_n = conv_n;
  res.v_basis = sp.removed.v_basis;
  res.v1_basis = sp.removed.v1_basis;

  ContractionMethod actual = method;
  if ((method == ContractionMethod::series ||
       method == ContractionMethod::power) &&
      conv_n >= 1.0 - kStripTol)
    actual = ContractionMethod::block_solve;
  res.method = actual;

  switch (actual) {
    case ContractionMethod::block_solve: {
      if (d == 0) {
        res.s = u00;
      } else {
        const CMatrix x =
            solve_linear(CMatrix::Identity(d, d) - u11t, u10);
        res.s = u00 + u01t * x;
      }
      break;
    }
    case ContractionMethod::resolvent: {
      CMatrix lhs = CMatrix::Identity(m, m);
      lhs.rightCols(d) -= g;
      const CMatrix x = solve_linear(lhs, q.u.leftCols(h0));
      res.s = x.topRows(f0);
      break;
    }
    case ContractionMethod::series: {
      res.s = u00;
      res.terms_used = 1;
      if (d == 0) break;
      CMatrix y = u10;  // (U~11)^k U10
      double tail = 1.0;
      bool done = false;
      for (Index k = 1; k <= max_terms; ++k) {
        res.s += u01t * y;
        y = u11t * y;
        ++res.terms_used;
        tail = std::pow(conv_n, static_cast<double>(k / d));
        if (tail < tol || y.norm() <= tol * 1e-3) {
          done = true;
          break;
        }
      }
      if (!done)
        throw NotConverged("contract_unitary: series exceeded max_terms",
                           tail);
      break;
    }
    case ContractionMethod::power: {
      CMatrix x = q.u.leftCols(h0);  // (F0 + U Omega F1)^k U H0
      double delta = 0;
      bool done = false;
      for (Index k = 1; k <= max_terms; ++k) {
        CMatrix xn = CMatrix::Zero(m, h0);
        xn.topRows(f0) = x.topRows(f0);
        xn += g * x.bottomRows(d);
        delta = (xn - x).norm();
        x = xn;
        ++res.terms_used;
        if (delta <= tol) {
          done = true;
          break;
        }
      }
      if (!done)
        throw NotConverged("contract_unitary: power iteration exceeded "
                           "max_terms",
                           delta);
      res.s = x.topRows(f0);
      break;
    }
  }
  return res;
}

KrausSet kraus_operators(const UnitaryContractionProblem& p, double tail_tol,
                         Index max_terms) {
  if (tail_tol <= 0)
    throw InvalidProblem("kraus_operators: tail_tol must be > 0");
  p.validate(kValidateTol);

  const StrippedProblem sp = strip_decoupled(p, kStripTol);
  const UnitaryContractionProblem& q = sp.problem;
  const Index h0 = q.part_h.dim0;
  const Index f0 = q.part_f.dim0;
  const Index d = q.part_f.dim1;
  const CMatrix g = feedback_isometry(q);

  // Stripping the decoupled subspace leaves every term
  // F0 (U Omega F1)^{n-1} U H0 unchanged, so the truncation is computed on
  // the stripped problem where the tail decays geometrically.
  KrausSet set;
  CMatrix x = q.u.leftCols(h0);
  double defect = 0;
  for (Index n = 1; n <= max_terms; ++n) {
    set.ops.push_back(x.topRows(f0));
    const CMatrix b = x.bottomRows(d);  // the not-yet-exited component
    const double bn = spectral_norm(b);
    defect = bn * bn;  // I - sum A†A = B†B exactly
    if (defect <= tail_tol) {
      set.tail_bound = defect;
      return set;
    }
    x = g * b;
  }
  throw NotConverged("kraus_operators: tail bound not reached within "
                     "max_terms",
                     defect);
}

std::vector<CMatrix> povm(const KrausSet& k) {
  std::vector<CMatrix> out;
  out.reserve(k.ops.size());
  for (const CMatrix& a : k.ops) out.push_back(a.adjoint() * a);
  return out;
}

ReciprocityReport check_reciprocity(const UnitaryContractionProblem& p,
                                    double tol) {
  p.validate(kValidateTol);
  const Index n = p.u.rows();
  const Index h0 = p.part_h.dim0;
  const Index f0 = p.part_f.dim0;
  const Index f1 = p.part_f.dim1;

  ReciprocityReport rep;

  const ContractionResult first =
      contract_unitary(p, ContractionMethod::block_solve, tol * 1e-2);

  // Swap the sector roles: move the old sector-1 coordinates to the front
  // and contract the old sector 0 with connection (Omega . U)^{-1}.
  std::vector<Index> hperm(n), fperm(n);
  for (Index i = 0; i < n; ++i) {
    hperm[static_cast<size_t>(i)] = (i + h0) % n;
    fperm[static_cast<size_t>(i)] = (i + f0) % n;
  }
  CMatrix u2(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c)
      u2(r, c) = p.u(fperm[static_cast<size_t>(r)],
                     hperm[static_cast<size_t>(c)]);

  UnitaryContractionProblem p2;
  p2.u = u2;
  p2.omega = first.s.adjoint();  // (Omega . U)^{-1} : F0 -> H0
  p2.part_h = Partition{p.part_h.dim1, h0};
  p2.part_f = Partition{f1, f0};

  const ContractionResult second =
      contract_unitary(p2, ContractionMethod::block_solve, tol * 1e-2);

  rep.residual = spectral_norm(second.s - p.omega.adjoint());
  rep.reciprocal = rep.residual <= tol;

  // Geometric criterion: V1 fills all of F1 ∩ U H1, whose dimension is
  // dim F1 - rank(F1 U H0).
  rep.dim_v1 = invariant_subspaces(p, kStripTol).v1_basis.cols();
  rep.dim_f1_cap_uh1 =
      f1 - matrix_rank(p.u.bottomLeftCorner(f1, h0), 1e-9);
  rep.geometric = rep.dim_v1 == rep.dim_f1_cap_uh1;
  return rep;
}

NetworkAssembly assemble_network(const NetworkSpec& spec) {
  const int n_nodes = static_cast<int>(spec.nodes.size());
  if (n_nodes == 0)
    throw DimensionMismatch("network: at least one node required");

  for (int a = 0; a < n_nodes; ++a) {
    const NetworkNode& node = spec.nodes[static_cast<size_t>(a)];
    if (static_cast<int>(node.in_dims.size()) != n_nodes + 1 ||
        static_cast<int>(node.out_dims.size()) != n_nodes + 1) {
      std::ostringstream msg;
      msg << "network: node " << a + 1 << " must list dims for peers 0.."
          << n_nodes;
      throw DimensionMismatch(msg.str());
    }
    Index in_total = 0, out_total = 0;
    for (Index d : node.in_dims) {
      if (d < 0) throw DimensionMismatch("network: negative block dim");
      in_total += d;
    }
    for (Index d : node.out_dims) {
      if (d < 0) throw DimensionMismatch("network: negative block dim");
      out_total += d;
    }
    // Second constraint of the dimension rules: each node unitary is square.
    if (in_total != out_total || node.u.rows() != out_total ||
        node.u.cols() != in_total) {
      std::ostringstream msg;
      msg << "network: node " << a + 1 << " input dims sum to " << in_total
          << " but output dims sum to " << out_total << " (U is "
          << node.u.rows() << "x" << node.u.cols()
          << "); sums over peers must match";
      throw DimensionMismatch(msg.str());
    }
  }

  // First constraint: internal blocks must pair up, dim H_{to,from} =
  // dim F_{to,from}.
  for (int to = 1; to <= n_nodes; ++to)
    for (int from = 1; from <= n_nodes; ++from) {
      const Index hd =
          spec.nodes[static_cast<size_t>(to - 1)].in_dims[static_cast<size_t>(from)];
      const Index fd =
          spec.nodes[static_cast<size_t>(from - 1)].out_dims[static_cast<size_t>(to)];
      if (hd != fd) {
        std::ostringstream msg;
        msg << "network: dim H_{" << to << "," << from << "} = " << hd
            << " but dim F_{" << to << "," << from << "} = " << fd;
        throw DimensionMismatch(msg.str());
      }
      const auto it = spec.connections.find({to, from});
      if (hd > 0) {
        if (it == spec.connections.end()) {
          std::ostringstream msg;
          msg << "network: connection (" << to << "," << from
              << ") absent but block dimension is " << hd;
          throw DimensionMismatch(msg.str());
        }
        if (it->second.rows() != hd || it->second.cols() != fd) {
          std::ostringstream msg;
          msg << "network: connection (" << to << "," << from
              << ") must be " << hd << "x" << fd;
          throw DimensionMismatch(msg.str());
        }
      } else if (it != spec.connections.end() && it->second.size() != 0) {
        std::ostringstream msg;
        msg << "network: connection (" << to << "," << from
            << ") given for a zero-dimensional block";
        throw DimensionMismatch(msg.str());
      }
    }

  // Stacked coordinates: node-by-node, blocks within a node in peer order.
  // Domain blocks of node a: H_{a,beta}; codomain blocks: F_{beta,a}.
  std::vector<Index> node_h_offset(static_cast<size_t>(n_nodes) + 1, 0);
  std::vector<Index> node_f_offset(static_cast<size_t>(n_nodes) + 1, 0);
  Index total = 0;
  for (int a = 0; a < n_nodes; ++a) {
    node_h_offset[static_cast<size_t>(a)] = total;
    node_f_offset[static_cast<size_t>(a)] = total;
    total += spec.nodes[static_cast<size_t>(a)].u.rows();
  }

  auto h_block_offset = [&](int a, int beta) {  // a 1-based, beta 0-based peer
    Index off = node_h_offset[static_cast<size_t>(a - 1)];
    for (int b = 0; b < beta; ++b)
      off += spec.nodes[static_cast<size_t>(a - 1)].in_dims[static_cast<size_t>(b)];
    return off;
  };
  auto f_block_offset = [&](int to, int from) {  // F_{to,from} in node `from`
    Index off = node_f_offset[static_cast<size_t>(from - 1)];
    for (int b = 0; b < to; ++b)
      off += spec.nodes[static_cast<size_t>(from - 1)].out_dims[static_cast<size_t>(b)];
    return off;
  };

  NetworkAssembly out;
  auto& h_order = out.domain_order;
  auto& f_order = out.codomain_order;
  h_order.reserve(static_cast<size_t>(total));
  f_order.reserve(static_cast<size_t>(total));

  // Sector 0: external blocks, node order.
  for (int a = 1; a <= n_nodes; ++a) {
    const Index off = h_block_offset(a, 0);
    for (Index i = 0; i < spec.nodes[static_cast<size_t>(a - 1)].in_dims[0]; ++i)
      h_order.push_back(off + i);
  }
  for (int a = 1; a <= n_nodes; ++a) {
    const Index off = f_block_offset(0, a);
    for (Index i = 0; i < spec.nodes[static_cast<size_t>(a - 1)].out_dims[0]; ++i)
      f_order.push_back(off + i);
  }
  const Index h0 = static_cast<Index>(h_order.size());
  const Index f0 = static_cast<Index>(f_order.size());

  // Sector 1: internal blocks in (to, from) lexicographic order, identically
  // for H and F so the connection direct sum is block diagonal.
  std::vector<CMatrix> omega_blocks;
  for (int to = 1; to <= n_nodes; ++to)
    for (int from = 1; from <= n_nodes; ++from) {
      const Index dim =
          spec.nodes[static_cast<size_t>(to - 1)].in_dims[static_cast<size_t>(from)];
      if (dim == 0) continue;
      const Index hoff = h_block_offset(to, from);
      const Index foff = f_block_offset(to, from);
      for (Index i = 0; i < dim; ++i) h_order.push_back(hoff + i);
      for (Index i = 0; i < dim; ++i) f_order.push_back(foff + i);
      omega_blocks.push_back(spec.connections.at({to, from}));
    }

  CMatrix u_global = CMatrix::Zero(total, total);
  for (int a = 0; a < n_nodes; ++a) {
    const Index off = node_h_offset[static_cast<size_t>(a)];
    const Index sz = spec.nodes[static_cast<size_t>(a)].u.rows();
    u_global.block(off, off, sz, sz) = spec.nodes[static_cast<size_t>(a)].u;
  }

  CMatrix u(total, total);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c)
      u(r, c) = u_global(f_order[static_cast<size_t>(r)],
                         h_order[static_cast<size_t>(c)]);

  const Index d1 = total - h0;
  CMatrix omega = CMatrix::Zero(d1, d1);
  Index pos = 0;
  for (const CMatrix& blk : omega_blocks) {
    omega.block(pos, pos, blk.rows(), blk.cols()) = blk;
    pos += blk.rows();
  }

  out.problem.u = u;
  out.problem.omega = omega;
  out.problem.part_h = Partition{h0, total - h0};
  out.problem.part_f = Partition{f0, total - f0};
  out.problem.validate(kValidateTol);
  return out;
}

}  // namespace qcontract
