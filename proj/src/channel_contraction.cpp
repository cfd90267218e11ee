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

#include "qcontract/channel_contraction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace qcontract {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  if (a.size() == 0 || b.size() == 0)
    return CMatrix(a.rows() * b.rows(), a.cols() * b.cols());
  return Eigen::kroneckerProduct(a, b);
}

// Superoperator of the conjugation rho -> A rho A† for rectangular A.
Superoperator conjugation(const CMatrix& a) {
  Superoperator s;
  s.dim_in = a.cols();
  s.dim_out = a.rows();
  s.m = kron(a.conjugate(), a);
  return s;
}

// Injection of the selected sector into the full space (dim x block_dim).
CMatrix sector_injection(const Partition& part, int sector) {
  const Index off = sector == 0 ? 0 : part.dim0;
  const Index d = sector == 0 ? part.dim0 : part.dim1;
  CMatrix out = CMatrix::Zero(part.total(), d);
  out.block(off, 0, d, d) = CMatrix::Identity(d, d);
  return out;
}

// T~11 and friends, per the sector decomposition of the channel problem.
struct ChannelBlocks {
  Superoperator t00, t10;  // L(H0) -> L(Fj)
  Superoperator t01, t11;  // L(F1) -> L(Fj), connection already applied
};

ChannelBlocks channel_blocks(const ChannelContractionProblem& p) {
  const CMatrix ih0 = sector_injection(p.part_h, 0);
  const CMatrix ih1 = sector_injection(p.part_h, 1);
  const CMatrix if0 = sector_injection(p.part_f, 0);
  const CMatrix if1 = sector_injection(p.part_f, 1);

  const Superoperator embed_h0 = conjugation(ih0);
  const Superoperator embed_h1 = conjugation(ih1);
  const Superoperator restrict_f0 = conjugation(CMatrix(if0.adjoint()));
  const Superoperator restrict_f1 = conjugation(CMatrix(if1.adjoint()));

  ChannelBlocks blk;
  blk.t00 = compose(restrict_f0, compose(p.t, embed_h0));
  blk.t10 = compose(restrict_f1, compose(p.t, embed_h0));
  const Superoperator tr = compose(p.t, compose(embed_h1, p.r));
  blk.t01 = compose(restrict_f0, tr);
  blk.t11 = compose(restrict_f1, tr);
  return blk;
}

}  // namespace

void Superoperator::validate() const {
  if (dim_in < 0 || dim_out < 0)
    throw ShapeMismatch("superoperator: negative dimension");
  if (m.rows() != dim_out * dim_out || m.cols() != dim_in * dim_in)
    throw ShapeMismatch(
        "superoperator: matrix must be dim_out^2 x dim_in^2");
  if (!all_finite(m))
    throw ShapeMismatch("superoperator: non-finite entries");
}

CVector vec(const CMatrix& rho) {
  return Eigen::Map<const CVector>(rho.data(), rho.size());
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols)
    throw ShapeMismatch("unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

Superoperator superop_from_kraus(const std::vector<CMatrix>& ops) {
  if (ops.empty())
    throw ShapeMismatch("superop_from_kraus: empty Kraus list");
  const Index rows = ops.front().rows();
  const Index cols = ops.front().cols();
  Superoperator s;
  s.dim_in = cols;
  s.dim_out = rows;
  s.m = CMatrix::Zero(rows * rows, cols * cols);
  for (const CMatrix& a : ops) {
    if (a.rows() != rows || a.cols() != cols)
      throw ShapeMismatch("superop_from_kraus: Kraus operators must share "
                          "one shape");
    s.m += kron(a.conjugate(), a);
  }
  return s;
}

Superoperator identity_superop(Index d) {
  Superoperator s;
  s.dim_in = d;
  s.dim_out = d;
  s.m = CMatrix::Identity(d * d, d * d);
  return s;
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  if (a.dim_in != b.dim_out)
    throw ShapeMismatch("compose: inner superoperator dimensions differ");
  Superoperator s;
  s.dim_in = b.dim_in;
  s.dim_out = a.dim_out;
  s.m = a.m * b.m;
  return s;
}

CMatrix apply_superop(const Superoperator& t, const CMatrix& rho) {
  if (rho.rows() != t.dim_in || rho.cols() != t.dim_in)
    throw ShapeMismatch("apply_superop: operand must be dim_in x dim_in");
  return unvec(t.m * vec(rho), t.dim_out, t.dim_out);
}

CMatrix choi_matrix(const Superoperator& t) {
  const Index din = t.dim_in;
  const Index dout = t.dim_out;
  CMatrix choi = CMatrix::Zero(din * dout, din * dout);
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j)
      for (Index k = 0; k < dout; ++k)
        for (Index l = 0; l < dout; ++l)
          choi(i * dout + k, j * dout + l) = t.m(k + dout * l, i + din * j);
  return choi;
}

CptpReport is_cptp(const Superoperator& t, double tol) {
  t.validate();
  CptpReport rep;
  if (t.dim_in == 0 || t.dim_out == 0) {
    rep.cptp = true;
    return rep;
  }

  const CMatrix choi = choi_matrix(t);
  rep.choi_herm_residual = spectral_norm(choi - CMatrix(choi.adjoint()));
  const CMatrix herm = 0.5 * (choi + CMatrix(choi.adjoint()));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  rep.choi_min_eig = es.eigenvalues().minCoeff();

  const CMatrix id_out = CMatrix::Identity(t.dim_out, t.dim_out);
  const CMatrix back = unvec(CVector(t.m.adjoint() * vec(id_out)),
                             t.dim_in, t.dim_in);
  rep.tp_residual = spectral_norm(
      back - CMatrix::Identity(t.dim_in, t.dim_in));

  rep.cptp = rep.choi_min_eig >= -tol && rep.tp_residual <= tol &&
             rep.choi_herm_residual <= tol;
  return rep;
}

Superoperator decohere(const Superoperator& t, const Partition& part_h,
                       const Partition& part_f) {
  t.validate();
  if (t.dim_in != part_h.total() || t.dim_out != part_f.total())
    throw ShapeMismatch("decohere: partitions do not match superoperator "
                        "dimensions");
  const Index h = part_h.total();
  const Index f = part_f.total();
  CMatrix ph0 = CMatrix::Zero(h, h), ph1 = CMatrix::Zero(h, h);
  ph0.topLeftCorner(part_h.dim0, part_h.dim0).setIdentity();
  ph1.bottomRightCorner(part_h.dim1, part_h.dim1).setIdentity();
  CMatrix pf0 = CMatrix::Zero(f, f), pf1 = CMatrix::Zero(f, f);
  pf0.topLeftCorner(part_f.dim0, part_f.dim0).setIdentity();
  pf1.bottomRightCorner(part_f.dim1, part_f.dim1).setIdentity();

  Superoperator s;
  s.dim_in = t.dim_in;
  s.dim_out = t.dim_out;
  s.m = (kron(pf0.conjugate(), pf0) + kron(pf1.conjugate(), pf1)) * t.m *
        (kron(ph0.conjugate(), ph0) + kron(ph1.conjugate(), ph1));
  return s;
}

double trace_norm(const Superoperator& t) {
  t.validate();
  if (t.dim_in == 0) return 0.0;
  const CMatrix id_out = CMatrix::Identity(t.dim_out, t.dim_out);
  const CMatrix back = unvec(CVector(t.m.adjoint() * vec(id_out)),
                             t.dim_in, t.dim_in);
  const CMatrix herm = 0.5 * (back + CMatrix(back.adjoint()));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  return es.eigenvalues().maxCoeff();
}

void ChannelContractionProblem::validate(double tol) const {
  t.validate();
  r.validate();
  if (part_h.dim0 < 0 || part_h.dim1 < 0 || part_f.dim0 < 0 ||
      part_f.dim1 < 0)
    throw InvalidProblem("channel problem: negative partition dimension");
  if (t.dim_in != part_h.total() || t.dim_out != part_f.total())
    throw InvalidProblem("channel problem: T dims must match partitions");
  if (r.dim_in != part_f.dim1 || r.dim_out != part_h.dim1)
    throw InvalidProblem(
        "channel problem: R must map L(F1) -> L(H1)");
  const CptpReport trep = is_cptp(t, tol);
  if (!trep.cptp)
    throw InvalidProblem("channel problem: T is not CPTP within tolerance");
  const CptpReport rrep = is_cptp(r, tol);
  if (!rrep.cptp)
    throw InvalidProblem("channel problem: R is not CPTP within tolerance");
}

ChannelContractionResult contract_channel(const ChannelContractionProblem& p,
                                          ContractionMethod method,
                                          double tol, Index max_terms) {
  if (tol <= 0) throw InvalidProblem("contract_channel: tol must be > 0");
  if (max_terms < 1)
    throw InvalidProblem("contract_channel: max_terms must be >= 1");
  if (method == ContractionMethod::block_solve)
    throw InvalidProblem(
        "contract_channel: block_solve is not defined for channels; use "
        "series, resolvent or power");
  p.validate();

  const Index h0 = p.part_h.dim0;
  const Index f0 = p.part_f.dim0;
  const Index f1 = p.part_f.dim1;
  const ChannelBlocks blk = channel_blocks(p);

  ChannelContractionResult res;
  res.s.dim_in = h0;
  res.s.dim_out = f0;

  auto finish_trace_ratio = [&](const CMatrix& sigma1_sum) {
    // Tr(sigma1)/Tr(rho0) evaluated at the maximally mixed input.
    if (h0 == 0 || f1 == 0) return 0.0;
    const CMatrix rho = CMatrix::Identity(h0, h0) / static_cast<double>(h0);
    const CMatrix s1 = unvec(CVector(sigma1_sum * vec(rho)), f1, f1);
    return s1.trace().real();
  };

  // Decoupled case: nothing ever enters the internal sector and the series
  // terminates after its first term.
  const double t10_norm = (f1 == 0) ? 0.0 : trace_norm(blk.t10);
  if (f1 == 0 || t10_norm <= 1e-14) {
    res.s = blk.t00;
    res.terms_used = 1;
    res.converged = true;
    res.trace_ratio = 0.0;
    return res;
  }

  // Convergence gate: the trace norm of the d-th power of the feedback
  // block must be below 1, or a positive invariant subspace exists and the
  // series certainly diverges.
  const Index d = f1 * f1;
  const CMatrix zd = matrix_power(blk.t11.m, d);
  Superoperator zd_op{f1, f1, zd};
  const double nd = trace_norm(zd_op);
  if (nd >= 1.0 - tol)
    throw NotConverged(
        "contract_channel: ||(T~11)^d||_t >= 1; a positive invariant "
        "subspace forces divergence",
        nd, /*pos_inv=*/true);

  switch (method) {
    case ContractionMethod::series: {
      CMatrix s = blk.t00.m;
      CMatrix y = blk.t10.m;               // (T~11)^k T10
      CMatrix sigma1_sum = blk.t10.m;      // sum_k (T~11)^k T10
      res.terms_used = 1;
      bool done = false;
      double tail = 0;
      for (Index k = 1; k <= max_terms; ++k) {
        s += blk.t01.m * y;
        y = blk.t11.m * y;
        sigma1_sum += y;
        ++res.terms_used;
        const double yt = trace_norm(Superoperator{h0, f1, y});
        tail = yt * static_cast<double>(d) / std::max(1.0 - nd, 1e-12);
        if (tail <= tol) {
          done = true;
          break;
        }
      }
      if (!done)
        throw NotConverged("contract_channel: series exceeded max_terms",
                           tail);
      res.s.m = s;
      res.tail_norm = tail;
      res.trace_ratio = finish_trace_ratio(sigma1_sum);
      break;
    }
    case ContractionMethod::resolvent: {
      const CMatrix inv_t10 = solve_linear(
          CMatrix::Identity(d, d) - blk.t11.m, blk.t10.m);
      res.s.m = blk.t00.m + blk.t01.m * inv_t10;
      res.terms_used = 0;
      res.trace_ratio = finish_trace_ratio(inv_t10);
      break;
    }
    case ContractionMethod::power: {
      // T~ = F0-conjugation + T' ∘ R ∘ F1-conjugation, iterated on
      // T' ∘ H0-conjugation.
      const Superoperator tprime = decohere(p.t, p.part_h, p.part_f);
      const Index f = p.part_f.total();
      CMatrix pf0 = CMatrix::Zero(f, f);
      pf0.topLeftCorner(f0, f0).setIdentity();
      const CMatrix if1 = sector_injection(p.part_f, 1);
      const CMatrix ih1 = sector_injection(p.part_h, 1);
      const CMatrix r_ext = conjugation(ih1).m * p.r.m *
                            conjugation(CMatrix(if1.adjoint())).m;
      const CMatrix tstep =
          conjugation(pf0).m + tprime.m * r_ext;

      CMatrix x = tprime.m * conjugation(sector_injection(p.part_h, 0)).m;
      bool done = false;
      double delta = 0;
      for (Index k = 1; k <= max_terms; ++k) {
        const CMatrix xn = tstep * x;
        delta = (xn - x).norm();
        x = xn;
        ++res.terms_used;
        if (delta <= tol) {
          done = true;
          break;
        }
      }
      if (!done)
        throw NotConverged(
            "contract_channel: power iteration exceeded max_terms", delta);
      const CMatrix if0 = sector_injection(p.part_f, 0);
      res.s.m = conjugation(CMatrix(if0.adjoint())).m * x;
      res.tail_norm = delta;
      const CMatrix inv_t10 = solve_linear(
          CMatrix::Identity(d, d) - blk.t11.m, blk.t10.m);
      res.trace_ratio = finish_trace_ratio(inv_t10);
      break;
    }
    default:
      break;
  }
  res.converged = true;
  return res;
}

Index positive_invariant_dim(const Superoperator& t11, double tol) {
  t11.validate();
  if (t11.dim_in != t11.dim_out)
    throw ShapeMismatch("positive_invariant_dim: map must be an "
                        "endomorphism");
  const Index dd = t11.dim_in;
  if (dd == 0) return 0;
  const Index d = dd * dd;

  const CMatrix zd = matrix_power(t11.m, d);
  const double nd = trace_norm(Superoperator{dd, dd, zd});
  if (nd < 1.0 - tol) return 0;

  // Densities supported on the top eigenspace of (t11^d)†(I) keep unit
  // trace along the whole orbit; their orbits span a positive invariant
  // subspace, giving a certified lower bound on its dimension.
  const CMatrix back = unvec(CVector(zd.adjoint() * vec(
                                 CMatrix::Identity(dd, dd))),
                             dd, dd);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(
      0.5 * (back + CMatrix(back.adjoint())));
  std::vector<CVector> top;
  for (Index i = 0; i < dd; ++i)
    if (es.eigenvalues()(i) >= 1.0 - 100 * tol)
      top.push_back(es.eigenvectors().col(i));
  if (top.empty()) return 1;  // norm says invariant, eigenbasis borderline

  // Positive generators spanning L(top eigenspace).
  std::vector<CMatrix> gens;
  for (size_t a = 0; a < top.size(); ++a) {
    gens.push_back(top[a] * top[a].adjoint());
    for (size_t b = a + 1; b < top.size(); ++b) {
      const CVector plus = (top[a] + top[b]) / std::sqrt(2.0);
      const CVector imag = (top[a] + Complex(0, 1) * top[b]) / std::sqrt(2.0);
      gens.push_back(plus * plus.adjoint());
      gens.push_back(imag * imag.adjoint());
    }
  }

  CMatrix orbit(d, static_cast<Index>(gens.size()) * (d + 1));
  Index col = 0;
  for (const CMatrix& g : gens) {
    CVector v = vec(g);
    for (Index k = 0; k <= d; ++k) {
      orbit.col(col++) = v;
      v = t11.m * v;
    }
  }
  return matrix_rank(orbit.leftCols(col), 1e-9);
}

SampleResult sample_contraction(const ChannelContractionProblem& p,
                                const CMatrix& rho0, Index trajectories,
                                std::uint64_t seed, Index max_steps) {
  p.validate();
  if (trajectories < 1)
    throw InvalidProblem("sample_contraction: need at least one trajectory");
  if (max_steps < 1)
    throw InvalidProblem("sample_contraction: max_steps must be >= 1");
  const Index h0 = p.part_h.dim0;
  const Index h1 = p.part_h.dim1;
  const Index f0 = p.part_f.dim0;
  const Index f1 = p.part_f.dim1;
  const Index h = p.part_h.total();
  if (rho0.rows() != h0 || rho0.cols() != h0)
    throw InvalidProblem("sample_contraction: rho0 must be dim H0 square");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho0.trace().imag()) > 1e-8)
    throw InvalidProblem("sample_contraction: rho0 must have unit trace");
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        0.5 * (rho0 + CMatrix(rho0.adjoint())));
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw InvalidProblem(
          "sample_contraction: rho0 must be positive semidefinite");
  }

  SampleResult out;
  out.trajectories = trajectories;
  out.stop_histogram.assign(static_cast<size_t>(max_steps) + 1, 0);
  CMatrix acc = CMatrix::Zero(f0, f0);

  for (Index traj = 0; traj < trajectories; ++traj) {
    // Independent, scheduling-free stream per trajectory.
    std::seed_seq sseq{static_cast<std::uint64_t>(seed),
                       static_cast<std::uint64_t>(traj)};
    std::mt19937_64 rng(sseq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    CMatrix state = CMatrix::Zero(h, h);
    state.topLeftCorner(h0, h0) = rho0;
    bool stopped = false;
    for (Index step = 1; step <= max_steps; ++step) {
      const CMatrix sigma = apply_superop(p.t, state);
      const double p0 = sigma.topLeftCorner(f0, f0).trace().real();
      const double p1 = sigma.bottomRightCorner(f1, f1).trace().real();
      const double total = p0 + p1;
      if (total <= 0) break;  // numerically dead branch; counts as censored
      if (unif(rng) * total < p0) {
        acc += sigma.topLeftCorner(f0, f0) / p0;
        ++out.stop_histogram[static_cast<size_t>(step)];
        stopped = true;
        break;
      }
      const CMatrix sigma1 = sigma.bottomRightCorner(f1, f1) / p1;
      const CMatrix rho1 = apply_superop(p.r, sigma1);
      state.setZero();
      state.bottomRightCorner(h1, h1) = rho1;
    }
    if (!stopped) ++out.censored;
  }

  out.sigma0 = acc / static_cast<double>(trajectories);
  return out;
}

ChannelContractionProblem unitary_mixture_problem(
    const UnitaryMixtureSpec& spec) {
  const Index dims_h[2] = {spec.part_h.dim0, spec.part_h.dim1};
  const Index dims_f[2] = {spec.part_f.dim0, spec.part_f.dim1};
  const Index h = spec.part_h.total();
  const Index f = spec.part_f.total();

  double col_sums[2] = {0.0, 0.0};
  Superoperator t;
  t.dim_in = h;
  t.dim_out = f;
  t.m = CMatrix::Zero(f * f, h * h);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const auto& ws = spec.weights[j][k];
      const auto& us = spec.blocks[j][k];
      if (ws.size() != us.size())
        throw InvalidProblem("mixture: weight/block count mismatch");
      for (size_t m = 0; m < ws.size(); ++m) {
        if (ws[m] < 0)
          throw InvalidProblem("mixture: negative weight");
        const CMatrix& u = us[m];
        if (u.rows() != dims_f[j] || u.cols() != dims_h[k])
          throw InvalidProblem("mixture: block shape must be dim F_j x "
                               "dim H_k");
        if (!is_unitary(u, 1e-10))
          throw InvalidProblem("mixture: block is not unitary");
        // Embed H_k -> F_j inside the full spaces.
        CMatrix big = CMatrix::Zero(f, h);
        big.block(j == 0 ? 0 : dims_f[0], k == 0 ? 0 : dims_h[0],
                  dims_f[j], dims_h[k]) = u;
        t.m += ws[m] * Eigen::kroneckerProduct(big.conjugate(), big);
        col_sums[k] += ws[m];
      }
    }
  for (int k = 0; k < 2; ++k)
    if (dims_h[k] > 0 && std::abs(col_sums[k] - 1.0) > 1e-10)
      throw InvalidProblem(
          "mixture: weights feeding sector " + std::to_string(k) +
          " must sum to 1");

  if (spec.connection_weights.size() != spec.connection_blocks.size())
    throw InvalidProblem("mixture: connection weight/block count mismatch");
  double qsum = 0;
  Superoperator r;
  r.dim_in = dims_f[1];
  r.dim_out = dims_h[1];
  r.m = CMatrix::Zero(dims_h[1] * dims_h[1], dims_f[1] * dims_f[1]);
  for (size_t n = 0; n < spec.connection_weights.size(); ++n) {
    const double q = spec.connection_weights[n];
    if (q < 0) throw InvalidProblem("mixture: negative connection weight");
    const CMatrix& om = spec.connection_blocks[n];
    if (om.rows() != dims_h[1] || om.cols() != dims_f[1])
      throw InvalidProblem("mixture: connection must be dim H1 x dim F1");
    if (!is_unitary(om, 1e-10))
      throw InvalidProblem("mixture: connection is not unitary");
    r.m += q * Eigen::kroneckerProduct(om.conjugate(), om);
    qsum += q;
  }
  if (dims_f[1] > 0 && std::abs(qsum - 1.0) > 1e-10)
    throw InvalidProblem("mixture: connection weights must sum to 1");

  ChannelContractionProblem p;
  p.t = t;
  p.r = r;
  p.part_h = spec.part_h;
  p.part_f = spec.part_f;
  p.validate();
  return p;
}

}  // namespace qcontract
