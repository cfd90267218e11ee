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

#include "qcontract/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "qcontract/channel_contraction.hpp"
#include "qcontract/linalg.hpp"
#include "qcontract/operator_contraction.hpp"
#include "qcontract/quantum_graph.hpp"
#include "qcontract/unitary_contraction.hpp"

namespace qcontract::checks {

namespace {

CheckResult make_result(std::string name, double residual, double tol,
                        std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.passed = residual <= tol;
  r.detail = std::move(detail);
  return r;
}

// Compound criteria report the worst residual/tolerance ratio.
struct Worst {
  double ratio = 0;
  void add(double residual, double tol) {
    ratio = std::max(ratio, residual / tol);
  }
  void add_flag(bool ok) { ratio = std::max(ratio, ok ? 0.0 : 2.0); }
};

Index pick(std::mt19937_64& rng, Index lo, Index hi) {
  std::uniform_int_distribution<Index> d(lo, hi);
  return d(rng);
}

double pick_real(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

Complex random_phase(std::mt19937_64& rng) {
  return std::exp(Complex(0, pick_real(rng, 0, 2 * M_PI)));
}

UnitaryContractionProblem random_problem(std::uint64_t seed, Index max_n,
                                         Index min_internal = 0) {
  std::mt19937_64 rng(seed);
  const Index n = pick(rng, 2, max_n);
  const Index h1 = pick(rng, min_internal, n - 1);
  UnitaryContractionProblem p;
  p.u = random_unitary(n, seed * 3 + 1);
  p.omega = random_unitary(h1, seed * 3 + 2);
  p.part_h = Partition{n - h1, h1};
  p.part_f = p.part_h;
  return p;
}

// Reference solver for the defining equations: assemble the raw joint
// system in the unknowns (phi0, phi1, psi1) — (n + dim F1)-dimensional —
// and take the minimum-norm solution, which sets the undetermined
// component along the fixed-point space to zero. Independent of the
// contraction code paths.
CMatrix brute_force_contraction(const UnitaryContractionProblem& p) {
  const Index n = p.u.rows();
  const Index h0 = p.part_h.dim0;
  const Index h1 = p.part_h.dim1;
  const Index f0 = p.part_f.dim0;
  const Index f1 = p.part_f.dim1;
  CMatrix m = CMatrix::Zero(n + h1, n + h1);
  // phi0 + phi1 - U psi1 = U psi0
  m.topLeftCorner(n, f0) = CMatrix::Identity(n, n).leftCols(f0);
  m.block(0, f0, n, f1) = CMatrix::Identity(n, n).rightCols(f1);
  m.topRightCorner(n, h1) = -p.u.rightCols(h1);
  // psi1 - Omega phi1 = 0
  m.block(n, f0, h1, f1) = -p.omega;
  m.bottomRightCorner(h1, h1) = CMatrix::Identity(h1, h1);
  CMatrix rhs = CMatrix::Zero(n + h1, h0);
  rhs.topRows(n) = p.u.leftCols(h0);
  const CMatrix x = m.completeOrthogonalDecomposition().solve(rhs);
  return x.topRows(f0);
}

UnitaryContractionProblem example1_problem(Complex t, Complex r, Complex w,
                                           Complex om) {
  UnitaryContractionProblem p;
  p.u = CMatrix(2, 2);
  p.u << t, -w * std::conj(r), r, w * std::conj(t);
  p.omega = CMatrix::Constant(1, 1, om);
  p.part_h = Partition{1, 1};
  p.part_f = Partition{1, 1};
  return p;
}

// U with U H1 inside F0: reciprocity holds no matter the connection.
UnitaryContractionProblem uh1_in_f0_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index n = pick(rng, 4, 10);
  const Index h1 = pick(rng, 1, n / 2);
  const Index h0 = n - h1;
  const Index f0 = n - h1;
  CMatrix c1 = CMatrix::Zero(n, h1);
  c1.topRows(f0) = random_unitary(f0, seed * 5 + 1).leftCols(h1);
  const CMatrix c0 =
      orthonormal_complement(c1, n) * random_unitary(h0, seed * 5 + 2);
  UnitaryContractionProblem p;
  p.u = CMatrix(n, n);
  p.u.leftCols(h0) = c0;
  p.u.rightCols(h1) = c1;
  p.omega = random_unitary(h1, seed * 5 + 3);
  p.part_h = Partition{h0, h1};
  p.part_f = Partition{f0, h1};
  return p;
}

// Block-diagonal U (both sectors decoupled), with U1 Omega kept away from
// the identity so reciprocity fails.
UnitaryContractionProblem decoupled_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index h0 = pick(rng, 1, 4);
  const Index h1 = pick(rng, 1, 4);
  const CMatrix u1 = random_unitary(h1, seed * 7 + 1);
  CMatrix omega;
  for (std::uint64_t attempt = 0;; ++attempt) {
    omega = random_unitary(h1, seed * 7 + 2 + attempt);
    if (spectral_norm(u1 * omega - CMatrix::Identity(h1, h1)) > 0.1) break;
  }
  UnitaryContractionProblem p;
  p.u = CMatrix::Zero(h0 + h1, h0 + h1);
  p.u.topLeftCorner(h0, h0) = random_unitary(h0, seed * 7 + 3);
  p.u.bottomRightCorner(h1, h1) = u1;
  p.omega = omega;
  p.part_h = Partition{h0, h1};
  p.part_f = p.part_h;
  return p;
}

// Random CPTP map via a Stinespring block of a Haar unitary.
std::vector<CMatrix> random_kraus(Index d, Index env, std::uint64_t seed) {
  const CMatrix w = random_unitary(d * env, seed);
  std::vector<CMatrix> ops;
  for (Index e = 0; e < env; ++e) {
    CMatrix k(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) k(i, j) = w(i * env + e, j * env + 0);
    ops.push_back(k);
  }
  return ops;
}

ChannelContractionProblem unitary_pair_channel(
    const UnitaryContractionProblem& p) {
  ChannelContractionProblem c;
  c.t = superop_from_kraus({p.u});
  c.r = superop_from_kraus({p.omega});
  c.part_h = p.part_h;
  c.part_f = p.part_f;
  return c;
}

// The inconsistent channel pair: T(rho) = Tr(rho) |1><1| with identity
// connection on a 1|1 split.
ChannelContractionProblem counterexample_channel() {
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(1, 0) = 1;
  k1(1, 1) = 1;
  ChannelContractionProblem p;
  p.t = superop_from_kraus({k0, k1});
  p.r = identity_superop(1);
  p.part_h = Partition{1, 1};
  p.part_f = Partition{1, 1};
  return p;
}

// Two-block random-unitary mixture with the given sector weights.
ChannelContractionProblem mixture_instance(double p00, double p10, double p01,
                                           double p11, Index d,
                                           std::uint64_t seed) {
  UnitaryMixtureSpec spec;
  spec.part_h = Partition{d, d};
  spec.part_f = Partition{d, d};
  const double w[2][2] = {{p00, p01}, {p10, p11}};
  std::uint64_t s = seed;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      if (w[j][k] <= 0) continue;
      // split each sector weight over two unitaries
      spec.weights[j][k] = {0.25 * w[j][k], 0.75 * w[j][k]};
      spec.blocks[j][k] = {random_unitary(d, ++s), random_unitary(d, ++s)};
    }
  spec.connection_weights = {0.5, 0.5};
  spec.connection_blocks = {random_unitary(d, ++s), random_unitary(d, ++s)};
  return unitary_mixture_problem(spec);
}

MetricGraph interval_graph(double length) {
  MetricGraph g;
  g.vertices = {kirchhoff_vertex(2), kirchhoff_vertex(2)};
  g.internal_edges = {{{0, 1}, {1, 1}, length}};
  g.leads = {{0, 0}, {1, 0}};
  return g;
}

MetricGraph random_graph(std::uint64_t seed, double* k_out) {
  std::mt19937_64 rng(seed);
  MetricGraph g;
  const Index nv = pick(rng, 1, 6);
  std::vector<std::pair<Index, Index>> ends;
  for (Index v = 0; v < nv; ++v) {
    const Index d = pick(rng, 1, 4);
    switch (pick(rng, 0, 3)) {
      case 0: g.vertices.push_back(kirchhoff_vertex(d)); break;
      case 1: g.vertices.push_back(neumann_vertex(d)); break;
      case 2: g.vertices.push_back(dirichlet_vertex(d)); break;
      default: g.vertices.push_back(random_vertex(d, rng())); break;
    }
    for (Index s = 0; s < d; ++s) ends.push_back({v, s});
  }
  std::shuffle(ends.begin(), ends.end(), rng);
  const Index max_pairs =
      std::min<Index>(10, (static_cast<Index>(ends.size()) - 1) / 2);
  const Index n_pairs = max_pairs > 0 ? pick(rng, 0, max_pairs) : 0;
  size_t idx = 0;
  for (Index e = 0; e < n_pairs; ++e) {
    const auto a = ends[idx++];
    const auto b = ends[idx++];
    g.internal_edges.push_back(
        {{a.first, a.second}, {b.first, b.second}, pick_real(rng, 0.5, 2.0)});
  }
  for (; idx < ends.size(); ++idx)
    g.leads.push_back({ends[idx].first, ends[idx].second});
  *k_out = pick_real(rng, 0.5, 5.0);
  return g;
}

// ---------------------------------------------------------------------------
// Acceptance criteria
// ---------------------------------------------------------------------------

CheckResult crit1_unitarity() {
  double worst = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto p = random_problem(1000 + i, 16);
    const auto res =
        contract_unitary(p, ContractionMethod::block_solve, 1e-10);
    if (res.s.rows() == 0) continue;
    worst = std::max(worst,
                     spectral_norm(CMatrix(res.s.adjoint() * res.s) -
                                   CMatrix::Identity(res.s.cols(),
                                                     res.s.cols())));
  }
  return make_result("unitarity of contraction (500 random problems)", worst,
                     1e-8);
}

CheckResult crit2_method_agreement() {
  Worst w;
  const ContractionMethod methods[4] = {
      ContractionMethod::block_solve, ContractionMethod::resolvent,
      ContractionMethod::series, ContractionMethod::power};

  Index used = 0;
  for (std::uint64_t i = 0; used < 100 && i < 1000; ++i) {
    const auto p = random_problem(2000 + i, 10, 1);
    const auto probe =
        contract_unitary(p, ContractionMethod::block_solve, 1e-10);
    if (probe.convergence_n > 0.99) continue;
    ++used;
    CMatrix s[4];
    for (int m = 0; m < 4; ++m)
      s[m] = contract_unitary(p, methods[m], 1e-10).s;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        w.add(spectral_norm(s[a] - s[b]), 1e-8);
  }

  Index small_used = 0;
  for (std::uint64_t i = 0; small_used < 100 && i < 1000; ++i) {
    const auto p = random_problem(3000 + i, 4, 1);
    const auto probe =
        contract_unitary(p, ContractionMethod::block_solve, 1e-12);
    if (probe.convergence_n > 0.99) continue;
    ++small_used;
    const CMatrix ref = brute_force_contraction(p);
    for (const auto m : methods)
      w.add(spectral_norm(contract_unitary(p, m, 1e-12).s - ref), 1e-10);
  }
  // Degenerate instances: V1 nonzero, the reference minimum-norm solve must
  // still agree with the stripped path.
  for (std::uint64_t i = 0; i < 5; ++i) {
    std::mt19937_64 rng(3500 + i);
    const Complex omega = random_phase(rng);
    const Complex om = random_phase(rng);
    const auto p = example1_problem(omega * om, 0.0, omega, om);
    w.add(spectral_norm(
              contract_unitary(p, ContractionMethod::block_solve, 1e-12).s -
              brute_force_contraction(p)),
          1e-10);
  }
  std::ostringstream detail;
  detail << used << " instances at dims<=10, " << small_used
         << " brute-force instances at n<=4; scaled residual";
  return make_result("four-method agreement + brute-force reference",
                     w.ratio, 1.0, detail.str());
}

CheckResult crit3_closed_form() {
  Worst w;
  std::mt19937_64 rng(41);
  Index done = 0;
  while (done < 50) {
    const double tmod = pick_real(rng, 0, 1);
    const Complex t = tmod * random_phase(rng);
    const Complex r =
        std::sqrt(std::max(0.0, 1 - tmod * tmod)) * random_phase(rng);
    const Complex omega = random_phase(rng);
    const Complex om = random_phase(rng);
    if (std::abs(t - omega * om) <= 0.1) continue;
    ++done;
    const auto p = example1_problem(t, r, omega, om);
    const Complex expected =
        -(1.0 / (omega * om)) * (t - omega * om) / std::conj(t - omega * om);
    const auto res = contract_unitary(p, ContractionMethod::block_solve,
                                      1e-12);
    w.add(std::abs(res.s(0, 0) - expected), 1e-10);
  }
  // Degenerate point t = omega Omega (forces |t| = 1, r = 0): the value is
  // t, reached through the stripped branch.
  for (std::uint64_t i = 0; i < 10; ++i) {
    std::mt19937_64 rng2(77 + i);
    const Complex omega = random_phase(rng2);
    const Complex om = random_phase(rng2);
    const Complex t = omega * om;
    const auto p = example1_problem(t, 0.0, omega, om);
    const auto res =
        contract_unitary(p, ContractionMethod::block_solve, 1e-12);
    w.add(std::abs(res.s(0, 0) - t), 1e-12);
    w.add_flag(res.v1_basis.cols() == 1);
  }
  return make_result("two-level closed form incl. degenerate branch",
                     w.ratio, 1.0, "scaled residual");
}

CheckResult crit4_algebraic_laws() {
  Worst w;

  // Sequential contraction.
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::mt19937_64 rng(4000 + i);
    const Index a = pick(rng, 1, 4);
    const Index b = pick(rng, 1, 3);
    const Index c = pick(rng, 1, 3);
    const Index n = a + b + c;
    const CMatrix u = random_unitary(n, 40000 + i);
    const CMatrix om1 = random_unitary(b, 41000 + i);
    const CMatrix om2 = random_unitary(c, 42000 + i);

    UnitaryContractionProblem joint;
    joint.u = u;
    joint.omega = CMatrix::Zero(b + c, b + c);
    joint.omega.topLeftCorner(b, b) = om1;
    joint.omega.bottomRightCorner(c, c) = om2;
    joint.part_h = Partition{a, b + c};
    joint.part_f = joint.part_h;
    const CMatrix s_joint =
        contract_unitary(joint, ContractionMethod::block_solve, 1e-11).s;

    UnitaryContractionProblem step2{u, om2, Partition{a + b, c},
                                    Partition{a + b, c}};
    const CMatrix s2 =
        contract_unitary(step2, ContractionMethod::block_solve, 1e-11).s;
    UnitaryContractionProblem step1{s2, om1, Partition{a, b},
                                    Partition{a, b}};
    const CMatrix s12 =
        contract_unitary(step1, ContractionMethod::block_solve, 1e-11).s;
    w.add(spectral_norm(s_joint - s12), 1e-8);
  }

  // Inverse law.
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = random_problem(4300 + i, 8, 1);
    const CMatrix s =
        contract_unitary(p, ContractionMethod::block_solve, 1e-11).s;
    UnitaryContractionProblem inv{CMatrix(p.u.adjoint()),
                                  CMatrix(p.omega.adjoint()), p.part_f,
                                  p.part_h};
    const CMatrix s_inv =
        contract_unitary(inv, ContractionMethod::block_solve, 1e-11).s;
    w.add(spectral_norm(s_inv - CMatrix(s.adjoint())), 1e-8);
  }

  // Chiral covariance.
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = random_problem(4600 + i, 8, 1);
    const Index h0 = p.part_h.dim0, h1 = p.part_h.dim1;
    const Index f0 = p.part_f.dim0, f1 = p.part_f.dim1;
    const CMatrix q0 = random_unitary(h0, 46000 + i);
    const CMatrix q1 = random_unitary(h1, 47000 + i);
    const CMatrix r0 = random_unitary(f0, 48000 + i);
    const CMatrix r1 = random_unitary(f1, 49000 + i);
    CMatrix qext = CMatrix::Zero(p.u.rows(), p.u.rows());
    qext.topLeftCorner(h0, h0) = q0;
    qext.bottomRightCorner(h1, h1) = q1;
    CMatrix rext = CMatrix::Zero(p.u.rows(), p.u.rows());
    rext.topLeftCorner(f0, f0) = r0;
    rext.bottomRightCorner(f1, f1) = r1;

    UnitaryContractionProblem lhs{CMatrix(rext * p.u * qext), p.omega,
                                  p.part_h, p.part_f};
    const CMatrix s_lhs =
        contract_unitary(lhs, ContractionMethod::block_solve, 1e-11).s;
    UnitaryContractionProblem mid{p.u, CMatrix(q1 * p.omega * r1), p.part_h,
                                  p.part_f};
    const CMatrix s_mid =
        contract_unitary(mid, ContractionMethod::block_solve, 1e-11).s;
    w.add(spectral_norm(s_lhs - CMatrix(r0 * s_mid * q0)), 1e-8);
  }

  // Tensor law.
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::mt19937_64 rng(4900 + i);
    const auto p = random_problem(5000 + i, 5, 1);
    const Index m = pick(rng, 1, 3);
    const CMatrix v = random_unitary(m, 51000 + i);
    UnitaryContractionProblem big;
    big.u = Eigen::kroneckerProduct(p.u, v);
    big.omega = Eigen::kroneckerProduct(p.omega, CMatrix(v.adjoint()));
    big.part_h = Partition{p.part_h.dim0 * m, p.part_h.dim1 * m};
    big.part_f = Partition{p.part_f.dim0 * m, p.part_f.dim1 * m};
    const CMatrix s_big =
        contract_unitary(big, ContractionMethod::block_solve, 1e-11).s;
    const CMatrix s =
        contract_unitary(p, ContractionMethod::block_solve, 1e-11).s;
    w.add(spectral_norm(s_big - CMatrix(Eigen::kroneckerProduct(s, v))),
          1e-8);
  }
  return make_result("sequential / inverse / chiral / tensor laws", w.ratio,
                     1.0, "scaled residual, 100 instances each");
}

CheckResult crit5_reciprocity() {
  Worst w;
  for (std::uint64_t i = 0; i < 70; ++i) {
    const auto rep = check_reciprocity(uh1_in_f0_instance(6000 + i), 1e-8);
    w.add_flag(rep.reciprocal && rep.geometric);
  }
  for (std::uint64_t i = 0; i < 70; ++i) {
    const auto rep = check_reciprocity(decoupled_instance(6100 + i), 1e-8);
    w.add_flag(!rep.reciprocal && !rep.geometric);
  }
  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto rep = check_reciprocity(random_problem(6200 + i, 8, 1), 1e-8);
    w.add_flag(rep.reciprocal == rep.geometric);
  }
  return make_result(
      "reciprocity: direct check agrees with geometric criterion (200 "
      "instances)",
      w.ratio, 1.0);
}

CheckResult crit6_kraus() {
  Worst w;
  Index used = 0;
  for (std::uint64_t i = 0; used < 100 && i < 1000; ++i) {
    const auto p = random_problem(7000 + i, 8, 1);
    const auto probe =
        contract_unitary(p, ContractionMethod::block_solve, 1e-10);
    if (probe.convergence_n > 0.95) continue;
    ++used;
    // The completeness defect is ||B_n||^2 while the coherent-sum tail is
    // of order ||B_n|| times a 1/(1 - N^{1/d}) factor, so the defect target
    // has to sit far below the 1e-7 criterion.
    const double tail_tol = 1e-20;
    const auto set = kraus_operators(p, tail_tol);
    const Index h0 = p.part_h.dim0;
    const Index f0 = p.part_f.dim0;

    CMatrix complete = CMatrix::Zero(h0, h0);
    CMatrix unital = CMatrix::Zero(f0, f0);
    CMatrix coherent = CMatrix::Zero(f0, h0);
    for (const CMatrix& a : set.ops) {
      complete += a.adjoint() * a;
      unital += a * a.adjoint();
      coherent += a;
    }
    w.add(spectral_norm(complete - CMatrix::Identity(h0, h0)), 1e-7);
    w.add(spectral_norm(unital - CMatrix::Identity(f0, f0)), 1e-7);
    w.add(spectral_norm(coherent - probe.s), 1e-7);

    // Adjoints are the Kraus operators of the inverse problem, term by term.
    UnitaryContractionProblem inv{CMatrix(p.u.adjoint()),
                                  CMatrix(p.omega.adjoint()), p.part_f,
                                  p.part_h};
    const auto inv_set = kraus_operators(inv, tail_tol);
    const size_t terms = std::min(set.ops.size(), inv_set.ops.size());
    for (size_t nn = 0; nn < terms; ++nn)
      w.add(spectral_norm(CMatrix(set.ops[nn].adjoint()) - inv_set.ops[nn]),
            1e-10);
  }
  return make_result("Kraus completeness, unitality, coherent sum, adjoint "
                     "identity",
                     w.ratio, 1.0, "scaled residual, 100 instances");
}

CheckResult crit7_graph_closed_forms() {
  Worst w;
  const double k = 1.3;

  w.add(spectral_norm(star_scattering(dirichlet_vertex(3), k) +
                      CMatrix::Identity(3, 3)),
        1e-12);
  w.add(spectral_norm(star_scattering(neumann_vertex(3), k) -
                      CMatrix::Identity(3, 3)),
        1e-12);
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  w.add(spectral_norm(star_scattering(kirchhoff_vertex(2), k) - swap),
        1e-12);

  const double l = 0.7;
  const MetricGraph interval = interval_graph(l);
  for (int i = 0; i < 100; ++i) {
    const double kk = 0.1 + 9.9 * i / 99.0;
    const Complex phase = std::exp(Complex(0, kk * l));
    CMatrix expected(2, 2);
    expected << 0, phase, phase, 0;
    w.add(spectral_norm(graph_scattering(interval, kk) - expected), 1e-10);
  }

  // Single Kirchhoff vertex with a self-loop on two of its three ends.
  MetricGraph loop;
  loop.vertices = {kirchhoff_vertex(3)};
  loop.internal_edges = {{{0, 1}, {0, 2}, 1.0}};
  loop.leads = {{0, 0}};
  for (int i = 0; i < 100; ++i) {
    const double kk = 0.3 + 5.5 * i / 99.0;
    const Complex om = std::exp(Complex(0, kk));
    if (std::abs(om - 1.0) < 0.05) continue;  // resonance at kl = 2 pi n
    const Complex expected = (om - 1.0 / 3.0) / (1.0 - om / 3.0);
    w.add(std::abs(graph_scattering(loop, kk)(0, 0) - expected), 1e-10);
  }
  w.add(std::abs(graph_scattering(loop, M_PI)(0, 0) - Complex(-1.0, 0.0)),
        1e-10);
  return make_result("graph closed forms (stars, interval, self-loop)",
                     w.ratio, 1.0, "scaled residual");
}

CheckResult crit8_graph_paths() {
  Worst w;
  for (std::uint64_t i = 0; i < 50; ++i) {
    double k = 0;
    const MetricGraph g = random_graph(8000 + i, &k);

    std::vector<Index> offset(g.vertices.size() + 1, 0);
    for (size_t v = 0; v < g.vertices.size(); ++v)
      offset[v + 1] = offset[v] + g.vertices[v].degree();
    GraphContractionSpec spec;
    for (const InternalEdge& e : g.internal_edges)
      spec.pairs.push_back(
          {offset[static_cast<size_t>(e.end_a.vertex)] + e.end_a.slot,
           offset[static_cast<size_t>(e.end_b.vertex)] + e.end_b.slot,
           e.length});

    for (int attempt = 0;; ++attempt) {
      try {
        CMatrix s0 = CMatrix::Zero(offset.back(), offset.back());
        for (size_t v = 0; v < g.vertices.size(); ++v) {
          const CMatrix sv = star_scattering(g.vertices[v], k);
          s0.block(offset[v], offset[v], sv.rows(), sv.cols()) = sv;
        }
        const CMatrix via_module = contract_scattering(s0, spec, k);
        const CMatrix via_block = contract_scattering_block(s0, spec, k);
        w.add(spectral_norm(via_module - via_block), 1e-9);

        // Order independence: contract pair by pair, forward and reversed.
        auto sequential = [&](bool reversed) {
          CMatrix cur = s0;
          std::vector<Index> ids(static_cast<size_t>(offset.back()));
          for (Index j = 0; j < offset.back(); ++j)
            ids[static_cast<size_t>(j)] = j;
          auto pairs = spec.pairs;
          if (reversed) std::reverse(pairs.begin(), pairs.end());
          for (const LeadPair& pr : pairs) {
            const auto pa =
                std::find(ids.begin(), ids.end(), pr.lead_a) - ids.begin();
            const auto pb =
                std::find(ids.begin(), ids.end(), pr.lead_b) - ids.begin();
            GraphContractionSpec one;
            one.pairs = {{static_cast<Index>(pa), static_cast<Index>(pb),
                          pr.length}};
            cur = contract_scattering(cur, one, k);
            std::vector<Index> next;
            for (size_t q = 0; q < ids.size(); ++q)
              if (static_cast<Index>(q) != pa && static_cast<Index>(q) != pb)
                next.push_back(ids[q]);
            ids = next;
          }
          return cur;
        };
        w.add(spectral_norm(sequential(false) - sequential(true)), 1e-8);
        break;
      } catch (const SingularMatrix&) {
        if (attempt > 20) throw;
        k += 0.0371;  // step off the resonance
      }
    }
  }
  return make_result("block formula vs contraction path + order "
                     "independence (50 graphs)",
                     w.ratio, 1.0, "scaled residual");
}

CheckResult crit9_channel_kraus() {
  Worst w;
  Index used = 0;
  for (std::uint64_t i = 0; used < 100 && i < 1000; ++i) {
    const auto p = random_problem(9000 + i, 6, 1);
    if (p.part_h.dim0 == 0) continue;
    const auto probe =
        contract_unitary(p, ContractionMethod::block_solve, 1e-10);
    if (probe.convergence_n > 0.95) continue;
    ++used;
    const auto chan = unitary_pair_channel(p);
    const auto res = contract_channel(chan, ContractionMethod::series, 1e-9);
    const auto kraus = kraus_operators(p, 1e-12);
    const Superoperator expected = superop_from_kraus(kraus.ops);
    w.add(spectral_norm(res.s.m - expected.m), 1e-7);
    const auto rep = is_cptp(res.s, 1e-8);
    w.add(-std::min(rep.choi_min_eig, 0.0), 1e-8);
    w.add(rep.tp_residual, 1e-8);
  }
  return make_result("channel contraction of unitary pairs matches the "
                     "Kraus channel and is CPTP (100 pairs)",
                     w.ratio, 1.0, "scaled residual");
}

CheckResult crit10_divergence() {
  Worst w;

  bool threw = false, flagged = false;
  try {
    contract_channel(counterexample_channel(), ContractionMethod::series,
                     1e-9, 10000);
  } catch (const NotConverged& e) {
    threw = true;
    flagged = e.positive_invariant;
  }
  w.add_flag(threw && flagged);

  threw = false;
  try {
    contract_channel(mixture_instance(0.6, 0.4, 0.0, 1.0, 2, 101),
                     ContractionMethod::series, 1e-9, 10000);
  } catch (const NotConverged& e) {
    threw = true;
    flagged = e.positive_invariant;
  }
  w.add_flag(threw && flagged);

  const double cases[3][4] = {
      {0.5, 0.5, 0.5, 0.5}, {0.7, 0.3, 0.4, 0.6}, {0.9, 0.1, 0.8, 0.2}};
  for (int c = 0; c < 3; ++c) {
    const double p00 = cases[c][0], p10 = cases[c][1];
    const double p01 = cases[c][2], p11 = cases[c][3];
    const auto res =
        contract_channel(mixture_instance(p00, p10, p01, p11, 2, 200 + c),
                         ContractionMethod::series, 1e-12);
    w.add_flag(res.converged);
    w.add(std::abs(res.trace_ratio - p10 / p01), 1e-8);
    // Trace preservation of the contracted channel at a random state.
    const CMatrix rho = CMatrix::Identity(2, 2) / 2.0;
    w.add(std::abs(apply_superop(res.s, rho).trace().real() - 1.0), 1e-8);
  }
  return make_result("divergence detection and mixture trace ratios",
                     w.ratio, 1.0);
}

CheckResult crit11_monte_carlo() {
  Worst w;
  const auto p_unit = example1_problem(0.6, 0.8, 1.0, 1.0);
  const auto chan = unitary_pair_channel(p_unit);
  const CMatrix rho0 = CMatrix::Identity(1, 1);
  const Index n_traj = 100000;
  const auto sample = sample_contraction(chan, rho0, n_traj, 20260810, 200);

  const auto exact = contract_channel(chan, ContractionMethod::series, 1e-12);
  const CMatrix sigma_exact = apply_superop(exact.s, rho0);
  // Entrywise within 3 standard errors. The stopped states are unit trace;
  // the only variance left in this estimate is the censoring mass.
  const double censor_rate =
      static_cast<double>(sample.censored) / static_cast<double>(n_traj);
  const double se_floor = 1e-9;
  w.add(std::abs(sample.sigma0(0, 0).real() - sigma_exact(0, 0).real()),
        3 * (censor_rate + se_floor) + 1e-6);

  // Stop-step histogram against the POVM weights 9/25, 256/625, ...
  std::vector<double> probs;
  probs.push_back(0.36);
  for (int n = 2; n <= 10; ++n)
    probs.push_back(0.4096 * std::pow(0.36, n - 2));
  for (size_t n = 1; n <= probs.size(); ++n) {
    const double pn = probs[n - 1];
    const double se = std::sqrt(pn * (1 - pn) / static_cast<double>(n_traj));
    const double emp = static_cast<double>(sample.stop_histogram[n]) /
                       static_cast<double>(n_traj);
    w.add(std::abs(emp - pn), 3 * se + 1e-9);
  }
  w.add_flag(sample.censored == 0);
  return make_result("Monte Carlo sampler matches exact channel and POVM "
                     "histogram (1e5 trajectories)",
                     w.ratio, 1.0);
}

CheckResult crit12_spectral_criteria() {
  Worst w;

  // Invariant-subspace criterion for unitaries on a subspace W.
  for (std::uint64_t i = 0; i < 200; ++i) {
    std::mt19937_64 rng(12000 + i);
    const Index n = pick(rng, 3, 8);
    const Index wd = pick(rng, 1, n - 1);
    const CMatrix basis = random_unitary(n, 120000 + i).leftCols(wd);
    const bool planted = i % 2 == 0;
    CMatrix u;
    if (planted) {
      CVector x = CVector::Zero(wd);
      for (Index q = 0; q < wd; ++q)
        x(q) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
      x.normalize();
      const CVector v = basis * x;
      CMatrix full(n, n);
      full.col(0) = v;
      full.rightCols(n - 1) = orthonormal_complement(v, n);
      CMatrix core = CMatrix::Zero(n, n);
      core(0, 0) = random_phase(rng);
      core.bottomRightCorner(n - 1, n - 1) =
          random_unitary(n - 1, 121000 + i);
      u = full * core * full.adjoint();
    } else {
      u = random_unitary(n, 122000 + i);
    }

    const CMatrix compressed = basis.adjoint() * u * basis;
    const double norm_d = spectral_norm(matrix_power(compressed, wd));
    const bool norm_verdict = norm_d >= 1.0 - 1e-8;

    // Eigendecomposition ground truth: some eigenvector of u lies in W.
    Eigen::ComplexEigenSolver<CMatrix> es(u);
    bool eig_verdict = false;
    for (Index q = 0; q < n; ++q) {
      const CVector ev = es.eigenvectors().col(q);
      if ((ev - basis * (basis.adjoint() * ev)).norm() <= 1e-7)
        eig_verdict = true;
    }
    w.add_flag(norm_verdict == eig_verdict && eig_verdict == planted);
  }

  // Positive-invariant-subspace criterion for CP maps.
  for (std::uint64_t i = 0; i < 200; ++i) {
    std::mt19937_64 rng(12500 + i);
    const Index f1 = pick(rng, 2, 3);
    const bool planted = i % 2 == 0;
    Superoperator t11;
    if (planted) {
      const Index a = pick(rng, 1, f1 - 1);
      CMatrix k1 = CMatrix::Zero(f1, f1), k2 = CMatrix::Zero(f1, f1);
      k1.topLeftCorner(a, a) = random_unitary(a, 125000 + i);
      k2.bottomRightCorner(f1 - a, f1 - a) =
          std::sqrt(pick_real(rng, 0.2, 0.8)) *
          random_unitary(f1 - a, 126000 + i);
      t11 = superop_from_kraus({k1, k2});
    } else {
      auto ops = random_kraus(f1, 2, 127000 + i);
      const double q = pick_real(rng, 0.3, 0.9);
      for (CMatrix& op : ops) op *= std::sqrt(q);
      t11 = superop_from_kraus(ops);
    }
    const bool norm_verdict = positive_invariant_dim(t11, 1e-9) > 0;
    const double rho =
        Eigen::ComplexEigenSolver<CMatrix>(t11.m).eigenvalues().cwiseAbs()
            .maxCoeff();
    const bool eig_verdict = rho >= 1.0 - 1e-8;
    w.add_flag(norm_verdict == eig_verdict && eig_verdict == planted);
  }
  return make_result("spectral invariant-subspace criteria vs "
                     "eigendecomposition (200 + 200 instances)",
                     w.ratio, 1.0);
}

}  // namespace

std::vector<CheckResult> acceptance_criteria() {
  return {crit1_unitarity(),      crit2_method_agreement(),
          crit3_closed_form(),    crit4_algebraic_laws(),
          crit5_reciprocity(),    crit6_kraus(),
          crit7_graph_closed_forms(), crit8_graph_paths(),
          crit9_channel_kraus(),  crit10_divergence(),
          crit11_monte_carlo(),   crit12_spectral_criteria()};
}

std::vector<CheckResult> check_linalg() {
  std::vector<CheckResult> out;

  double worst = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::mt19937_64 rng(100 + i);
    const Index n = pick(rng, 1, 12);
    worst = std::max(worst,
                     std::abs(spectral_norm(random_unitary(n, 200 + i)) - 1));
  }
  out.push_back(make_result("spectral norm of random unitaries is 1", worst,
                            1e-10));

  worst = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::mt19937_64 rng(300 + i);
    const Index n = pick(rng, 1, 10);
    CMatrix a(n, n), b(n, pick(rng, 1, 4));
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c)
        a(r, c) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    a += 3.0 * CMatrix::Identity(n, n);  // keep it well conditioned
    for (Index r = 0; r < b.rows(); ++r)
      for (Index c = 0; c < b.cols(); ++c)
        b(r, c) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    const CMatrix x = solve_linear(a, b);
    worst = std::max(worst, spectral_norm(a * x - b) /
                                std::max(1.0, spectral_norm(b)));
  }
  out.push_back(make_result("solve residual on well-conditioned systems",
                            worst, 1e-10));

  worst = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::mt19937_64 rng(400 + i);
    const Index n = pick(rng, 1, 8);
    CMatrix a(n, n), b(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) {
        a(r, c) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
        b(r, c) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
      }
    worst = std::max(worst, spectral_norm(a * b) -
                                spectral_norm(a) * spectral_norm(b));
  }
  out.push_back(make_result("spectral norm is submultiplicative", worst,
                            1e-12));

  bool reproducible = true;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const CMatrix u1 = random_unitary(7, 500 + i);
    const CMatrix u2 = random_unitary(7, 500 + i);
    reproducible = reproducible && (u1.array() == u2.array()).all();
  }
  out.push_back(make_result("random_unitary is seed-reproducible",
                            reproducible ? 0.0 : 1.0, 0.5));
  return out;
}

std::vector<CheckResult> check_unitary_contraction() {
  std::vector<CheckResult> out = {crit1_unitarity(), crit2_method_agreement(),
                                  crit3_closed_form(), crit4_algebraic_laws(),
                                  crit5_reciprocity(), crit6_kraus()};

  // One-way implication: with reciprocity satisfied, the reverse fixed-point
  // space fills F0 ∩ U H0.
  Worst w;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto p = uh1_in_f0_instance(6400 + i);
    const auto s =
        contract_unitary(p, ContractionMethod::block_solve, 1e-11).s;
    const Index n = p.u.rows();
    const Index h0 = p.part_h.dim0;
    const Index f0 = p.part_f.dim0;
    std::vector<Index> hperm(static_cast<size_t>(n)),
        fperm(static_cast<size_t>(n));
    for (Index q = 0; q < n; ++q) {
      hperm[static_cast<size_t>(q)] = (q + h0) % n;
      fperm[static_cast<size_t>(q)] = (q + f0) % n;
    }
    CMatrix u2(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c)
        u2(r, c) = p.u(fperm[static_cast<size_t>(r)],
                       hperm[static_cast<size_t>(c)]);
    UnitaryContractionProblem swapped{u2, CMatrix(s.adjoint()),
                                      Partition{p.part_h.dim1, h0},
                                      Partition{p.part_f.dim1, f0}};
    const Index dim_v1p =
        invariant_subspaces(swapped).v1_basis.cols();
    const Index dim_cap =
        f0 - matrix_rank(p.u.topRightCorner(f0, p.part_h.dim1), 1e-9);
    w.add_flag(dim_v1p == dim_cap);
  }
  out.push_back(make_result("reverse fixed-point space fills F0 ∩ U H0 "
                            "under reciprocity",
                            w.ratio, 1.0));
  return out;
}

std::vector<CheckResult> check_operator_contraction() {
  std::vector<CheckResult> out;
  Worst w;

  // Unitary specialization agrees with the unitary module.
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto p = random_problem(13000 + i, 6, 1);
    const auto probe =
        contract_unitary(p, ContractionMethod::block_solve, 1e-10);
    if (probe.convergence_n > 0.95) continue;
    OperatorContractionProblem op{p.u, p.omega, p.part_h, p.part_f};
    const auto res =
        contract_operator(op, ContractionMethod::series, 1e-12);
    w.add(spectral_norm(res.s - probe.s), 1e-10);
  }
  out.push_back(make_result("unitary specialization matches "
                            "contract_unitary",
                            w.ratio, 1.0, "scaled residual"));

  // Convergence of the internal series bounds the external one.
  Worst w2;
  for (std::uint64_t i = 0; i < 20; ++i) {
    std::mt19937_64 rng(13500 + i);
    const Index h0 = pick(rng, 1, 3), h1 = pick(rng, 1, 3);
    const Index f0 = pick(rng, 1, 3), f1 = h1;
    CMatrix a(f0 + f1, h0 + h1), b(h1, f1);
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c)
        a(r, c) = 0.5 * Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    for (Index r = 0; r < b.rows(); ++r)
      for (Index c = 0; c < b.cols(); ++c)
        b(r, c) = 0.5 * Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    OperatorContractionProblem p{a, b, Partition{h0, h1},
                                 Partition{f0, f1}};
    const CMatrix f0ab = a.topRows(f0).rightCols(h1) * b;
    const CMatrix f1ab = a.bottomRows(f1).rightCols(h1) * b;
    CMatrix phi1 = a.bottomRows(f1).leftCols(h0);
    const double bound_const = spectral_norm(f0ab);
    for (int n = 0; n < 10; ++n) {
      const CMatrix phi0_next = f0ab * phi1;
      w2.add(spectral_norm(phi0_next) -
                 bound_const * spectral_norm(phi1),
             1e-12);
      phi1 = f1ab * phi1;
    }
    (void)p;
  }
  out.push_back(make_result("internal-term norm bounds the next external "
                            "term",
                            w2.ratio, 1.0));

  // Convergence verdict does not depend on the norm used.
  Worst w3;
  for (std::uint64_t i = 0; i < 30; ++i) {
    std::mt19937_64 rng(13800 + i);
    const Index h0 = pick(rng, 1, 3), h1 = pick(rng, 1, 3);
    const Index f0 = pick(rng, 1, 3), f1 = h1;
    const double scale = (i % 2 == 0) ? 0.45 : 1.25;
    CMatrix a(f0 + f1, h0 + h1), b(h1, f1);
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c)
        a(r, c) =
            scale * Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    for (Index r = 0; r < b.rows(); ++r)
      for (Index c = 0; c < b.cols(); ++c)
        b(r, c) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    const CMatrix f1ab = a.bottomRows(f1).rightCols(h1) * b;
    CMatrix y = a.bottomRows(f1).leftCols(h0);
    bool conv_spectral = true, conv_maxabs = true;
    double ys = y.norm(), ym = y.cwiseAbs().maxCoeff();
    for (int n = 0; n < 60; ++n) {
      y = f1ab * y;
      const double ns = y.norm();
      const double nm = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
      if (n == 59) {
        conv_spectral = ns < ys;
        conv_maxabs = nm < ym;
      }
    }
    w3.add_flag(conv_spectral == conv_maxabs);
  }
  out.push_back(make_result("convergence verdict is norm-independent",
                            w3.ratio, 1.0));

  // Sufficiency: reported series convergence implies the series succeeds.
  Worst w4;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::mt19937_64 rng(14000 + i);
    const Index h0 = pick(rng, 1, 3), h1 = pick(rng, 1, 3);
    const Index f0 = pick(rng, 1, 3), f1 = h1;
    const double scale = pick_real(rng, 0.2, 1.4);
    CMatrix a(f0 + f1, h0 + h1), b(h1, f1);
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c)
        a(r, c) =
            scale * Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    for (Index r = 0; r < b.rows(); ++r)
      for (Index c = 0; c < b.cols(); ++c)
        b(r, c) = Complex(pick_real(rng, -1, 1), pick_real(rng, -1, 1));
    OperatorContractionProblem p{a, b, Partition{h0, h1},
                                 Partition{f0, f1}};
    if (!solvability_check(p, 1e-9).series_converges) continue;
    try {
      contract_operator(p, ContractionMethod::series, 1e-10);
      w4.add_flag(true);
    } catch (const NotConverged&) {
      w4.add_flag(false);
    }
  }
  out.push_back(make_result("series succeeds whenever the sufficiency "
                            "criterion reports convergence",
                            w4.ratio, 1.0));
  return out;
}

std::vector<CheckResult> check_channel_contraction() {
  std::vector<CheckResult> out = {crit9_channel_kraus(), crit10_divergence(),
                                  crit11_monte_carlo()};

  // Contraction only sees the decohered channel.
  Worst w;
  for (std::uint64_t i = 0; i < 20; ++i) {
    std::mt19937_64 rng(15000 + i);
    const Index h0 = pick(rng, 1, 2), h1 = pick(rng, 1, 2);
    auto ops = random_kraus(h0 + h1, 2, 150000 + i);
    ChannelContractionProblem p;
    p.t = superop_from_kraus(ops);
    p.r = superop_from_kraus(random_kraus(h1, 2, 151000 + i));
    p.part_h = Partition{h0, h1};
    p.part_f = p.part_h;
    ChannelContractionProblem pd = p;
    pd.t = decohere(p.t, p.part_h, p.part_f);
    try {
      const auto r1 = contract_channel(p, ContractionMethod::series, 1e-11);
      const auto r2 = contract_channel(pd, ContractionMethod::series, 1e-11);
      w.add(spectral_norm(r1.s.m - r2.s.m), 1e-10);
    } catch (const NotConverged&) {
      // both must agree on the verdict too
      bool threw = false;
      try {
        contract_channel(pd, ContractionMethod::series, 1e-11);
      } catch (const NotConverged&) {
        threw = true;
      }
      w.add_flag(threw);
    }
  }
  out.push_back(make_result("contracting T and its decohered version give "
                            "identical results",
                            w.ratio, 1.0));

  // Method agreement + CPTP of the step map on converged instances.
  Worst w2;
  Index used = 0;
  for (std::uint64_t i = 0; used < 20 && i < 200; ++i) {
    const auto p = random_problem(15500 + i, 5, 1);
    if (p.part_h.dim0 == 0) continue;
    const auto chan = unitary_pair_channel(p);
    try {
      const auto s_series =
          contract_channel(chan, ContractionMethod::series, 1e-11);
      const auto s_resolvent =
          contract_channel(chan, ContractionMethod::resolvent, 1e-11);
      const auto s_power =
          contract_channel(chan, ContractionMethod::power, 1e-11);
      ++used;
      w2.add(spectral_norm(s_series.s.m - s_resolvent.s.m), 1e-9);
      w2.add(spectral_norm(s_series.s.m - s_power.s.m), 1e-9);

      // The single-pass step map of the power iteration is a channel.
      const Superoperator tprime = decohere(chan.t, chan.part_h, chan.part_f);
      const Index f = chan.part_f.total();
      const Index f0 = chan.part_f.dim0;
      CMatrix pf0 = CMatrix::Zero(f, f);
      pf0.topLeftCorner(f0, f0).setIdentity();
      CMatrix if1 = CMatrix::Zero(f, chan.part_f.dim1);
      if1.bottomRows(chan.part_f.dim1).setIdentity();
      CMatrix ih1 = CMatrix::Zero(chan.part_h.total(), chan.part_h.dim1);
      ih1.bottomRows(chan.part_h.dim1).setIdentity();
      Superoperator step;
      step.dim_in = f;
      step.dim_out = chan.part_h.total();
      step.m = superop_from_kraus({ih1}).m * chan.r.m *
               superop_from_kraus({CMatrix(if1.adjoint())}).m;
      Superoperator tstep;
      tstep.dim_in = f;
      tstep.dim_out = f;
      tstep.m = superop_from_kraus({pf0}).m + tprime.m * step.m;
      w2.add_flag(is_cptp(tstep, 1e-8).cptp);
    } catch (const NotConverged&) {
    }
  }
  out.push_back(make_result("channel method agreement and CPTP step map",
                            w2.ratio, 1.0));

  // A component inside the invariant subspace never decays.
  Worst w3;
  {
    const CMatrix u_a = random_unitary(1, 42);
    CMatrix k1 = CMatrix::Zero(2, 2), k2 = CMatrix::Zero(2, 2);
    k1.topLeftCorner(1, 1) = u_a;
    k2.bottomRightCorner(1, 1) = std::sqrt(0.5) * random_unitary(1, 43);
    const Superoperator t11 = superop_from_kraus({k1, k2});
    CMatrix sigma = CMatrix::Zero(2, 2);
    sigma(0, 0) = 0.4;  // the invariant component
    sigma(1, 1) = 0.6;
    CVector v = vec(sigma);
    for (int n = 0; n < 30; ++n) {
      const CMatrix cur = unvec(v, 2, 2);
      w3.add(0.4 - cur.trace().real(), 1e-12);
      v = t11.m * v;
    }
  }
  out.push_back(make_result("invariant component bounds the internal trace "
                            "from below",
                            w3.ratio, 1.0));

  out.push_back(crit12_spectral_criteria());
  return out;
}

std::vector<CheckResult> check_quantum_graph() {
  std::vector<CheckResult> out = {crit7_graph_closed_forms(),
                                  crit8_graph_paths()};

  Worst w;
  for (std::uint64_t i = 0; i < 30; ++i) {
    double k = 0;
    const MetricGraph g = random_graph(16000 + i, &k);
    for (int kk = 0; kk < 5; ++kk) {
      try {
        const CMatrix s = graph_scattering(g, k + 0.17 * kk);
        w.add(spectral_norm(CMatrix(s.adjoint() * s) -
                            CMatrix::Identity(s.cols(), s.cols())),
              1e-7);
      } catch (const SingularMatrix&) {
      }
    }
  }
  out.push_back(make_result("unitarity of S(k) on random graphs", w.ratio,
                            1.0, "scaled residual"));

  // k-independence of the constant star families.
  Worst w2;
  for (int i = 0; i < 20; ++i) {
    const double k = 0.2 + 0.4 * i;
    w2.add(spectral_norm(star_scattering(kirchhoff_vertex(4), k) -
                         star_scattering(kirchhoff_vertex(4), 1.0)),
           1e-12);
    w2.add(spectral_norm(star_scattering(dirichlet_vertex(3), k) -
                         star_scattering(dirichlet_vertex(3), 1.0)),
           1e-12);
    w2.add(spectral_norm(star_scattering(neumann_vertex(3), k) -
                         star_scattering(neumann_vertex(3), 1.0)),
           1e-12);
  }
  out.push_back(make_result("Dirichlet/Neumann/Kirchhoff stars are "
                            "k-independent",
                            w2.ratio, 1.0));

  // Two intervals in series equal one of the summed length.
  Worst w3;
  for (int i = 0; i < 10; ++i) {
    const double l1 = 0.3 + 0.11 * i, l2 = 0.9 - 0.07 * i;
    const double k = 0.6 + 0.31 * i;
    MetricGraph chain;
    chain.vertices = {kirchhoff_vertex(2), kirchhoff_vertex(2),
                      kirchhoff_vertex(2)};
    chain.internal_edges = {{{0, 1}, {1, 0}, l1}, {{1, 1}, {2, 0}, l2}};
    chain.leads = {{0, 0}, {2, 1}};
    const CMatrix s_chain = graph_scattering(chain, k);
    const CMatrix s_single = graph_scattering(interval_graph(l1 + l2), k);
    w3.add(spectral_norm(s_chain - s_single), 1e-9);
  }
  out.push_back(make_result("interval composition: lengths add", w3.ratio,
                            1.0));
  return out;
}

std::vector<CheckResult> check_module(const std::string& name) {
  if (name == "linalg-core" || name == "linalg") return check_linalg();
  if (name == "unitary-contraction" || name == "unitary")
    return check_unitary_contraction();
  if (name == "operator-contraction" || name == "operator")
    return check_operator_contraction();
  if (name == "channel-contraction" || name == "channel")
    return check_channel_contraction();
  if (name == "quantum-graph" || name == "graph")
    return check_quantum_graph();
  throw InvalidProblem("unknown module: " + name);
}

}  // namespace qcontract::checks
