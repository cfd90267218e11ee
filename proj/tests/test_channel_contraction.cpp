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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcontract/channel_contraction.hpp"

using namespace qcontract;

namespace {

CMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

CMatrix random_density(Index d, std::uint64_t seed) {
  const CMatrix g = random_dense(d, d, seed);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

UnitaryContractionProblem two_level(Complex t, Complex r, Complex w,
                                    Complex om) {
  UnitaryContractionProblem p;
  p.u = CMatrix(2, 2);
  p.u << t, -w * std::conj(r), r, w * std::conj(t);
  p.omega = CMatrix::Constant(1, 1, om);
  p.part_h = Partition{1, 1};
  p.part_f = Partition{1, 1};
  return p;
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

// T(rho) = Tr(rho) |1><1| with the identity connection: the defining
// equations are inconsistent for any nonzero input.
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

ChannelContractionProblem mixture(double p00, double p10, double p01,
                                  double p11, Index d, std::uint64_t seed) {
  UnitaryMixtureSpec spec;
  spec.part_h = Partition{d, d};
  spec.part_f = Partition{d, d};
  const double w[2][2] = {{p00, p01}, {p10, p11}};
  std::uint64_t s = seed;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      if (w[j][k] <= 0) continue;
      spec.weights[j][k] = {w[j][k]};
      spec.blocks[j][k] = {random_unitary(d, ++s)};
    }
  spec.connection_weights = {1.0};
  spec.connection_blocks = {random_unitary(d, ++s)};
  return unitary_mixture_problem(spec);
}

}  // namespace

TEST_CASE("vectorization round trip and conjugation semantics") {
  const CMatrix rho = random_density(3, 5);
  CHECK(spectral_norm(unvec(vec(rho), 3, 3) - rho) == 0.0);

  const CMatrix a = random_dense(2, 3, 6);
  const Superoperator s = superop_from_kraus({a});
  const CMatrix rho3 = random_density(3, 7);
  CHECK(spectral_norm(apply_superop(s, rho3) -
                      CMatrix(a * rho3 * a.adjoint())) < 1e-12);
}

TEST_CASE("superop from a single identity Kraus is the identity") {
  const Superoperator s = superop_from_kraus({CMatrix::Identity(2, 2)});
  CHECK(s.dim_in == 2);
  CHECK(spectral_norm(s.m - CMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("conjugation is multiplicative over composition") {
  const CMatrix a = random_dense(3, 3, 8);
  const CMatrix b = random_dense(3, 3, 9);
  const Superoperator sab = superop_from_kraus({CMatrix(a * b)});
  const Superoperator s =
      compose(superop_from_kraus({a}), superop_from_kraus({b}));
  CHECK(spectral_norm(sab.m - s.m) < 1e-12);
}

TEST_CASE("the two-level Kraus set preserves the unit state") {
  const auto set = kraus_operators(two_level(0.6, 0.8, 1.0, 1.0), 1e-16);
  const Superoperator chan = superop_from_kraus(set.ops);
  const CMatrix one = CMatrix::Identity(1, 1);
  CHECK(std::abs(apply_superop(chan, one)(0, 0) - Complex(1, 0)) < 1e-7);
}

TEST_CASE("is_cptp classifies standard maps") {
  CHECK(is_cptp(identity_superop(3)).cptp);
  CHECK(is_cptp(superop_from_kraus({random_unitary(3, 11)})).cptp);
  CHECK(is_cptp(counterexample_channel().t).cptp);

  // Scaled channel is CP but not TP.
  Superoperator half = identity_superop(2);
  half.m *= 0.5;
  const auto rep = is_cptp(half);
  CHECK_FALSE(rep.cptp);
  CHECK(rep.tp_residual > 0.4);
  CHECK(rep.choi_min_eig > -1e-12);

  // The transpose map is positive but not completely positive.
  Superoperator transpose;
  transpose.dim_in = 2;
  transpose.dim_out = 2;
  transpose.m = CMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      transpose.m(j + 2 * i, i + 2 * j) = 1;  // T(E_ij) = E_ji
  const auto trep = is_cptp(transpose);
  CHECK_FALSE(trep.cptp);
  CHECK(trep.choi_min_eig < -0.5);
  CHECK(trep.tp_residual < 1e-12);
}

TEST_CASE("decohere kills inter-sector coherences and nothing else") {
  const Partition part{1, 1};
  const Superoperator t = superop_from_kraus({random_unitary(2, 13)});
  const Superoperator td = decohere(t, part, part);

  CMatrix off = CMatrix::Zero(2, 2);
  off(0, 1) = Complex(0.3, 0.2);
  off(1, 0) = std::conj(off(0, 1));
  CHECK(spectral_norm(apply_superop(td, off)) < 1e-14);
  CHECK(is_cptp(td).cptp);

  // For block-diagonal U the decohered channel is the direct sum of the
  // sector conjugations.
  const CMatrix u0 = random_unitary(1, 14);
  const CMatrix u1 = random_unitary(1, 15);
  CMatrix u = CMatrix::Zero(2, 2);
  u.topLeftCorner(1, 1) = u0;
  u.bottomRightCorner(1, 1) = u1;
  const Superoperator tdu =
      decohere(superop_from_kraus({u}), part, part);
  const CMatrix rho = random_density(2, 16);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected.topLeftCorner(1, 1) =
      u0 * rho.topLeftCorner(1, 1) * u0.adjoint();
  expected.bottomRightCorner(1, 1) =
      u1 * rho.bottomRightCorner(1, 1) * u1.adjoint();
  CHECK(spectral_norm(apply_superop(tdu, rho) - expected) < 1e-13);

  // A channel that already preserves the sectors is untouched on them.
  const CMatrix rho_diag = expected / expected.trace().real();
  CHECK(spectral_norm(apply_superop(tdu, rho_diag) -
                      apply_superop(superop_from_kraus({u}), rho_diag)) <
        1e-13);
}

TEST_CASE("trace norm of channels and scaled channels") {
  const Superoperator chan = superop_from_kraus({random_unitary(3, 17)});
  CHECK(trace_norm(chan) == Catch::Approx(1.0).margin(1e-12));
  Superoperator half = chan;
  half.m *= 0.5;
  CHECK(trace_norm(half) == Catch::Approx(0.5).margin(1e-12));

  // Internal feedback block of a mixture with weight 0.5 into sector 1.
  const auto p = mixture(0.5, 0.5, 0.5, 0.5, 2, 71);
  CMatrix if1 = CMatrix::Zero(4, 2), ih1 = CMatrix::Zero(4, 2);
  if1.bottomRows(2).setIdentity();
  ih1.bottomRows(2).setIdentity();
  const Superoperator t11 = compose(
      superop_from_kraus({CMatrix(if1.adjoint())}),
      compose(p.t, compose(superop_from_kraus({ih1}), p.r)));
  CHECK(trace_norm(t11) == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("channel contraction of a unitary pair is the Kraus channel") {
  const auto up = two_level(0.6, 0.8, 1.0, 1.0);
  const auto chan = unitary_pair_channel(up);
  for (const auto m : {ContractionMethod::series, ContractionMethod::resolvent,
                       ContractionMethod::power}) {
    const auto res = contract_channel(chan, m, 1e-11);
    CHECK(res.converged);
    const auto set = kraus_operators(up, 1e-16);
    CHECK(spectral_norm(res.s.m - superop_from_kraus(set.ops).m) < 1e-8);
    CHECK(is_cptp(res.s, 1e-8).cptp);
  }
}

TEST_CASE("inconsistent channel pair raises the invariant-subspace flag") {
  bool flagged = false;
  try {
    contract_channel(counterexample_channel(), ContractionMethod::series,
                     1e-9, 1000);
  } catch (const NotConverged& e) {
    flagged = e.positive_invariant;
  }
  CHECK(flagged);
}

TEST_CASE("decoupled channel contracts in one step") {
  // Block-diagonal unitary: nothing enters the internal sector; the
  // contraction exists (it is the 00 conjugation) even though the internal
  // feedback block has trace norm 1.
  CMatrix u = CMatrix::Zero(3, 3);
  const CMatrix u0 = random_unitary(2, 19);
  u.topLeftCorner(2, 2) = u0;
  u.bottomRightCorner(1, 1) = random_unitary(1, 20);
  ChannelContractionProblem p;
  p.t = superop_from_kraus({u});
  p.r = identity_superop(1);
  p.part_h = Partition{2, 1};
  p.part_f = Partition{2, 1};
  const auto res = contract_channel(p, ContractionMethod::series, 1e-10);
  CHECK(res.converged);
  CHECK(res.terms_used == 1);
  CHECK(spectral_norm(res.s.m - superop_from_kraus({u0}).m) < 1e-12);
}

TEST_CASE("mixture trace ratios follow the weights") {
  const auto p = mixture(0.5, 0.5, 0.5, 0.5, 2, 73);
  const auto res = contract_channel(p, ContractionMethod::series, 1e-12);
  CHECK(res.converged);
  CHECK(res.trace_ratio == Catch::Approx(1.0).margin(1e-8));
  const CMatrix rho = random_density(2, 74);
  CHECK(apply_superop(res.s, rho).trace().real() ==
        Catch::Approx(1.0).margin(1e-8));

  CHECK_THROWS_AS(contract_channel(mixture(0.7, 0.3, 0.0, 1.0, 2, 75),
                                   ContractionMethod::series, 1e-9, 1000),
                  NotConverged);
}

TEST_CASE("positive_invariant_dim classifies the standard cases") {
  Superoperator zero;
  zero.dim_in = 2;
  zero.dim_out = 2;
  zero.m = CMatrix::Zero(4, 4);
  CHECK(positive_invariant_dim(zero) == 0);

  CHECK(positive_invariant_dim(identity_superop(2)) == 4);

  Superoperator half = superop_from_kraus({random_unitary(2, 21)});
  half.m *= 0.5;
  CHECK(positive_invariant_dim(half) == 0);
}

TEST_CASE("sampler stops immediately on decoupled channels") {
  CMatrix u = CMatrix::Zero(3, 3);
  u.topLeftCorner(2, 2) = random_unitary(2, 22);
  u.bottomRightCorner(1, 1) = random_unitary(1, 23);
  ChannelContractionProblem p;
  p.t = superop_from_kraus({u});
  p.r = identity_superop(1);
  p.part_h = Partition{2, 1};
  p.part_f = Partition{2, 1};
  const auto res =
      sample_contraction(p, random_density(2, 24), 500, 99, 50);
  CHECK(res.censored == 0);
  CHECK(res.stop_histogram[1] == 500);
}

TEST_CASE("sampler reproduces the exact channel on a mixed input") {
  // 4-dim unitary pair with a 2-dim external sector.
  UnitaryContractionProblem up;
  up.u = random_unitary(4, 25);
  up.omega = random_unitary(2, 26);
  up.part_h = Partition{2, 2};
  up.part_f = up.part_h;
  const auto chan = unitary_pair_channel(up);
  const CMatrix rho0 = random_density(2, 27);
  const auto exact = contract_channel(chan, ContractionMethod::series, 1e-12);
  const CMatrix expected = apply_superop(exact.s, rho0);

  const auto res = sample_contraction(chan, rho0, 20000, 4242, 200);
  CHECK(res.censored == 0);
  // Loose 5-sigma-style bound with ~1/sqrt(N) scale.
  CHECK(spectral_norm(res.sigma0 - expected) < 5.0 / std::sqrt(20000.0));

  // Same seed, same trajectories: bitwise identical estimate.
  const auto res2 = sample_contraction(chan, rho0, 20000, 4242, 200);
  CHECK((res.sigma0.array() == res2.sigma0.array()).all());
}

TEST_CASE("sampler censors trajectories that never exit") {
  const auto res = sample_contraction(counterexample_channel(),
                                      CMatrix::Identity(1, 1), 100, 7, 30);
  CHECK(res.censored == 100);
  for (Index n = 1; n <= 30; ++n) CHECK(res.stop_histogram[n] == 0);
}

TEST_CASE("sampler validates the input state") {
  const auto p = counterexample_channel();
  CHECK_THROWS_AS(
      sample_contraction(p, CMatrix::Identity(1, 1) * 2.0, 10, 1, 10),
      InvalidProblem);
  CMatrix neg = CMatrix::Identity(1, 1) * -1.0;
  CHECK_THROWS_AS(sample_contraction(p, neg, 10, 1, 10), InvalidProblem);
}

TEST_CASE("mixture constructor validates normalization") {
  UnitaryMixtureSpec spec;
  spec.part_h = Partition{1, 1};
  spec.part_f = Partition{1, 1};
  spec.weights[0][0] = {0.5};
  spec.blocks[0][0] = {CMatrix::Identity(1, 1)};
  spec.weights[1][0] = {0.4};  // column sums to 0.9, not 1
  spec.blocks[1][0] = {CMatrix::Identity(1, 1)};
  spec.weights[1][1] = {1.0};
  spec.blocks[1][1] = {CMatrix::Identity(1, 1)};
  spec.connection_weights = {1.0};
  spec.connection_blocks = {CMatrix::Identity(1, 1)};
  CHECK_THROWS_AS(unitary_mixture_problem(spec), InvalidProblem);
}
