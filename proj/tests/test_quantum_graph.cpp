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

#include "qcontract/quantum_graph.hpp"

using namespace qcontract;

namespace {

MetricGraph interval_graph(double length) {
  MetricGraph g;
  g.vertices = {kirchhoff_vertex(2), kirchhoff_vertex(2)};
  g.internal_edges = {{{0, 1}, {1, 1}, length}};
  g.leads = {{0, 0}, {1, 0}};
  return g;
}

MetricGraph loop_graph(double length) {
  MetricGraph g;
  g.vertices = {kirchhoff_vertex(3)};
  g.internal_edges = {{{0, 1}, {0, 2}, length}};
  g.leads = {{0, 0}};
  return g;
}

}  // namespace

TEST_CASE("vertex validation") {
  // Kirchhoff degree 3: two continuity rows plus the derivative-sum row.
  const auto kirchhoff = kirchhoff_vertex(3);
  const auto rep = validate_vertex(kirchhoff);
  CHECK(rep.valid);
  CHECK(rep.rank_defect == 0);
  CHECK(rep.herm_residual < 1e-14);

  CHECK(validate_vertex(dirichlet_vertex(2)).valid);
  CHECK(validate_vertex(neumann_vertex(4)).valid);
  CHECK(validate_vertex(random_vertex(3, 5)).valid);

  const VertexConditions zero{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
  const auto zrep = validate_vertex(zero);
  CHECK_FALSE(zrep.valid);
  CHECK(zrep.rank_defect == 2);
}

TEST_CASE("star scattering closed forms") {
  const double k = 0.9;
  CHECK(spectral_norm(star_scattering(dirichlet_vertex(3), k) +
                      CMatrix::Identity(3, 3)) < 1e-14);
  CHECK(spectral_norm(star_scattering(neumann_vertex(3), k) -
                      CMatrix::Identity(3, 3)) < 1e-14);

  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(spectral_norm(star_scattering(kirchhoff_vertex(2), k) - swap) <
        1e-13);

  // Kirchhoff degree d: (2/d) J - I.
  const CMatrix s3 = star_scattering(kirchhoff_vertex(3), k);
  const CMatrix expected =
      (2.0 / 3.0) * CMatrix::Ones(3, 3) - CMatrix::Identity(3, 3);
  CHECK(spectral_norm(s3 - expected) < 1e-13);

  CHECK(is_unitary(star_scattering(random_vertex(4, 6), k), 1e-10));
  CHECK_THROWS_AS(star_scattering(dirichlet_vertex(2), 0.0), InvalidProblem);
  const VertexConditions bad{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
  CHECK_THROWS_AS(star_scattering(bad, 1.0), InvalidProblem);
}

TEST_CASE("joining two transparent vertices gives a pure phase") {
  // Two Kirchhoff degree-2 stars direct-summed into a 4-lead S, then one
  // lead of each joined with length l.
  const double k = 1.7, l = 0.4;
  CMatrix s = CMatrix::Zero(4, 4);
  s(0, 1) = s(1, 0) = 1;
  s(2, 3) = s(3, 2) = 1;
  GraphContractionSpec spec;
  spec.pairs = {{1, 3, l}};
  const CMatrix joined = contract_scattering(s, spec, k);
  const Complex phase = std::exp(Complex(0, k * l));
  CMatrix expected(2, 2);
  expected << 0, phase, phase, 0;
  CHECK(spectral_norm(joined - expected) < 1e-12);

  // Same through the block formula.
  CHECK(spectral_norm(contract_scattering_block(s, spec, k) - expected) <
        1e-12);
}

TEST_CASE("self-loop on a Kirchhoff vertex") {
  const double l = 1.0;
  const MetricGraph g = loop_graph(l);
  // Closed form (omega - 1/3)/(1 - omega/3) with omega = e^{ikl}.
  for (double k : {0.7, 1.9, 2.6}) {
    const Complex om = std::exp(Complex(0, k * l));
    const Complex expected = (om - 1.0 / 3.0) / (1.0 - om / 3.0);
    CHECK(std::abs(graph_scattering(g, k)(0, 0) - expected) < 1e-12);
  }
  // At k l = pi the loop reflects with phase -1.
  CHECK(std::abs(graph_scattering(g, M_PI)(0, 0) - Complex(-1, 0)) < 1e-12);
  // k l = 2 pi is a resonance of the block inversion.
  CHECK_THROWS_AS(graph_scattering(g, 2 * M_PI), SingularMatrix);
}

TEST_CASE("empty contraction spec returns the input") {
  const CMatrix s = random_unitary(3, 7);
  CHECK(spectral_norm(contract_scattering(s, {}, 1.0) - s) == 0.0);
}

TEST_CASE("contraction spec validation") {
  const CMatrix s = random_unitary(4, 8);
  GraphContractionSpec dup;
  dup.pairs = {{0, 0, 1.0}};
  CHECK_THROWS_AS(contract_scattering(s, dup, 1.0), InvalidSpec);
  GraphContractionSpec range;
  range.pairs = {{0, 7, 1.0}};
  CHECK_THROWS_AS(contract_scattering(s, range, 1.0), InvalidSpec);
  GraphContractionSpec len;
  len.pairs = {{0, 1, -2.0}};
  CHECK_THROWS_AS(contract_scattering(s, len, 1.0), InvalidSpec);
}

TEST_CASE("graph scattering of simple assemblies") {
  // Single star, no internal edges.
  MetricGraph star;
  star.vertices = {kirchhoff_vertex(3)};
  star.leads = {{0, 0}, {0, 1}, {0, 2}};
  const CMatrix expected =
      (2.0 / 3.0) * CMatrix::Ones(3, 3) - CMatrix::Identity(3, 3);
  CHECK(spectral_norm(graph_scattering(star, 1.1) - expected) < 1e-13);

  // The interval is a pure phase between its two leads.
  const double k = 2.3, l = 0.8;
  const Complex phase = std::exp(Complex(0, k * l));
  CMatrix interval_expected(2, 2);
  interval_expected << 0, phase, phase, 0;
  CHECK(spectral_norm(graph_scattering(interval_graph(l), k) -
                      interval_expected) < 1e-12);

  // Disconnected single-lead Dirichlet stars: the direct sum of -1's.
  MetricGraph two;
  two.vertices = {dirichlet_vertex(1), dirichlet_vertex(1)};
  two.leads = {{0, 0}, {1, 0}};
  CHECK(spectral_norm(graph_scattering(two, 1.4) +
                      CMatrix::Identity(2, 2)) < 1e-13);
}

TEST_CASE("lead order fixes the index space of S(k)") {
  const double k = 1.3, l = 0.5;
  MetricGraph g = interval_graph(l);
  const CMatrix s = graph_scattering(g, k);
  std::swap(g.leads[0], g.leads[1]);
  const CMatrix s_swapped = graph_scattering(g, k);
  CHECK(std::abs(s(0, 1) - s_swapped(1, 0)) < 1e-14);
  CHECK(std::abs(s(1, 0) - s_swapped(0, 1)) < 1e-14);
}

TEST_CASE("graph validation catches structural errors") {
  MetricGraph no_leads;
  no_leads.vertices = {kirchhoff_vertex(2)};
  no_leads.internal_edges = {{{0, 0}, {0, 1}, 1.0}};
  CHECK_THROWS_AS(no_leads.validate(), InvalidProblem);

  MetricGraph twice;
  twice.vertices = {kirchhoff_vertex(2)};
  twice.leads = {{0, 0}, {0, 0}};
  CHECK_THROWS_AS(twice.validate(), InvalidProblem);

  MetricGraph dangling;
  dangling.vertices = {kirchhoff_vertex(2)};
  dangling.leads = {{0, 0}};
  CHECK_THROWS_AS(dangling.validate(), InvalidProblem);

  MetricGraph bad_length = interval_graph(0.0);
  CHECK_THROWS_AS(bad_length.validate(), InvalidProblem);
}

TEST_CASE("compact components drop out of the scattering matrix") {
  // An interval graph plus a disconnected circle (one transparent vertex,
  // one self-loop, no leads). The circle spans a decoupled invariant block
  // of the internal feedback, so away from its spectrum S(k) equals the
  // interval's alone; on the spectrum (k l = 2 pi n) the block inversion is
  // singular and the point is flagged.
  const double l_int = 0.8, l_circle = 1.0;
  MetricGraph g = interval_graph(l_int);
  g.vertices.push_back(kirchhoff_vertex(2));
  g.internal_edges.push_back({{2, 0}, {2, 1}, l_circle});
  g.validate();

  const double k = 1.234;
  const CMatrix s = graph_scattering(g, k);
  CHECK(spectral_norm(s - graph_scattering(interval_graph(l_int), k)) <
        1e-11);

  CHECK_THROWS_AS(graph_scattering(g, 2 * M_PI / l_circle), SingularMatrix);
}

TEST_CASE("sweep flags resonant rows and keeps input order") {
  const MetricGraph g = loop_graph(1.0);
  const std::vector<double> ks = {1.0, 2 * M_PI, 3.0};
  const auto rows = sweep(g, ks);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].resonant);
  CHECK(rows[1].resonant);
  CHECK_FALSE(rows[2].resonant);
  CHECK(rows[1].k == 2 * M_PI);

  CHECK(sweep(g, {}).empty());

  // 100-point sweep of the interval: off-diagonal modulus is 1 throughout.
  const MetricGraph interval = interval_graph(0.6);
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.1 + 0.09 * i);
  for (const auto& row : sweep(interval, grid)) {
    REQUIRE_FALSE(row.resonant);
    CHECK(std::abs(std::abs(row.s(0, 1)) - 1.0) < 1e-12);
  }
}
