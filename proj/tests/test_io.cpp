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

#include <string>

#include "qcontract/io.hpp"

using namespace qcontract;

TEST_CASE("matrix JSON round trip is exact") {
  CMatrix m(2, 3);
  m << Complex(1.0 / 3.0, -2.0 / 7.0), Complex(0, 1), Complex(1e-17, 3),
      Complex(-4, 0.1234567890123456), Complex(0, 0), Complex(9e100, -1e-200);
  const Json j = matrix_to_json(m);
  const CMatrix back = matrix_from_json(j, "test");
  CHECK((m.array() == back.array()).all());

  // Serialized text re-reads to the same values as well.
  const CMatrix back2 =
      matrix_from_json(Json::parse(j.dump()), "test");
  CHECK((m.array() == back2.array()).all());
}

TEST_CASE("malformed matrix documents name the offending field") {
  CHECK_THROWS_WITH(matrix_from_json(Json{{"cols", 2}}, "ctx"),
                    Catch::Matchers::ContainsSubstring("rows"));
  CHECK_THROWS_WITH(
      matrix_from_json(Json{{"rows", 1}, {"cols", 1}, {"data", {1.0}}},
                       "ctx"),
      Catch::Matchers::ContainsSubstring("data"));
  CHECK_THROWS_WITH(
      matrix_from_json(
          Json{{"rows", -1}, {"cols", 1}, {"data", Json::array()}}, "ctx"),
      Catch::Matchers::ContainsSubstring("rows"));
}

TEST_CASE("superoperator files carry the vectorization tag") {
  const Superoperator s = superop_from_kraus({random_unitary(2, 3)});
  const Json j = superop_to_json(s);
  CHECK(j.at("vec") == "column");
  const Superoperator back = superop_from_json(j, "test");
  CHECK(back.dim_in == 2);
  CHECK((back.m.array() == s.m.array()).all());

  Json missing = j;
  missing.erase("vec");
  CHECK_THROWS_AS(superop_from_json(missing, "test"), IoError);
  Json wrong = j;
  wrong["vec"] = "row";
  CHECK_THROWS_AS(superop_from_json(wrong, "test"), IoError);
}

TEST_CASE("problem documents round trip") {
  UnitaryContractionProblem p;
  p.u = random_unitary(4, 11);
  p.omega = random_unitary(2, 12);
  p.part_h = Partition{2, 2};
  p.part_f = Partition{2, 2};
  const auto back = unitary_problem_from_json(unitary_problem_to_json(p));
  CHECK((back.u.array() == p.u.array()).all());
  CHECK(back.part_h == p.part_h);

  // Unitarity is enforced on load.
  Json bad = unitary_problem_to_json(p);
  bad["U"]["data"][0] = {5.0, 0.0};
  CHECK_THROWS_AS(unitary_problem_from_json(bad), IoError);

  OperatorContractionProblem op;
  op.a = CMatrix(2, 2);
  op.a << 5, 1, 0, 1;  // the relaxed validator takes any finite matrix
  op.b = CMatrix::Constant(1, 1, 2.0);
  op.part_h = Partition{1, 1};
  op.part_f = Partition{1, 1};
  const auto op_back =
      operator_problem_from_json(operator_problem_to_json(op));
  CHECK((op_back.a.array() == op.a.array()).all());
}

TEST_CASE("channel problem documents round trip") {
  ChannelContractionProblem p;
  p.t = superop_from_kraus({random_unitary(2, 13)});
  p.r = identity_superop(1);
  p.part_h = Partition{1, 1};
  p.part_f = Partition{1, 1};
  const auto back = channel_problem_from_json(channel_problem_to_json(p));
  CHECK((back.t.m.array() == p.t.m.array()).all());

  Json bad = channel_problem_to_json(p);
  bad.erase("R");
  CHECK_THROWS_WITH(channel_problem_from_json(bad),
                    Catch::Matchers::ContainsSubstring("R"));
}

TEST_CASE("graph documents round trip") {
  MetricGraph g;
  g.vertices = {kirchhoff_vertex(2), random_vertex(2, 5)};
  g.internal_edges = {{{0, 1}, {1, 0}, 0.75}};
  g.leads = {{0, 0}, {1, 1}};
  const auto back = graph_from_json(graph_to_json(g));
  CHECK(back.vertices.size() == 2);
  CHECK(back.internal_edges[0].length == 0.75);
  CHECK(back.leads[1].vertex == 1);
  CHECK((back.vertices[1].a.array() == g.vertices[1].a.array()).all());

  Json bad = graph_to_json(g);
  bad["internal_edges"][0].erase("length");
  CHECK_THROWS_WITH(graph_from_json(bad),
                    Catch::Matchers::ContainsSubstring("length"));
}

TEST_CASE("network documents round trip") {
  NetworkSpec spec;
  NetworkNode node;
  node.u = random_unitary(3, 21);
  node.in_dims = {1, 2};
  node.out_dims = {1, 2};
  spec.nodes = {node};
  spec.connections[{1, 1}] = random_unitary(2, 22);
  const auto back = network_from_json(network_to_json(spec));
  CHECK(back.nodes.size() == 1);
  CHECK(back.nodes[0].in_dims == node.in_dims);
  CHECK((back.connections.at({1, 1}).array() ==
         spec.connections.at({1, 1}).array())
            .all());
}

TEST_CASE("sweep CSV layout") {
  MetricGraph g;
  g.vertices = {kirchhoff_vertex(2), kirchhoff_vertex(2)};
  g.internal_edges = {{{0, 1}, {1, 1}, 0.5}};
  g.leads = {{0, 0}, {1, 0}};
  auto rows = sweep(g, {1.0, 2.0});
  rows[1].resonant = true;  // force one flagged row for the format check
  rows[1].s = CMatrix();
  const std::string csv = sweep_to_csv(rows, 2);

  CHECK(csv.find("k,re(S_00),im(S_00),re(S_01),im(S_01),re(S_10),im(S_10),"
                 "re(S_11),im(S_11),resonant\n") == 0);
  CHECK(csv.find(",nan,nan") != std::string::npos);
  CHECK(csv.find(",1\n") != std::string::npos);

  // 17 significant digits survive a parse.
  const size_t line1 = csv.find('\n') + 1;
  const size_t comma = csv.find(',', line1);
  const double k_back = std::stod(csv.substr(line1, comma - line1));
  CHECK(k_back == 1.0);
}

TEST_CASE("file round trip") {
  const std::string path = "/tmp/qcontract_test_matrix.json";
  const CMatrix m = random_unitary(3, 30);
  write_matrix_file(path, m);
  const CMatrix back = read_matrix_file(path);
  CHECK((m.array() == back.array()).all());
  CHECK_THROWS_AS(read_matrix_file("/tmp/does_not_exist_qc.json"), IoError);
}
