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

#include "qcontract/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcontract {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw IoError(context + ": " + what);
}

const Json& require(const Json& j, const char* field,
                    const std::string& context) {
  if (!j.is_object() || !j.contains(field))
    fail(context, std::string("missing field \"") + field + "\"");
  return j.at(field);
}

Index require_count(const Json& j, const char* field,
                    const std::string& context) {
  const Json& v = require(j, field, context);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(context, std::string("field \"") + field +
                      "\" must be a nonnegative integer");
  return static_cast<Index>(v.get<long long>());
}

double require_number(const Json& j, const char* field,
                      const std::string& context) {
  const Json& v = require(j, field, context);
  if (!v.is_number()) fail(context, std::string("field \"") + field +
                                        "\" must be a number");
  return v.get<double>();
}

Partition partition_from_json(const Json& j, const char* f0, const char* f1,
                              const std::string& context) {
  return Partition{require_count(j, f0, context),
                   require_count(j, f1, context)};
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const Json& j, const std::string& context) {
  const Index rows = require_count(j, "rows", context);
  const Index cols = require_count(j, "cols", context);
  const Json& data = require(j, "data", context);
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    fail(context, "field \"data\" must list rows*cols [re, im] pairs");
  CMatrix m(rows, cols);
  Index idx = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c, ++idx) {
      const Json& e = data.at(static_cast<size_t>(idx));
      if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() ||
          !e.at(1).is_number())
        fail(context, "field \"data\" entries must be [re, im] pairs");
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  if (!all_finite(m)) fail(context, "field \"data\" has non-finite entries");
  return m;
}

Json superop_to_json(const Superoperator& s) {
  Json j = matrix_to_json(s.m);
  j["dim_in"] = s.dim_in;
  j["dim_out"] = s.dim_out;
  j["vec"] = "column";
  return j;
}

Superoperator superop_from_json(const Json& j, const std::string& context) {
  Superoperator s;
  s.dim_in = require_count(j, "dim_in", context);
  s.dim_out = require_count(j, "dim_out", context);
  const Json& tag = require(j, "vec", context);
  if (!tag.is_string() || tag.get<std::string>() != "column")
    fail(context, "field \"vec\" must be the literal \"column\"");
  s.m = matrix_from_json(j, context);
  try {
    s.validate();
  } catch (const ShapeMismatch& e) {
    fail(context, e.what());
  }
  return s;
}

Json unitary_problem_to_json(const UnitaryContractionProblem& p) {
  return Json{{"U", matrix_to_json(p.u)},
              {"Omega", matrix_to_json(p.omega)},
              {"dimH0", p.part_h.dim0},
              {"dimH1", p.part_h.dim1},
              {"dimF0", p.part_f.dim0},
              {"dimF1", p.part_f.dim1}};
}

UnitaryContractionProblem unitary_problem_from_json(const Json& j) {
  const std::string ctx = "unitary problem";
  UnitaryContractionProblem p;
  p.u = matrix_from_json(require(j, "U", ctx), ctx + ".U");
  p.omega = matrix_from_json(require(j, "Omega", ctx), ctx + ".Omega");
  p.part_h = partition_from_json(j, "dimH0", "dimH1", ctx);
  p.part_f = partition_from_json(j, "dimF0", "dimF1", ctx);
  try {
    p.validate();
  } catch (const InvalidProblem& e) {
    fail(ctx, e.what());
  }
  return p;
}

Json operator_problem_to_json(const OperatorContractionProblem& p) {
  return Json{{"A", matrix_to_json(p.a)},
              {"B", matrix_to_json(p.b)},
              {"dimH0", p.part_h.dim0},
              {"dimH1", p.part_h.dim1},
              {"dimF0", p.part_f.dim0},
              {"dimF1", p.part_f.dim1}};
}

OperatorContractionProblem operator_problem_from_json(const Json& j) {
  const std::string ctx = "operator problem";
  OperatorContractionProblem p;
  p.a = matrix_from_json(require(j, "A", ctx), ctx + ".A");
  p.b = matrix_from_json(require(j, "B", ctx), ctx + ".B");
  p.part_h = partition_from_json(j, "dimH0", "dimH1", ctx);
  p.part_f = partition_from_json(j, "dimF0", "dimF1", ctx);
  try {
    p.validate();
  } catch (const InvalidProblem& e) {
    fail(ctx, e.what());
  }
  return p;
}

Json channel_problem_to_json(const ChannelContractionProblem& p) {
  return Json{{"T", superop_to_json(p.t)},
              {"R", superop_to_json(p.r)},
              {"dimH0", p.part_h.dim0},
              {"dimH1", p.part_h.dim1},
              {"dimF0", p.part_f.dim0},
              {"dimF1", p.part_f.dim1}};
}

ChannelContractionProblem channel_problem_from_json(const Json& j) {
  const std::string ctx = "channel problem";
  ChannelContractionProblem p;
  p.t = superop_from_json(require(j, "T", ctx), ctx + ".T");
  p.r = superop_from_json(require(j, "R", ctx), ctx + ".R");
  p.part_h = partition_from_json(j, "dimH0", "dimH1", ctx);
  p.part_f = partition_from_json(j, "dimF0", "dimF1", ctx);
  try {
    p.validate();
  } catch (const InvalidProblem& e) {
    fail(ctx, e.what());
  }
  return p;
}

Json graph_to_json(const MetricGraph& g) {
  Json vertices = Json::array();
  for (size_t i = 0; i < g.vertices.size(); ++i)
    vertices.push_back(Json{{"id", i},
                            {"A", matrix_to_json(g.vertices[i].a)},
                            {"B", matrix_to_json(g.vertices[i].b)}});
  Json edges = Json::array();
  for (const InternalEdge& e : g.internal_edges)
    edges.push_back(Json{{"va", e.end_a.vertex},
                         {"ea", e.end_a.slot},
                         {"vb", e.end_b.vertex},
                         {"eb", e.end_b.slot},
                         {"length", e.length}});
  Json leads = Json::array();
  for (const EdgeEnd& e : g.leads)
    leads.push_back(Json{{"v", e.vertex}, {"e", e.slot}});
  return Json{{"vertices", vertices},
              {"internal_edges", edges},
              {"leads", leads}};
}

MetricGraph graph_from_json(const Json& j) {
  const std::string ctx = "graph";
  MetricGraph g;
  const Json& vertices = require(j, "vertices", ctx);
  if (!vertices.is_array()) fail(ctx, "field \"vertices\" must be an array");
  g.vertices.resize(vertices.size());
  for (const Json& vj : vertices) {
    const Index id = require_count(vj, "id", ctx + ".vertices");
    if (id >= static_cast<Index>(g.vertices.size()))
      fail(ctx, "vertex field \"id\" out of range");
    g.vertices[static_cast<size_t>(id)] = VertexConditions{
        matrix_from_json(require(vj, "A", ctx + ".vertices"), ctx + ".A"),
        matrix_from_json(require(vj, "B", ctx + ".vertices"), ctx + ".B")};
  }
  const Json& edges = require(j, "internal_edges", ctx);
  if (!edges.is_array())
    fail(ctx, "field \"internal_edges\" must be an array");
  for (const Json& ej : edges) {
    InternalEdge e;
    e.end_a = {require_count(ej, "va", ctx + ".internal_edges"),
               require_count(ej, "ea", ctx + ".internal_edges")};
    e.end_b = {require_count(ej, "vb", ctx + ".internal_edges"),
               require_count(ej, "eb", ctx + ".internal_edges")};
    e.length = require_number(ej, "length", ctx + ".internal_edges");
    g.internal_edges.push_back(e);
  }
  const Json& leads = require(j, "leads", ctx);
  if (!leads.is_array()) fail(ctx, "field \"leads\" must be an array");
  for (const Json& lj : leads)
    g.leads.push_back({require_count(lj, "v", ctx + ".leads"),
                       require_count(lj, "e", ctx + ".leads")});
  try {
    g.validate();
  } catch (const InvalidProblem& e) {
    fail(ctx, e.what());
  }
  return g;
}

Json network_to_json(const NetworkSpec& n) {
  Json nodes = Json::array();
  for (const NetworkNode& node : n.nodes)
    nodes.push_back(Json{{"U", matrix_to_json(node.u)},
                         {"in_dims", node.in_dims},
                         {"out_dims", node.out_dims}});
  Json conns = Json::array();
  for (const auto& [key, omega] : n.connections)
    conns.push_back(Json{{"to", key.first},
                         {"from", key.second},
                         {"Omega", matrix_to_json(omega)}});
  return Json{{"nodes", nodes}, {"connections", conns}};
}

NetworkSpec network_from_json(const Json& j) {
  const std::string ctx = "network";
  NetworkSpec n;
  const Json& nodes = require(j, "nodes", ctx);
  if (!nodes.is_array() || nodes.empty())
    fail(ctx, "field \"nodes\" must be a nonempty array");
  for (const Json& nj : nodes) {
    NetworkNode node;
    node.u = matrix_from_json(require(nj, "U", ctx + ".nodes"), ctx + ".U");
    const Json& in_dims = require(nj, "in_dims", ctx + ".nodes");
    const Json& out_dims = require(nj, "out_dims", ctx + ".nodes");
    if (!in_dims.is_array() || !out_dims.is_array())
      fail(ctx, "fields \"in_dims\"/\"out_dims\" must be arrays");
    for (const Json& d : in_dims) {
      if (!d.is_number_integer() || d.get<long long>() < 0)
        fail(ctx, "field \"in_dims\" entries must be nonnegative integers");
      node.in_dims.push_back(static_cast<Index>(d.get<long long>()));
    }
    for (const Json& d : out_dims) {
      if (!d.is_number_integer() || d.get<long long>() < 0)
        fail(ctx, "field \"out_dims\" entries must be nonnegative integers");
      node.out_dims.push_back(static_cast<Index>(d.get<long long>()));
    }
    n.nodes.push_back(std::move(node));
  }
  const Json& conns = require(j, "connections", ctx);
  if (!conns.is_array()) fail(ctx, "field \"connections\" must be an array");
  for (const Json& cj : conns) {
    const int to = static_cast<int>(require_count(cj, "to", ctx));
    const int from = static_cast<int>(require_count(cj, "from", ctx));
    n.connections[{to, from}] = matrix_from_json(
        require(cj, "Omega", ctx + ".connections"), ctx + ".Omega");
  }
  return n;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

void write_matrix_file(const std::string& path, const CMatrix& m) {
  save_json_file(path, matrix_to_json(m));
}

CMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(load_json_file(path), path);
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, Index n_leads) {
  std::ostringstream out;
  out << "k";
  for (Index i = 0; i < n_leads; ++i)
    for (Index j = 0; j < n_leads; ++j)
      out << ",re(S_" << i << j << "),im(S_" << i << j << ")";
  out << ",resonant\n";
  for (const SweepRow& row : rows) {
    out << fmt17(row.k);
    for (Index i = 0; i < n_leads; ++i)
      for (Index j = 0; j < n_leads; ++j) {
        if (row.resonant) {
          out << ",nan,nan";
        } else {
          out << "," << fmt17(row.s(i, j).real()) << ","
              << fmt17(row.s(i, j).imag());
        }
      }
    out << "," << (row.resonant ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace qcontract
