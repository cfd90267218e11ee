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
// Command-line front end. Exit codes: 0 success, 1 input/usage error,
// 2 mathematical non-convergence or resonance. Diagnostics go to stderr as
// key=value lines; results go to the -o file or stdout.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcontract/channel_contraction.hpp"
#include "qcontract/checks.hpp"
#include "qcontract/io.hpp"
#include "qcontract/operator_contraction.hpp"
#include "qcontract/quantum_graph.hpp"
#include "qcontract/unitary_contraction.hpp"

namespace {

using namespace qcontract;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

void emit(const std::string& key, const std::string& value) {
  std::cerr << key << "=" << value << "\n";
}

void emit(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  emit(key, std::string(buf));
}

void emit(const std::string& key, Index value) {
  emit(key, std::to_string(value));
}

void write_output(const std::string& out_path, const Json& j) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json_file(out_path, j);
}

ContractionMethod parse_method(const std::string& name) {
  if (name == "block_solve") return ContractionMethod::block_solve;
  if (name == "resolvent") return ContractionMethod::resolvent;
  if (name == "series") return ContractionMethod::series;
  if (name == "power") return ContractionMethod::power;
  throw IoError("unknown method: " + name);
}

struct CommonOpts {
  std::string input;
  std::string output;
  double tol = 1e-9;
  Index max_terms = 1000000;
  std::string method = "block_solve";
};

std::vector<double> build_k_grid(double k_min, double k_max, Index k_steps,
                                 const std::vector<double>& explicit_k) {
  if (!explicit_k.empty()) return explicit_k;
  if (!(k_min > 0) || k_min > k_max || k_steps < 1)
    throw IoError("k grid requires 0 < k-min <= k-max and k-steps >= 1");
  std::vector<double> ks;
  ks.reserve(static_cast<size_t>(k_steps));
  for (Index i = 0; i < k_steps; ++i) {
    ks.push_back(k_steps == 1 ? k_min
                              : k_min + (k_max - k_min) *
                                            static_cast<double>(i) /
                                            static_cast<double>(k_steps - 1));
  }
  return ks;
}

int cmd_contract_unitary(const CommonOpts& opt) {
  const auto p = unitary_problem_from_json(load_json_file(opt.input));
  try {
    const auto res = contract_unitary(p, parse_method(opt.method), opt.tol,
                                      opt.max_terms);
    emit("method", to_string(res.method));
    emit("terms_used", res.terms_used);
    emit("convergence_N", res.convergence_n);
    emit("dim_V", res.v_basis.cols());
    emit("dim_V1", res.v1_basis.cols());
    write_output(opt.output, matrix_to_json(res.s));
    return kExitOk;
  } catch (const NotConverged& e) {
    emit("error", std::string("not_converged: ") + e.what());
    emit("tail_estimate", e.tail_estimate);
    return kExitNotConverged;
  }
}

int cmd_contract_operator(const CommonOpts& opt) {
  const auto p = operator_problem_from_json(load_json_file(opt.input));
  const auto rep = solvability_check(p, opt.tol);
  emit("exists_for_all", std::string(rep.exists_for_all ? "1" : "0"));
  emit("phi0_unique", std::string(rep.phi0_unique ? "1" : "0"));
  emit("series_converges", std::string(rep.series_converges ? "1" : "0"));
  emit("dim_V1", rep.v1_dim);
  emit("krylov_dim", rep.krylov_dim);
  emit("krylov_contraction", rep.krylov_contraction);
  try {
    const std::string method =
        opt.method == "block_solve" ? "series" : opt.method;
    const auto res =
        contract_operator(p, parse_method(method), opt.tol, opt.max_terms);
    emit("method", to_string(res.method));
    emit("terms_used", res.terms_used);
    write_output(opt.output, matrix_to_json(res.s));
    return kExitOk;
  } catch (const NotConverged& e) {
    emit("error", std::string("not_converged: ") + e.what());
    emit("tail_estimate", e.tail_estimate);
    return kExitNotConverged;
  } catch (const DefinitionMismatch& e) {
    emit("error", std::string("definition_mismatch: ") + e.what());
    return kExitNotConverged;
  }
}

int cmd_contract_channel(const CommonOpts& opt) {
  const auto p = channel_problem_from_json(load_json_file(opt.input));
  try {
    const std::string method =
        opt.method == "block_solve" ? "series" : opt.method;
    const auto res =
        contract_channel(p, parse_method(method), opt.tol, opt.max_terms);
    emit("terms_used", res.terms_used);
    emit("trace_ratio", res.trace_ratio);
    emit("positive_invariant", std::string("0"));
    write_output(opt.output, superop_to_json(res.s));
    return kExitOk;
  } catch (const NotConverged& e) {
    emit("error", std::string("not_converged: ") + e.what());
    emit("tail_estimate", e.tail_estimate);
    emit("positive_invariant", std::string(e.positive_invariant ? "1" : "0"));
    return kExitNotConverged;
  }
}

int cmd_kraus(const CommonOpts& opt) {
  const auto p = unitary_problem_from_json(load_json_file(opt.input));
  try {
    const auto set = kraus_operators(p, opt.tol, opt.max_terms);
    const auto povm_ops = povm(set);
    const auto res =
        contract_unitary(p, ContractionMethod::block_solve, opt.tol);

    const Index h0 = p.part_h.dim0;
    const Index f0 = p.part_f.dim0;
    CMatrix complete = CMatrix::Zero(h0, h0);
    CMatrix unital = CMatrix::Zero(f0, f0);
    CMatrix coherent = CMatrix::Zero(f0, h0);
    Json kraus_json = Json::array();
    Json povm_json = Json::array();
    for (size_t i = 0; i < set.ops.size(); ++i) {
      kraus_json.push_back(matrix_to_json(set.ops[i]));
      povm_json.push_back(matrix_to_json(povm_ops[i]));
      complete += set.ops[i].adjoint() * set.ops[i];
      unital += set.ops[i] * set.ops[i].adjoint();
      coherent += set.ops[i];
    }
    emit("terms", static_cast<Index>(set.ops.size()));
    emit("tail_bound", set.tail_bound);
    const double completeness =
        spectral_norm(complete - CMatrix::Identity(h0, h0));
    const double unitality =
        spectral_norm(unital - CMatrix::Identity(f0, f0));
    const double coherent_residual = spectral_norm(coherent - res.s);
    emit("completeness_residual", completeness);
    emit("unitality_residual", unitality);
    emit("coherent_sum_residual", coherent_residual);
    write_output(opt.output,
                 Json{{"kraus", kraus_json},
                      {"povm", povm_json},
                      {"tail_bound", set.tail_bound},
                      {"completeness_residual", completeness},
                      {"unitality_residual", unitality},
                      {"coherent_sum_residual", coherent_residual}});
    return kExitOk;
  } catch (const NotConverged& e) {
    emit("error", std::string("not_converged: ") + e.what());
    emit("tail_estimate", e.tail_estimate);
    return kExitNotConverged;
  }
}

int cmd_graph_scatter(const std::string& input, const std::string& output,
                      double k_min, double k_max, Index k_steps,
                      const std::vector<double>& explicit_k) {
  const auto g = graph_from_json(load_json_file(input));
  const auto ks = build_k_grid(k_min, k_max, k_steps, explicit_k);
  for (double k : ks)
    if (!(k > 0)) throw IoError("k values must be positive");
  const auto rows = sweep(g, ks);
  const std::string csv =
      sweep_to_csv(rows, static_cast<Index>(g.leads.size()));
  if (output.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(output);
    if (!out) throw IoError("cannot open file for writing: " + output);
    out << csv;
  }
  Index resonant = 0;
  for (const auto& row : rows) resonant += row.resonant ? 1 : 0;
  emit("rows", static_cast<Index>(rows.size()));
  emit("resonant_rows", resonant);
  return resonant > 0 ? kExitNotConverged : kExitOk;
}

int cmd_graph_contract(const std::string& input, const std::string& output,
                       const std::vector<std::string>& pair_specs, double k) {
  const CMatrix s = read_matrix_file(input);
  GraphContractionSpec spec;
  for (const std::string& ps : pair_specs) {
    LeadPair pr;
    char extra = 0;
    long long a = 0, b = 0;
    if (std::sscanf(ps.c_str(), "%lld,%lld,%lf%c", &a, &b, &pr.length,
                    &extra) != 3)
      throw IoError("pair must be formatted as leadA,leadB,length: " + ps);
    pr.lead_a = static_cast<Index>(a);
    pr.lead_b = static_cast<Index>(b);
    spec.pairs.push_back(pr);
  }
  try {
    const CMatrix result = contract_scattering(s, spec, k);
    emit("surviving_leads", result.rows());
    write_output(output, matrix_to_json(result));
    return kExitOk;
  } catch (const SingularMatrix& e) {
    emit("error", std::string("resonance: ") + e.what());
    emit("resonant", std::string("1"));
    return kExitNotConverged;
  }
}

int cmd_network(const CommonOpts& opt) {
  const auto spec = network_from_json(load_json_file(opt.input));
  const auto assembly = assemble_network(spec);
  emit("dim_H0", assembly.problem.part_h.dim0);
  emit("dim_H1", assembly.problem.part_h.dim1);
  try {
    const auto res = contract_unitary(assembly.problem,
                                      parse_method(opt.method), opt.tol,
                                      opt.max_terms);
    emit("method", to_string(res.method));
    emit("terms_used", res.terms_used);
    emit("convergence_N", res.convergence_n);
    emit("dim_V", res.v_basis.cols());
    emit("dim_V1", res.v1_basis.cols());
    write_output(opt.output, matrix_to_json(res.s));
    return kExitOk;
  } catch (const NotConverged& e) {
    emit("error", std::string("not_converged: ") + e.what());
    emit("tail_estimate", e.tail_estimate);
    return kExitNotConverged;
  }
}

int cmd_sample_channel(const std::string& input, const std::string& rho_path,
                       const std::string& output, Index trajectories,
                       std::uint64_t seed, Index max_steps) {
  const auto p = channel_problem_from_json(load_json_file(input));
  const CMatrix rho0 = read_matrix_file(rho_path);
  const auto res = sample_contraction(p, rho0, trajectories, seed, max_steps);
  emit("trajectories", res.trajectories);
  emit("censored", res.censored);
  Json hist = Json::array();
  for (size_t n = 1; n < res.stop_histogram.size(); ++n)
    hist.push_back(res.stop_histogram[n]);
  write_output(output, Json{{"sigma0", matrix_to_json(res.sigma0)},
                            {"histogram", hist},
                            {"censored", res.censored},
                            {"trajectories", res.trajectories}});
  return res.censored == res.trajectories ? kExitNotConverged : kExitOk;
}

int cmd_check(const std::string& module) {
  const auto results = checks::check_module(module);
  bool all_passed = true;
  for (const auto& r : results) {
    std::printf("%s %-70s residual=%.3e tol=%.3e\n",
                r.passed ? "PASS" : "FAIL", r.name.c_str(), r.residual,
                r.tolerance);
    if (!r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contraction of unitary operators, quantum channels and "
               "quantum-graph scattering matrices"};
  app.require_subcommand(1);

  CommonOpts opt;
  double k = 1.0;
  double k_min = 0, k_max = 0;
  Index k_steps = 0;
  std::vector<double> explicit_k;
  std::vector<std::string> pair_specs;
  std::string rho_path;
  std::string module;
  Index trajectories = 10000;
  Index max_steps = 1000;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* sub, bool with_method = true) {
    sub->add_option("input", opt.input, "input problem file")->required();
    sub->add_option("-o,--output", opt.output,
                    "output file (stdout if omitted)");
    sub->add_option("--tol", opt.tol, "numerical tolerance");
    sub->add_option("--max-terms", opt.max_terms, "series/iteration cap");
    if (with_method)
      sub->add_option("--method", opt.method,
                      "block_solve|resolvent|series|power");
  };

  auto* cu = app.add_subcommand("contract-unitary",
                                "contract a unitary problem file");
  add_common(cu);

  auto* co = app.add_subcommand("contract-operator",
                                "contract a general operator problem file");
  add_common(co);

  auto* cc = app.add_subcommand("contract-channel",
                                "contract a channel problem file");
  add_common(cc);

  auto* kr = app.add_subcommand(
      "kraus", "Kraus operators, POVM and completeness residuals");
  add_common(kr, false);

  auto* gs = app.add_subcommand("graph-scatter",
                                "S(k) sweep of a metric graph, CSV output");
  gs->add_option("input", opt.input, "graph file")->required();
  gs->add_option("-o,--output", opt.output, "CSV output path");
  gs->add_option("--k-min", k_min, "grid start (k > 0)");
  gs->add_option("--k-max", k_max, "grid end");
  gs->add_option("--k-steps", k_steps, "grid point count");
  gs->add_option("--k", explicit_k, "explicit k values");

  auto* gc = app.add_subcommand("graph-contract",
                                "join lead pairs of an S-matrix file");
  gc->add_option("input", opt.input, "S-matrix file")->required();
  gc->add_option("-o,--output", opt.output, "output file");
  gc->add_option("--pair", pair_specs, "leadA,leadB,length (repeatable)")
      ->required();
  gc->add_option("--k", k, "wavenumber")->required();

  auto* nw = app.add_subcommand("network",
                                "assemble and contract a unitary network");
  add_common(nw);

  auto* sc = app.add_subcommand("sample-channel",
                                "Monte Carlo measure-and-reinject sampler");
  sc->add_option("input", opt.input, "channel problem file")->required();
  sc->add_option("--rho0", rho_path, "initial density matrix file")
      ->required();
  sc->add_option("-o,--output", opt.output, "output file");
  sc->add_option("--trajectories", trajectories, "trajectory count");
  sc->add_option("--seed", seed, "RNG seed");
  sc->add_option("--max-steps", max_steps, "per-trajectory step cap");

  auto* ck = app.add_subcommand("check",
                                "run the property suite of a module");
  ck->add_option("module", module,
                 "linalg-core|unitary-contraction|operator-contraction|"
                 "channel-contraction|quantum-graph")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cu->parsed()) return cmd_contract_unitary(opt);
    if (co->parsed()) return cmd_contract_operator(opt);
    if (cc->parsed()) return cmd_contract_channel(opt);
    if (kr->parsed()) return cmd_kraus(opt);
    if (gs->parsed())
      return cmd_graph_scatter(opt.input, opt.output, k_min, k_max, k_steps,
                               explicit_k);
    if (gc->parsed())
      return cmd_graph_contract(opt.input, opt.output, pair_specs, k);
    if (nw->parsed()) return cmd_network(opt);
    if (sc->parsed())
      return cmd_sample_channel(opt.input, rho_path, opt.output, trajectories,
                                seed, max_steps);
    if (ck->parsed()) return cmd_check(module);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvalidProblem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ShapeMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SingularMatrix& e) {
    std::cerr << "error: resonance/singularity: " << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitInputError;
}
