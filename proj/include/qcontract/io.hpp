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
// JSON file formats for matrices, contraction problems, superoperators,
// channels and graphs, plus the CSV sweep writer. A matrix is stored as
// {"rows": r, "cols": c, "data": [[re, im], ...]} with data in row-major
// order; all other documents embed matrices in this form. Parse errors
// throw IoError naming the offending field.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcontract/channel_contraction.hpp"
#include "qcontract/linalg.hpp"
#include "qcontract/operator_contraction.hpp"
#include "qcontract/quantum_graph.hpp"
#include "qcontract/unitary_contraction.hpp"

namespace qcontract {

using Json = nlohmann::json;

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& context);

Json superop_to_json(const Superoperator& s);
Superoperator superop_from_json(const Json& j, const std::string& context);

Json unitary_problem_to_json(const UnitaryContractionProblem& p);
UnitaryContractionProblem unitary_problem_from_json(const Json& j);

Json operator_problem_to_json(const OperatorContractionProblem& p);
OperatorContractionProblem operator_problem_from_json(const Json& j);

Json channel_problem_to_json(const ChannelContractionProblem& p);
ChannelContractionProblem channel_problem_from_json(const Json& j);

Json graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const Json& j);

Json network_to_json(const NetworkSpec& n);
NetworkSpec network_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

void write_matrix_file(const std::string& path, const CMatrix& m);
CMatrix read_matrix_file(const std::string& path);

// CSV with header k, re(S_ij), im(S_ij) in row-major ij order, and a
// trailing 0/1 "resonant" column; 17 significant digits. Resonant rows
// carry "nan" entries. n_leads fixes the column set even for an empty
// sweep.
std::string sweep_to_csv(const std::vector<SweepRow>& rows, Index n_leads);

}  // namespace qcontract
