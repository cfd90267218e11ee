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
// Property suites: seeded randomized and closed-form checks for each module,
// runnable from the CLI (`qcontract check <module>`) and aggregated into the
// release acceptance suite.

#pragma once

#include <string>
#include <vector>

namespace qcontract::checks {

struct CheckResult {
  std::string name;
  double residual = 0;    // worst observed value
  double tolerance = 0;   // pass iff residual <= tolerance
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> check_linalg();
std::vector<CheckResult> check_unitary_contraction();
std::vector<CheckResult> check_operator_contraction();
std::vector<CheckResult> check_channel_contraction();
std::vector<CheckResult> check_quantum_graph();

// Suite for a module by name ("linalg-core", "unitary-contraction",
// "operator-contraction", "channel-contraction", "quantum-graph").
// Throws InvalidProblem for an unknown name.
std::vector<CheckResult> check_module(const std::string& name);

// The full release gate, one result per criterion.
std::vector<CheckResult> acceptance_criteria();

}  // namespace qcontract::checks
