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

#pragma once

#include <stdexcept>
#include <string>

namespace qcontract {

// Numerically rank-deficient matrix in a place that requires an inverse.
// For contractions this signals a degenerate (decoupled) subspace that was
// not stripped before solving.
struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (shape, unitarity, positivity, ...).
struct InvalidProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operands have inconsistent dimensions.
struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A network or graph spec violates its dimension-count constraints.
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A lead-pair contraction spec is malformed (repeated index, bad length, ...).
struct InvalidSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value was requested under a definition whose applicability condition
// fails (e.g. resolvent value of an operator contraction whose series
// diverges).
struct DefinitionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative method ran out of terms. `tail_estimate` is the last bound on
// the neglected tail; `positive_invariant` is set by the channel contraction
// when a nonzero positive invariant subspace certifies divergence.
struct NotConverged : std::runtime_error {
  double tail_estimate;
  bool positive_invariant;

  NotConverged(const std::string& what, double tail, bool pos_inv = false)
      : std::runtime_error(what),
        tail_estimate(tail),
        positive_invariant(pos_inv) {}
};

// Malformed input file; the message names the offending field.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qcontract
