// Copyright 2026 The ABL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace abl {

/// Operands whose Hilbert dimensions do not fit together.
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Structurally invalid input: non-self-adjoint observable, unknown outcome
/// label, malformed protocol file, degenerate observable where a complete one
/// is required, and so on.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Conditioning on an event of (numerically) zero probability: collapsing onto
/// an orthogonal outcome, or post-selecting an impossible (a, b) pair.
class ImpossibleBranch : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// The self-adjoint eigensolver failed.
class ConvergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace abl
