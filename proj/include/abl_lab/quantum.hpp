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

/**
 * @file
 * Textbook measurement kernel: states, observables as projection-valued
 * measures, Born probabilities and collapse.
 */

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abl_lab/linalg.hpp"
#include "abl_lab/random.hpp"

namespace abl {

/// Tolerance used when checking state invariants (norm, trace).
inline constexpr double kStateTol = 1e-10;
/// Tolerance for PVM orthogonality and completeness.
inline constexpr double kPvmTol = 1e-9;
/// Eigenvalues closer than this are merged into one outcome by default.
inline constexpr double kDefaultDegeneracyTol = 1e-8;
/// Probabilities at or below this are treated as impossible when conditioning.
inline constexpr double kImpossibleTol = 1e-14;

/// A unit state vector or a density matrix.
class QuantumState {
   public:
    static QuantumState pure(ComplexVector vector, double tol = kStateTol);
    static QuantumState mixed(ComplexOperator density, double tol = kStateTol);

    bool is_pure() const noexcept { return std::holds_alternative<ComplexVector>(data_); }
    std::size_t dim() const;
    /// Throws ValidationError for mixed states.
    const ComplexVector& vector() const;
    /// For pure states, the rank-one projector |psi><psi|.
    ComplexOperator density() const;

   private:
    explicit QuantumState(std::variant<ComplexVector, ComplexOperator> data) : data_(std::move(data)) {}

    std::variant<ComplexVector, ComplexOperator> data_;
};

struct Outcome {
    std::string label;
    double eigenvalue;
    ComplexOperator projector;
    /// Orthonormal eigenvectors spanning the projector's range.
    std::vector<ComplexVector> basis;

    std::size_t rank() const noexcept { return basis.size(); }
};

/**
 * A self-adjoint operator together with its spectral PVM.
 *
 * Outcomes are stored in ascending eigenvalue order. Sampling walks them in
 * this order, so it is part of the reproducibility contract.
 */
class Observable {
   public:
    Observable(std::string name, ComplexOperator op, std::vector<Outcome> outcomes);

    const std::string& name() const noexcept { return name_; }
    const ComplexOperator& op() const noexcept { return op_; }
    const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
    std::size_t dim() const noexcept { return op_.dim(); }
    std::size_t size() const noexcept { return outcomes_.size(); }
    const Outcome& outcome(std::size_t index) const { return outcomes_.at(index); }

    /// True iff every projector has rank one.
    bool complete() const noexcept;

    std::optional<std::size_t> find(const std::string& label) const;
    /// Throws ValidationError naming the observable when the label is unknown.
    std::size_t index_of(const std::string& label) const;

   private:
    std::string name_;
    ComplexOperator op_;
    std::vector<Outcome> outcomes_;
};

/**
 * Builds the PVM of a self-adjoint operator.
 *
 * Eigenvalues within `degeneracy_tol` of their neighbour are merged into a
 * single outcome. Labels default to the stringified eigenvalues (with an
 * explicit '+' on positive values when the spectrum has negative ones); if
 * `labels` is given it must have one entry per merged outcome.
 */
Observable observable_from_operator(const ComplexOperator& op, std::string name = "",
                                    double degeneracy_tol = kDefaultDegeneracyTol,
                                    std::optional<std::vector<std::string>> labels = std::nullopt);

// Spin-1/2 builtins, labelled by the eigenbasis they select ("x-", "x+", ...).
Observable pauli_x();
Observable pauli_y();
Observable pauli_z();
/// Single fully degenerate outcome "1".
Observable identity_observable(std::size_t dim);

/// Builtin names accepted by builtin_observable: pauli_x, pauli_y, pauli_z,
/// identity.
bool is_builtin_observable(const std::string& name);
Observable builtin_observable(const std::string& builtin, std::size_t dim);

/**
 * Born probability of `projector` in `state`, clamped to [0, 1].
 *
 * Raw values below -1e-12 or above 1 + 1e-12 signal a malformed projector and
 * raise ValidationError.
 */
double born_probability(const QuantumState& state, const ComplexOperator& projector);

/// Normalised projection of `state` onto the projector's range. Throws
/// ImpossibleBranch when the Born probability is at most kImpossibleTol.
QuantumState collapse(const QuantumState& state, const ComplexOperator& projector);

struct MeasurementResult {
    std::size_t outcome_index;
    std::string label;
    QuantumState state;
};

/**
 * Samples one measurement of `obs`.
 *
 * Draws exactly one uniform u from `rng` and returns the first outcome whose
 * cumulative Born probability (in stored order) exceeds u, together with the
 * collapsed state.
 */
MeasurementResult measure_sample(const QuantumState& state, const Observable& obs, RandomStream& rng);

/// Born probabilities of every outcome of `obs`, in stored order.
std::vector<double> outcome_distribution(const QuantumState& state, const Observable& obs);

namespace detail {
// Unchecked fast paths for projectors already validated by an Observable.
double born_unchecked(const QuantumState& state, const ComplexOperator& projector);
QuantumState collapse_unchecked(const QuantumState& state, const ComplexOperator& projector, double probability);
}  // namespace detail

}  // namespace abl
