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

#include "abl_lab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "abl_lab/errors.hpp"

namespace abl {

namespace {

constexpr double kProbabilitySlack = 1e-12;

std::string eigenvalue_label(double value, bool signed_spectrum) {
    if (std::abs(value) < 1e-12) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), signed_spectrum ? "%+.10g" : "%.10g", value);
    return buf;
}

std::string exact_label(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double clamp_probability(double raw) {
    if (raw < -kProbabilitySlack || raw > 1.0 + kProbabilitySlack || std::isnan(raw)) {
        throw ValidationError("Born probability " + std::to_string(raw) +
                              " outside [0, 1]; projector or state is malformed");
    }
    return std::clamp(raw, 0.0, 1.0);
}

}  // namespace

// ----------------------------------------------------------------- states

QuantumState QuantumState::pure(ComplexVector vector, double tol) {
    if (!vector.is_unit(tol)) {
        throw ValidationError("pure state must have unit norm (norm = " + std::to_string(vector.norm()) + ")");
    }
    return QuantumState(std::move(vector));
}

QuantumState QuantumState::mixed(ComplexOperator density, double tol) {
    if (!density.is_self_adjoint(tol)) {
        throw ValidationError("density matrix must be self-adjoint");
    }
    if (!density.is_unit_trace(tol)) {
        throw ValidationError("density matrix must have unit trace");
    }
    if (!density.is_positive_semidefinite(tol)) {
        throw ValidationError("density matrix must be positive semidefinite");
    }
    return QuantumState(std::move(density));
}

std::size_t QuantumState::dim() const {
    return std::visit([](const auto& d) { return d.dim(); }, data_);
}

const ComplexVector& QuantumState::vector() const {
    if (!is_pure()) {
        throw ValidationError("state is mixed; no state vector available");
    }
    return std::get<ComplexVector>(data_);
}

ComplexOperator QuantumState::density() const {
    if (is_pure()) {
        return ComplexOperator::projector(std::get<ComplexVector>(data_));
    }
    return std::get<ComplexOperator>(data_);
}

// ------------------------------------------------------------ observables

Observable::Observable(std::string name, ComplexOperator op, std::vector<Outcome> outcomes)
    : name_(std::move(name)), op_(std::move(op)), outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) {
        throw ValidationError("observable '" + name_ + "' has no outcomes");
    }
    std::set<std::string> seen;
    ComplexOperator sum(op_.dim());
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        const Outcome& oi = outcomes_[i];
        if (!seen.insert(oi.label).second) {
            throw ValidationError("observable '" + name_ + "' has duplicate outcome label '" + oi.label + "'");
        }
        if (oi.projector.dim() != op_.dim()) {
            throw DimensionError("observable '" + name_ + "': projector dimension mismatch");
        }
        for (std::size_t j = i; j < outcomes_.size(); ++j) {
            const ComplexOperator product = matmul(oi.projector, outcomes_[j].projector);
            const ComplexOperator expected = i == j ? oi.projector : ComplexOperator(op_.dim());
            if (max_abs_diff(product, expected) > kPvmTol) {
                throw ValidationError("observable '" + name_ + "': projectors do not satisfy P_i P_j = delta_ij P_i");
            }
        }
        sum += oi.projector;
    }
    if (max_abs_diff(sum, ComplexOperator::identity(op_.dim())) > kPvmTol) {
        throw ValidationError("observable '" + name_ + "': projectors do not sum to the identity");
    }
}

bool Observable::complete() const noexcept {
    return std::all_of(outcomes_.begin(), outcomes_.end(), [](const Outcome& o) { return o.rank() == 1; });
}

std::optional<std::size_t> Observable::find(const std::string& label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i].label == label) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t Observable::index_of(const std::string& label) const {
    if (auto index = find(label)) {
        return *index;
    }
    std::string known;
    for (const Outcome& o : outcomes_) {
        known += (known.empty() ? "" : ", ") + o.label;
    }
    throw ValidationError("observable '" + name_ + "' has no outcome '" + label + "' (known: " + known + ")");
}

Observable observable_from_operator(const ComplexOperator& op, std::string name, double degeneracy_tol,
                                    std::optional<std::vector<std::string>> labels) {
    if (!op.is_self_adjoint(kDefaultTol)) {
        throw ValidationError("observable '" + name + "' is not self-adjoint");
    }
    const Eigendecomposition spectrum = eigendecompose_self_adjoint(op, kDefaultTol);

    // Group ascending eigenvalues whose neighbour gap is within the tolerance.
    std::vector<std::vector<const EigenPair*>> groups;
    for (const EigenPair& pair : spectrum.pairs) {
        if (groups.empty() || pair.value - groups.back().back()->value > degeneracy_tol) {
            groups.emplace_back();
        }
        groups.back().push_back(&pair);
    }

    if (labels && labels->size() != groups.size()) {
        throw ValidationError("observable '" + name + "' has " + std::to_string(groups.size()) +
                              " distinct outcomes but " + std::to_string(labels->size()) + " labels were given");
    }

    const bool signed_spectrum = spectrum.pairs.front().value < -1e-12;
    std::vector<Outcome> outcomes;
    outcomes.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double mean = 0;
        ComplexOperator projector(op.dim());
        std::vector<ComplexVector> basis;
        for (const EigenPair* pair : groups[g]) {
            mean += pair->value;
            projector += ComplexOperator::projector(pair->vector);
            basis.push_back(pair->vector);
        }
        mean /= static_cast<double>(groups[g].size());
        std::string label = labels ? (*labels)[g] : eigenvalue_label(mean, signed_spectrum);
        outcomes.push_back({std::move(label), mean, std::move(projector), std::move(basis)});
    }

    if (!labels) {
        // Distinct eigenvalues can share a rounded label; fall back to full
        // precision for the colliding ones.
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
                if (outcomes[i].label == outcomes[j].label) {
                    outcomes[i].label = exact_label(outcomes[i].eigenvalue);
                    outcomes[j].label = exact_label(outcomes[j].eigenvalue);
                }
            }
        }
    }
    return Observable(std::move(name), op, std::move(outcomes));
}

Observable pauli_x() {
    return observable_from_operator(ComplexOperator(2, {0, 1, 1, 0}), "pauli_x", kDefaultDegeneracyTol,
                                    std::vector<std::string>{"x-", "x+"});
}

Observable pauli_y() {
    const Complex i(0, 1);
    return observable_from_operator(ComplexOperator(2, {0, -i, i, 0}), "pauli_y", kDefaultDegeneracyTol,
                                    std::vector<std::string>{"y-", "y+"});
}

Observable pauli_z() {
    return observable_from_operator(ComplexOperator(2, {1, 0, 0, -1}), "pauli_z", kDefaultDegeneracyTol,
                                    std::vector<std::string>{"z-", "z+"});
}

Observable identity_observable(std::size_t dim) {
    return observable_from_operator(ComplexOperator::identity(dim), "identity");
}

bool is_builtin_observable(const std::string& name) {
    return name == "pauli_x" || name == "pauli_y" || name == "pauli_z" || name == "identity";
}

Observable builtin_observable(const std::string& builtin, std::size_t dim) {
    if (builtin == "identity") {
        return identity_observable(dim);
    }
    if (!is_builtin_observable(builtin)) {
        throw ValidationError("unknown builtin observable '" + builtin + "'");
    }
    if (dim != 2) {
        throw DimensionError("builtin '" + builtin + "' acts on dimension 2, protocol has dimension " +
                             std::to_string(dim));
    }
    if (builtin == "pauli_x") return pauli_x();
    if (builtin == "pauli_y") return pauli_y();
    return pauli_z();
}

// ------------------------------------------------------ Born and collapse

namespace detail {

double born_unchecked(const QuantumState& state, const ComplexOperator& projector) {
    if (state.is_pure()) {
        const double n = apply(projector, state.vector()).norm();
        return n * n;
    }
    const ComplexOperator rho = state.density();
    Complex sum = 0;
    const std::size_t n = rho.dim();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            sum += projector(r, c) * rho(c, r);
        }
    }
    return sum.real();
}

QuantumState collapse_unchecked(const QuantumState& state, const ComplexOperator& projector, double probability) {
    if (probability <= kImpossibleTol) {
        throw ImpossibleBranch("collapse onto an outcome of zero probability");
    }
    if (state.is_pure()) {
        return QuantumState::pure(apply(projector, state.vector()).normalized().phase_fixed());
    }
    ComplexOperator projected = projector * state.density() * projector;
    const double norm = trace(projected).real();
    projected *= Complex(1.0 / norm);
    return QuantumState::mixed(std::move(projected), 1e-9);
}

}  // namespace detail

namespace {

void check_projector(const QuantumState& state, const ComplexOperator& projector) {
    if (state.dim() != projector.dim()) {
        throw DimensionError("state has dimension " + std::to_string(state.dim()) + ", projector has dimension " +
                             std::to_string(projector.dim()));
    }
    if (!projector.is_projector(kPvmTol)) {
        throw ValidationError("operator is not an orthogonal projector");
    }
}

}  // namespace

double born_probability(const QuantumState& state, const ComplexOperator& projector) {
    check_projector(state, projector);
    return clamp_probability(detail::born_unchecked(state, projector));
}

QuantumState collapse(const QuantumState& state, const ComplexOperator& projector) {
    const double p = born_probability(state, projector);
    return detail::collapse_unchecked(state, projector, p);
}

std::vector<double> outcome_distribution(const QuantumState& state, const Observable& obs) {
    if (state.dim() != obs.dim()) {
        throw DimensionError("state has dimension " + std::to_string(state.dim()) + ", observable '" + obs.name() +
                             "' has dimension " + std::to_string(obs.dim()));
    }
    std::vector<double> probs;
    probs.reserve(obs.size());
    for (const Outcome& o : obs.outcomes()) {
        probs.push_back(clamp_probability(detail::born_unchecked(state, o.projector)));
    }
    return probs;
}

MeasurementResult measure_sample(const QuantumState& state, const Observable& obs, RandomStream& rng) {
    const std::vector<double> probs = outcome_distribution(state, obs);
    const double u = rng.uniform();
    std::size_t chosen = probs.size();
    double cumulative = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) {
            chosen = k;
            break;
        }
    }
    if (chosen == probs.size()) {
        // u landed in the round-off gap above the summed probabilities.
        for (std::size_t k = probs.size(); k-- > 0;) {
            if (probs[k] > kImpossibleTol) {
                chosen = k;
                break;
            }
        }
    }
    const Outcome& outcome = obs.outcome(chosen);
    return {chosen, outcome.label, detail::collapse_unchecked(state, outcome.projector, probs[chosen])};
}

}  // namespace abl
