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

#include "abl_lab/fullchain.hpp"

#include <stdexcept>

#include "abl_lab/errors.hpp"
#include "abl_lab/random_models.hpp"

namespace abl {

namespace {

constexpr std::size_t kSubject = 0;
constexpr std::size_t kDevice = 1;
constexpr std::size_t kObserver = 2;

std::vector<ComplexVector> pointer_basis(std::size_t dim, std::optional<std::uint64_t> seed, std::uint64_t salt) {
    std::vector<ComplexVector> pointers;
    pointers.reserve(dim);
    if (!seed) {
        for (std::size_t i = 0; i < dim; ++i) {
            pointers.push_back(ComplexVector::basis(dim, i));
        }
        return pointers;
    }
    RandomStream rng = RandomStream::stream(*seed, salt);
    const ComplexOperator u = random_unitary(dim, rng);
    for (std::size_t c = 0; c < dim; ++c) {
        ComplexVector column(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            column[r] = u(r, c);
        }
        pointers.push_back(std::move(column));
    }
    return pointers;
}

// Digits of the `ordinal`-th prefix of the given length, last digit fastest.
std::vector<std::size_t> prefix_digits(const std::vector<std::size_t>& radices, std::size_t length,
                                       std::size_t ordinal) {
    std::vector<std::size_t> digits(length);
    for (std::size_t i = length; i-- > 0;) {
        digits[i] = ordinal % radices[i];
        ordinal /= radices[i];
    }
    return digits;
}

std::size_t prefix_count(const std::vector<std::size_t>& radices, std::size_t length) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < length; ++i) {
        count *= radices[i];
    }
    return count;
}

// sum_k (S_k x D_k x O_k) |v>, with identity wherever an operator is absent.
struct ProductTerm {
    const ComplexOperator* subject;
    const ComplexOperator* device;
    const ComplexOperator* observer;
};

ComplexVector apply_terms(const std::vector<ProductTerm>& terms, const ComplexVector& v,
                          const std::vector<std::size_t>& dims) {
    ComplexVector out(v.dim());
    for (const ProductTerm& t : terms) {
        ComplexVector w = v;
        if (t.observer) w = apply_on_factor(*t.observer, w, dims, kObserver);
        if (t.device) w = apply_on_factor(*t.device, w, dims, kDevice);
        if (t.subject) w = apply_on_factor(*t.subject, w, dims, kSubject);
        out += w;
    }
    return out;
}

void require_chain_size(const ChainModel& model) {
    if (model.total_dim() > kMaxChainDim) {
        throw ValidationError("full-chain model needs total dimension " + std::to_string(model.total_dim()) +
                              ", above the limit of " + std::to_string(kMaxChainDim));
    }
}

}  // namespace

ChainModel::ChainModel(const Protocol& p, std::optional<std::uint64_t> pointer_seed)
    : subject_dim_(p.dim()),
      radices_(p.radices()),
      pre_outcomes_(p.pre().observable.size()),
      post_outcomes_(p.post().observable.size()) {
    std::size_t slots = 0;
    for (std::size_t level = 0; level <= radices_.size(); ++level) {
        level_offsets_.push_back(slots);
        slots += prefix_count(radices_, level);
    }
    device_pointers_ = pointer_basis(slots, pointer_seed, 0);
    observer_pointers_ = pointer_basis(1 + pre_outcomes_ + pre_outcomes_ * post_outcomes_, pointer_seed, 1);
}

std::size_t ChainModel::device_slot(std::span<const std::size_t> prefix) const {
    if (prefix.size() > radices_.size()) {
        throw DimensionError("device_slot: prefix longer than the protocol");
    }
    std::size_t ordinal = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i] >= radices_[i]) {
            throw DimensionError("device_slot: outcome index out of range");
        }
        ordinal = ordinal * radices_[i] + prefix[i];
    }
    return level_offsets_[prefix.size()] + ordinal;
}

const ComplexVector& ChainModel::device_pointer(std::span<const std::size_t> prefix) const {
    return device_pointers_[device_slot(prefix)];
}

const ComplexVector& ChainModel::observer_pointer(std::size_t a) const {
    if (a >= pre_outcomes_) {
        throw DimensionError("observer_pointer: outcome index out of range");
    }
    return observer_pointers_[1 + a];
}

const ComplexVector& ChainModel::observer_pointer(std::size_t a, std::size_t b) const {
    if (a >= pre_outcomes_ || b >= post_outcomes_) {
        throw DimensionError("observer_pointer: outcome index out of range");
    }
    return observer_pointers_[1 + pre_outcomes_ + a * post_outcomes_ + b];
}

ComplexVector initial_total_state(const ChainModel& model, const Protocol& p) {
    require_chain_size(model);
    const QuantumState psi = p.initial_state();
    if (!psi.is_pure()) {
        throw ValidationError("full-chain model requires a pure initial state");
    }
    return tensor(tensor(psi.vector(), model.device_pointer(std::span<const std::size_t>{})), model.observer_ready());
}

std::vector<ComplexVector> evolve_chain_steps(const ChainModel& model, const Protocol& p) {
    const std::vector<std::size_t> dims = model.factor_dims();
    const std::vector<std::size_t> radices = p.radices();
    std::vector<ComplexVector> steps;
    steps.push_back(initial_total_state(model, p));

    // Observer measures A: |obs()> -> |obs(a)> on the P_a branch.
    {
        const Observable& A = p.pre().observable;
        std::vector<ComplexOperator> records;
        for (std::size_t a = 0; a < A.size(); ++a) {
            records.push_back(ComplexOperator::outer(model.observer_pointer(a), model.observer_ready()));
        }
        std::vector<ProductTerm> terms;
        for (std::size_t a = 0; a < A.size(); ++a) {
            terms.push_back({&A.outcome(a).projector, nullptr, &records[a]});
        }
        steps.push_back(apply_terms(terms, steps.back(), dims));
    }

    // Device measures C_k: |dev(c_1..c_{k-1})> -> |dev(c_1..c_k)> on the P_ck branch.
    for (std::size_t k = 0; k < p.n(); ++k) {
        const Observable& C = p.intermediates()[k];
        std::vector<ComplexOperator> records(C.size(), ComplexOperator(model.device_dim()));
        const std::size_t parents = prefix_count(radices, k);
        for (std::size_t ordinal = 0; ordinal < parents; ++ordinal) {
            std::vector<std::size_t> prefix = prefix_digits(radices, k, ordinal);
            const ComplexVector& parent = model.device_pointer(prefix);
            prefix.push_back(0);
            for (std::size_t c = 0; c < C.size(); ++c) {
                prefix.back() = c;
                records[c] += ComplexOperator::outer(model.device_pointer(prefix), parent);
            }
        }
        std::vector<ProductTerm> terms;
        for (std::size_t c = 0; c < C.size(); ++c) {
            terms.push_back({&C.outcome(c).projector, &records[c], nullptr});
        }
        steps.push_back(apply_terms(terms, steps.back(), dims));
    }

    // Observer measures B: |obs(a)> -> |obs(a,b)> on the P_b branch.
    {
        const Observable& A = p.pre().observable;
        const Observable& B = p.post().observable;
        std::vector<ComplexOperator> records(B.size(), ComplexOperator(model.observer_dim()));
        for (std::size_t b = 0; b < B.size(); ++b) {
            for (std::size_t a = 0; a < A.size(); ++a) {
                records[b] += ComplexOperator::outer(model.observer_pointer(a, b), model.observer_pointer(a));
            }
        }
        std::vector<ProductTerm> terms;
        for (std::size_t b = 0; b < B.size(); ++b) {
            terms.push_back({&B.outcome(b).projector, nullptr, &records[b]});
        }
        steps.push_back(apply_terms(terms, steps.back(), dims));
    }
    return steps;
}

ComplexVector evolve_chain(const ChainModel& model, const Protocol& p) {
    ComplexVector final_state = evolve_chain_steps(model, p).back();
    if (!final_state.is_unit(1e-10)) {
        throw std::logic_error("full-chain evolution lost normalisation");
    }
    return final_state;
}

double observer_probability(const ChainModel& model, const ComplexVector& final_state, std::size_t a,
                            std::size_t b) {
    const ComplexOperator record = ComplexOperator::projector(model.observer_pointer(a, b));
    const ComplexVector projected = apply_on_factor(record, final_state, model.factor_dims(), kObserver);
    return inner(final_state, projected).real();
}

double observer_device_probability(const ChainModel& model, const ComplexVector& final_state, std::size_t a,
                                   std::size_t b, std::span<const std::size_t> sequence) {
    const auto dims = model.factor_dims();
    const ComplexOperator obs_record = ComplexOperator::projector(model.observer_pointer(a, b));
    const ComplexOperator dev_record = ComplexOperator::projector(model.device_pointer(sequence));
    ComplexVector projected = apply_on_factor(obs_record, final_state, dims, kObserver);
    projected = apply_on_factor(dev_record, projected, dims, kDevice);
    return inner(final_state, projected).real();
}

DeviceState device_state_given_obs(const ChainModel& model, const Protocol& p, const ComplexVector& final_state,
                                   const std::string& a, const std::string& b) {
    const std::size_t ai = p.pre().observable.index_of(a);
    const std::size_t bi = p.post().observable.index_of(b);
    const auto dims = model.factor_dims();

    const ComplexOperator record = ComplexOperator::projector(model.observer_pointer(ai, bi));
    const ComplexVector projected = apply_on_factor(record, final_state, dims, kObserver);
    const double norm_sq = projected.norm() * projected.norm();
    if (norm_sq <= kImpossibleTol) {
        throw ImpossibleBranch("observer record obs(" + a + "," + b + ") has zero probability");
    }
    const std::size_t keep[] = {kDevice};
    ComplexOperator rho_dev = reduced_density(projected, dims, keep);
    rho_dev *= Complex(1.0 / norm_sq);

    const Eigendecomposition spectrum = eigendecompose_self_adjoint(rho_dev, 1e-9);
    const std::size_t m = spectrum.pairs.size();
    const double second = m > 1 ? spectrum.pairs[m - 2].value : 0.0;
    if (second > kRankOneTol) {
        throw std::logic_error("conditioned device state is not rank one (second eigenvalue " +
                               std::to_string(second) + ")");
    }
    DeviceState out{spectrum.pairs[m - 1].vector, second, {}};
    for_each_sequence(p, [&](std::span<const std::size_t> seq) {
        out.sequence_probabilities.push_back(std::norm(inner(model.device_pointer(seq), out.vector)));
    });
    return out;
}

DeviceState device_state_given_obs(const ChainModel& model, const Protocol& p, const std::string& a,
                                   const std::string& b) {
    return device_state_given_obs(model, p, evolve_chain(model, p), a, b);
}

}  // namespace abl
