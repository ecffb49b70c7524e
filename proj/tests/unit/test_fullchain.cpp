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

#include "abl_lab/abl.hpp"
#include "abl_lab/errors.hpp"
#include "abl_lab/random_models.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace abl;
using namespace abl::testing;

namespace {

Protocol spin() { return Protocol({pauli_z(), "z+"}, {pauli_x(), pauli_y()}, {pauli_z(), "z-"}); }

// Sum over a', c, b' of (P_b' P_cn..P_c1 P_a' |Psi>) (x) |dev(c)> (x) |obs(a',b')>.
ComplexVector closed_form_final(const ChainModel& m, const Protocol& p) {
    ComplexVector total(m.total_dim());
    const ComplexVector psi = p.initial_state().vector();
    const auto& A = p.pre().observable;
    const auto& B = p.post().observable;
    for (std::size_t a = 0; a < A.size(); ++a) {
        for (std::size_t b = 0; b < B.size(); ++b) {
            for_each_sequence(p, [&](std::span<const std::size_t> idx) {
                ComplexVector v = apply(A.outcome(a).projector, psi);
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    v = apply(p.intermediates()[i].outcome(idx[i]).projector, v);
                }
                v = apply(B.outcome(b).projector, v);
                total += tensor(tensor(v, m.device_pointer(idx)), m.observer_pointer(a, b));
            });
        }
    }
    return total;
}

std::size_t expected_device_dim(const Protocol& p) {
    std::size_t dim = 1, prod = 1;
    for (const auto& c : p.intermediates()) {
        prod *= c.size();
        dim += prod;
    }
    return dim;
}

}  // namespace

TEST(fullchain, dimensions) {
    const Protocol p = spin();
    const ChainModel m(p);
    ASSERT_EQ(m.subject_dim(), 2u);
    ASSERT_EQ(m.device_dim(), 1u + 2u + 4u);
    ASSERT_EQ(m.observer_dim(), 1u + 2u + 4u);
    ASSERT_EQ(m.total_dim(), 2u * 7u * 7u);

    const Protocol q = fixture("qutrit_matrix.protocol");
    ASSERT_EQ(ChainModel(q).device_dim(), expected_device_dim(q));
}

TEST(fullchain, pointers_are_orthonormal) {
    for (std::optional<std::uint64_t> seed : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{5}}) {
        const ChainModel m(spin(), seed);
        std::vector<ComplexVector> ptrs;
        std::vector<std::size_t> prefix;
        ptrs.push_back(m.device_pointer(prefix));
        for (std::size_t c1 = 0; c1 < 2; ++c1) {
            prefix = {c1};
            ptrs.push_back(m.device_pointer(prefix));
            for (std::size_t c2 = 0; c2 < 2; ++c2) {
                prefix = {c1, c2};
                ptrs.push_back(m.device_pointer(prefix));
            }
        }
        for (std::size_t i = 0; i < ptrs.size(); ++i) {
            for (std::size_t j = 0; j < ptrs.size(); ++j) {
                ASSERT_NEAR(std::abs(inner(ptrs[i], ptrs[j])), i == j ? 1.0 : 0.0, 1e-12);
            }
        }
    }
}

TEST(fullchain, final_state_matches_closed_form_and_is_normalised) {
    for (std::uint64_t i = 0; i < 40; ++i) {
        RandomStream rng = RandomStream::stream(51, i);
        Protocol p = random_protocol(2 + rng.below(2), rng.below(3), rng);
        p = p.with_initial_state(QuantumState::pure(random_unit_vector(p.dim(), rng)));
        const std::optional<std::uint64_t> ps = rng.bernoulli(0.5) ? std::optional<std::uint64_t>(i) : std::nullopt;
        const ChainModel m(p, ps);
        const ComplexVector fin = evolve_chain(m, p);
        ASSERT_NEAR(fin.norm(), 1.0, 1e-12);
        ASSERT_LE(max_abs_diff(fin, closed_form_final(m, p)), 1e-12);
        const auto steps = evolve_chain_steps(m, p);
        ASSERT_EQ(steps.size(), p.n() + 3);
        for (const auto& s : steps) {
            ASSERT_NEAR(s.norm(), 1.0, 1e-12);
        }
    }
}

TEST(fullchain, no_intermediates_final_state) {
    const Protocol p = fixture("no_intermediates.protocol");
    const ChainModel m(p);
    ASSERT_EQ(m.device_dim(), 1u);
    ASSERT_LE(max_abs_diff(evolve_chain(m, p), closed_form_final(m, p)), 1e-12);
    const DeviceState d = device_state_given_obs(m, p, p.pre().label, p.post().label);
    ASSERT_EQ(d.sequence_probabilities.size(), 1u);
    ASSERT_NEAR(d.sequence_probabilities[0], 1.0, 1e-12);
}

TEST(fullchain, observer_probability_equals_overall) {
    for (std::uint64_t i = 0; i < 40; ++i) {
        RandomStream rng = RandomStream::stream(52, i);
        Protocol p = random_protocol(2 + rng.below(2), rng.below(3), rng);
        p = p.with_initial_state(QuantumState::pure(random_unit_vector(p.dim(), rng)));
        const ChainModel m(p);
        const ComplexVector fin = evolve_chain(m, p);
        ASSERT_NEAR(observer_probability(m, fin, p.pre_index(), p.post_index()), overall_probability(p), 1e-12);
        const auto joint = joint_distribution(p);
        std::size_t k = 0;
        for_each_sequence(p, [&](std::span<const std::size_t> idx) {
            ASSERT_NEAR(observer_device_probability(m, fin, p.pre_index(), p.post_index(), idx),
                        joint[k++].probability, 1e-12);
        });
    }
}

TEST(fullchain, device_state_reproduces_conditional_and_is_rank_one) {
    const Protocol p = spin();
    const DeviceState d = device_state_given_obs(ChainModel(p), p, "z+", "z-");
    ASSERT_LT(d.second_eigenvalue, kRankOneTol);
    for (double q : d.sequence_probabilities) {
        ASSERT_NEAR(q, 0.25, 1e-12);
    }
    ASSERT_NEAR(d.vector.norm(), 1.0, 1e-12);

    for (std::uint64_t i = 0; i < 60; ++i) {
        RandomStream rng = RandomStream::stream(53, i);
        const Protocol q = random_protocol(2 + rng.below(2), rng.below(3), rng);
        if (abl_normalization(q) <= kImpossibleTol) continue;
        const ChainModel m(q, rng.next_u64());
        const DeviceState ds = device_state_given_obs(m, q, q.pre().label, q.post().label);
        ASSERT_LT(ds.second_eigenvalue, kRankOneTol);
        const auto cond = conditional_distribution(q);
        for (std::size_t k = 0; k < cond.size(); ++k) {
            ASSERT_NEAR(ds.sequence_probabilities[k], cond[k].probability, 1e-10);
        }
    }
}

TEST(fullchain, impossible_observer_record) {
    const Protocol p({pauli_z(), "z+"}, {}, {pauli_z(), "z-"});
    ASSERT_THROW(device_state_given_obs(ChainModel(p), p, "z+", "z-"), ImpossibleBranch);
}

TEST(fullchain, requires_pure_state_and_bounded_dimension) {
    const Protocol mixed = spin().with_initial_state(QuantumState::mixed(0.5 * ComplexOperator::identity(2)));
    ASSERT_THROW(evolve_chain(ChainModel(mixed), mixed), ValidationError);
    const Protocol big({pauli_z(), "z+"}, std::vector<Observable>(9, pauli_x()), {pauli_z(), "z-"});
    ASSERT_THROW(evolve_chain(ChainModel(big), big), ValidationError);
}
