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

#include "abl_lab/abl.hpp"

#include "abl_lab/errors.hpp"
#include "abl_lab/random_models.hpp"
#include "abl_lab/verify.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace abl;
using namespace abl::testing;

namespace {

Protocol spin() { return Protocol({pauli_z(), "z+"}, {pauli_x(), pauli_y()}, {pauli_z(), "z-"}); }

// Product of Born factors along the measurement chain, collapsing after each.
double born_chain(const Protocol& p, const std::vector<std::size_t>& mids) {
    QuantumState s = p.initial_state();
    double prob = 1.0;
    auto step = [&](const ComplexOperator& proj) {
        const double q = born_probability(s, proj);
        prob *= q;
        // Branches this small contribute far below the comparison tolerance.
        if (q <= 1e-14) {
            prob = 0;
            return false;
        }
        s = collapse(s, proj);
        return true;
    };
    if (!step(p.pre_projector())) return 0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        if (!step(p.intermediates()[i].outcome(mids[i]).projector)) return 0;
    }
    step(p.post_projector());
    return prob;
}

std::vector<double> born_chain_all(const Protocol& p) {
    std::vector<double> out;
    for_each_sequence(p, [&](std::span<const std::size_t> idx) {
        out.push_back(born_chain(p, std::vector<std::size_t>(idx.begin(), idx.end())));
    });
    return out;
}

Protocol random_case(std::uint64_t seed, std::uint64_t i, std::size_t max_dim = 4, std::size_t max_n = 3) {
    RandomStream rng = RandomStream::stream(seed, i);
    return random_protocol(2 + rng.below(max_dim - 1), rng.below(max_n + 1), rng);
}

}  // namespace

TEST(abl, spin_example_quarter_each) {
    const Protocol p = spin();
    for (const auto& sp : abl_distribution(p)) {
        ASSERT_NEAR(sp.probability, 0.25, 1e-12) << to_string(sp.sequence);
    }
    ASSERT_NEAR(abl_probability(p, {{"x+", "y-"}}), 0.25, 1e-12);
}

TEST(abl, aad_modified_example_is_certain) {
    const Protocol p({pauli_z(), "z+"}, {pauli_x()}, {pauli_x(), "x+"});
    ASSERT_NEAR(abl_probability(p, {{"x+"}}), 1.0, 1e-12);
    ASSERT_NEAR(abl_probability(p, {{"x-"}}), 0.0, 1e-12);
}

TEST(abl, no_intermediates_single_row_of_one) {
    const Protocol p({pauli_z(), "z+"}, {}, {pauli_x(), "x-"});
    const auto dist = abl_distribution(p);
    ASSERT_EQ(dist.size(), 1u);
    ASSERT_EQ(dist[0].probability, 1.0);
}

TEST(abl, impossible_postselection) {
    const Protocol p({pauli_z(), "z+"}, {}, {pauli_z(), "z-"});
    ASSERT_LE(abl_normalization(p), kImpossibleTol);
    ASSERT_THROW(abl_distribution(p), ImpossibleBranch);
    ASSERT_THROW(conditional_probability(p, {{}}), ImpossibleBranch);
    // The same pair with an intermediate sigma_x becomes possible.
    ASSERT_GT(abl_normalization(Protocol({pauli_z(), "z+"}, {pauli_x()}, {pauli_z(), "z-"})), 0.1);
}

TEST(abl, overall_and_joint_spin_example) {
    const Protocol p = spin();
    ASSERT_NEAR(overall_probability(p), 0.5, 1e-12);
    ASSERT_NEAR(joint_probability(p, {{"x+", "y-"}}), 0.125, 1e-12);
    const Protocol orth = p.with_initial_state(QuantumState::pure(ket({0, 1})));
    ASSERT_EQ(overall_probability(orth), 0.0);
}

TEST(abl, joint_matches_sequential_born_chain) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        RandomStream rng = RandomStream::stream(41, i);
        Protocol p = random_case(42, i);
        p = p.with_initial_state(rng.bernoulli(0.5) ? QuantumState::pure(random_unit_vector(p.dim(), rng))
                                                    : random_mixed_state(p.dim(), rng));
        const auto joint = joint_distribution(p);
        const auto chain = born_chain_all(p);
        for (std::size_t k = 0; k < chain.size(); ++k) {
            ASSERT_NEAR(joint[k].probability, chain[k], 1e-12);
        }
    }
}

TEST(abl, joint_without_intermediates_is_two_factor_chain) {
    RandomStream rng = RandomStream::stream(43, 0);
    for (int t = 0; t < 50; ++t) {
        const std::size_t d = 2 + rng.below(3);
        const Observable a = random_complete_observable(d, rng, "A");
        const Observable b = random_complete_observable(d, rng, "B");
        const ComplexVector psi = random_unit_vector(d, rng);
        const Protocol p({a, a.outcome(0).label}, {}, {b, b.outcome(0).label}, QuantumState::pure(psi));
        const double expected = std::norm(inner(b.outcome(0).basis[0], a.outcome(0).basis[0])) *
                                std::norm(inner(a.outcome(0).basis[0], psi));
        ASSERT_NEAR(joint_probability(p, {{}}), expected, 1e-12);
    }
}

TEST(abl, overall_sums_to_one_over_all_pre_post_pairs) {
    for (std::uint64_t i = 0; i < 30; ++i) {
        RandomStream rng = RandomStream::stream(44, i);
        const Protocol base = random_case(45, i, 3, 2);
        const QuantumState psi = QuantumState::pure(random_unit_vector(base.dim(), rng));
        double total = 0;
        for (const Outcome& a : base.pre().observable.outcomes()) {
            for (const Outcome& b : base.post().observable.outcomes()) {
                total += overall_probability(
                    Protocol({base.pre().observable, a.label}, base.intermediates(), {base.post().observable, b.label}, psi));
            }
        }
        ASSERT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(abl, invariants_on_random_protocols) {
    for (std::uint64_t i = 0; i < 300; ++i) {
        const Protocol p = random_case(46, i);
        if (abl_normalization(p) <= kImpossibleTol) {
            continue;
        }
        RandomStream rng = RandomStream::stream(47, i);
        const QuantumState psi1 = random_overlapping_state(p, rng);
        const QuantumState psi2 = random_overlapping_state(p, rng);
        const Protocol with_psi = p.with_initial_state(psi1);
        ASSERT_LE(checks::normalization(p), 1e-10);
        ASSERT_LE(checks::reverse_ordering_symmetry(p), 1e-10);
        ASSERT_LE(checks::marginalization(with_psi), 1e-12);
        ASSERT_LE(checks::bayes(with_psi), 1e-12);
        ASSERT_LE(checks::psi_independence(p, psi1, psi2), 1e-10);
        // With psi = |a> the conditional is the ABL value.
        const auto cond = conditional_distribution(p);
        const auto ablp = abl_distribution(p);
        for (std::size_t k = 0; k < cond.size(); ++k) {
            ASSERT_NEAR(cond[k].probability, ablp[k].probability, 1e-12);
            ASSERT_GE(ablp[k].probability, 0.0);
            ASSERT_LE(ablp[k].probability, 1.0);
        }
    }
}

TEST(abl, abl_matches_normalised_born_chain) {
    for (std::uint64_t i = 0; i < 100; ++i) {
        const Protocol p = random_case(48, i);
        const auto chain = born_chain_all(p);
        double total = 0;
        for (double c : chain) total += c;
        if (total <= 1e-12) continue;
        const auto ablp = abl_distribution(p);
        for (std::size_t k = 0; k < chain.size(); ++k) {
            ASSERT_NEAR(ablp[k].probability, chain[k] / total, 1e-10);
        }
    }
}

TEST(abl, preselected_joint_without_postselection) {
    const Protocol p({pauli_z(), "z+"}, {pauli_x()}, {pauli_x(), "x+"});
    ASSERT_NEAR(preselected_joint_probability(p, {{"x+"}}), 0.5, 1e-12);
    const Protocol q({pauli_z(), "z+"}, {pauli_z()}, {pauli_x(), "x+"});
    ASSERT_NEAR(preselected_joint_probability(q, {{"z+"}}), 0.5, 1e-12);
    const Protocol orth = p.with_initial_state(QuantumState::pure(ket({0, 1})));
    ASSERT_THROW(preselected_joint_probability(orth, {{"x+"}}), ImpossibleBranch);
}

TEST(abl, aad_compare_spin) {
    const AadReport r = aad_compare(pauli_z(), pauli_x(), pauli_x(), "z+", "x+", "x+");
    ASSERT_EQ(r.branches.size(), 3u);
    ASSERT_EQ(r.branches[0].protocol, "(A,C,B)");
    ASSERT_NEAR(*r.branches[0].conditional, 1.0, 1e-12);
    ASSERT_NEAR(*r.branches[1].conditional, 1.0, 1e-12);  // (A,A,B) at z+
    ASSERT_NEAR(*r.branches[0].without_postselection, 0.5, 1e-12);
    ASSERT_NEAR(*r.branches[1].without_postselection, 0.5, 1e-12);
    ASSERT_EQ(r.branches[0].ensemble, 1);
    ASSERT_EQ(r.branches[2].ensemble, 3);
    // C = B, so (A,C,B) and (A,B,B) coincide; the other two pairs cross ensembles.
    ASSERT_EQ(r.cross_ensemble_comparisons.size(), 2u);

    const AadReport r2 = aad_compare(pauli_z(), pauli_x(), pauli_y(), "z+", "x+", "y+");
    ASSERT_EQ(r2.cross_ensemble_comparisons.size(), 3u);
    ASSERT_NEAR(*r2.branches[0].conditional, 0.5, 1e-12);
}

TEST(abl, aad_reports_impossible_branch_without_throwing) {
    const AadReport r = aad_compare(pauli_z(), pauli_z(), pauli_x(), "z+", "z-", "x+");
    ASSERT_TRUE(r.branches[0].conditional.has_value());
    ASSERT_FALSE(r.branches[1].conditional.has_value());
    ASSERT_FALSE(r.branches[1].error.empty());
}

TEST(abl, robertson_examples) {
    const auto zp = QuantumState::pure(ket({1, 0}));
    const RobertsonReport r = robertson_check(pauli_x(), pauli_y(), zp);
    ASSERT_NEAR(r.delta_c, 1.0, 1e-12);
    ASSERT_NEAR(r.delta_d, 1.0, 1e-12);
    ASSERT_NEAR(r.bound, 1.0, 1e-12);
    ASSERT_NEAR(r.product, r.bound, 1e-10);
    ASSERT_TRUE(r.satisfied);

    const RobertsonReport same = robertson_check(pauli_x(), pauli_x(), zp);
    ASSERT_EQ(same.bound, 0.0);
    ASSERT_TRUE(same.satisfied);

    ASSERT_THROW(robertson_check(pauli_x(), identity_observable(3), zp), DimensionError);
}

TEST(abl, robertson_random_sweep) {
    const RobertsonSweep s = robertson_sweep(500, 6, 49);
    ASSERT_EQ(s.violations, 0u);
    ASSERT_LE(s.worst_margin, kRobertsonSlack);
}
