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

#include "abl_lab/ensemble.hpp"

#include <cmath>

#include "abl_lab/abl.hpp"
#include "abl_lab/errors.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace abl;
using namespace abl::testing;

namespace {

Protocol spin() { return Protocol({pauli_z(), "z+"}, {pauli_x(), pauli_y()}, {pauli_z(), "z-"}); }

}  // namespace

TEST(ensemble, trial_record_shape) {
    const Protocol p = spin();
    RandomStream rng = RandomStream::stream(1, 0);
    const TrialRecord t = run_trial(p, rng, 0);
    ASSERT_EQ(t.outcomes.size(), 4u);
    ASSERT_EQ(t.labels(p).front(), "z+");  // deterministic on |z+>
    ASSERT_EQ(rng.counter(), 4u);
}

TEST(ensemble, deterministic_chain) {
    // z+ then z then z: every trial reads z+ three times.
    const Protocol p({pauli_z(), "z+"}, {pauli_z()}, {pauli_z(), "z+"});
    const EnsembleStats s = run_ensemble(p, 1000, 3);
    ASSERT_EQ(s.n_pre, 1000u);
    ASSERT_EQ(s.n_selected, 1000u);
    ASSERT_EQ(s.count({{"z+"}}), 1000u);
    ASSERT_EQ(*s.ratio(1), 1.0);
}

TEST(ensemble, reproducible_and_thread_independent) {
    const Protocol p = spin();
    const EnsembleStats one = run_ensemble(p, 5000, 17, {.postselect = true, .threads = 1});
    const EnsembleStats again = run_ensemble(p, 5000, 17, {.postselect = true, .threads = 1});
    const EnsembleStats four = run_ensemble(p, 5000, 17, {.postselect = true, .threads = 4});
    ASSERT_EQ(one, again);
    ASSERT_EQ(one, four);
    ASSERT_NE(one.counts, run_ensemble(p, 5000, 18).counts);
}

TEST(ensemble, counts_are_consistent) {
    const EnsembleStats s = run_ensemble(spin(), 10000, 5);
    std::uint64_t total = 0;
    for (auto c : s.counts) total += c;
    ASSERT_EQ(total, s.n_selected);
    ASSERT_LE(s.n_selected, s.n_pre);
    ASSERT_LE(s.n_pre, s.n_total);
}

TEST(ensemble, spin_within_three_sigma) {
    const Protocol p = spin();
    const EnsembleStats s = run_ensemble(p, 10000, 12345);
    const Comparison cmp = compare_mc_exact(s, p);
    ASSERT_EQ(cmp.exact_kind, "abl");
    ASSERT_TRUE(cmp.all_pass());
    for (const auto& row : cmp.rows) {
        ASSERT_NEAR(*row.exact, 0.25, 1e-12);
        ASSERT_NEAR(*row.ci_halfwidth, 3 * std::sqrt(0.25 * 0.75 / s.n_selected), 1e-15);
    }
}

TEST(ensemble, aad_postselected_is_exactly_one) {
    const Protocol p = fixture("aad_xx.protocol");
    const EnsembleStats s = run_ensemble(p, 10000, 7);
    ASSERT_GT(s.n_selected, 0u);
    ASSERT_EQ(s.count({{"x+"}}), s.n_selected);
    ASSERT_EQ(*s.ratio(p.intermediates()[0].index_of("x+")), 1.0);
    ASSERT_TRUE(compare_mc_exact(s, p).all_pass());
}

TEST(ensemble, aad_without_postselection_is_half) {
    for (const char* name : {"aad_xx.protocol", "aad_zz.protocol"}) {
        const Protocol p = fixture(name);
        const EnsembleStats s = run_ensemble(p, 10000, 7, {.postselect = false});
        ASSERT_FALSE(s.postselected);
        ASSERT_EQ(s.denominator(), s.n_pre);
        const Comparison cmp = compare_mc_exact(s, p);
        ASSERT_EQ(cmp.exact_kind, "preselected_joint");
        const std::string mid = name == std::string("aad_xx.protocol") ? "x+" : "z+";
        const auto k = p.intermediates()[0].index_of(mid);
        ASSERT_NEAR(*cmp.rows[k].exact, 0.5, 1e-12);
        ASSERT_NEAR(*cmp.rows[k].ratio, 0.5, 3 * std::sqrt(0.25 / 10000));
        ASSERT_TRUE(cmp.all_pass()) << name;
    }
}

TEST(ensemble, no_intermediates_ratio_one) {
    const Protocol p = fixture("no_intermediates.protocol");
    const EnsembleStats s = run_ensemble(p, 2000, 1);
    ASSERT_EQ(s.counts.size(), 1u);
    ASSERT_GT(s.n_selected, 0u);
    ASSERT_EQ(*s.ratio(0), 1.0);
}

TEST(ensemble, undefined_ratios_when_nothing_survives) {
    const Protocol p({pauli_z(), "z+"}, {}, {pauli_z(), "z-"});
    const EnsembleStats s = run_ensemble(p, 500, 1);
    ASSERT_EQ(s.n_selected, 0u);
    ASSERT_FALSE(s.ratio(0).has_value());
    const Comparison cmp = compare_mc_exact(s, p);
    ASSERT_FALSE(cmp.exact_error.empty());
    ASSERT_FALSE(cmp.rows[0].exact.has_value());

    ASSERT_THROW(run_ensemble(spin(), 0, 1), ValidationError);
}

TEST(ensemble, comparison_rejects_foreign_stats) {
    const EnsembleStats s = run_ensemble(spin(), 100, 1);
    ASSERT_THROW(compare_mc_exact(s, fixture("aad_xx.protocol")), ValidationError);
}

TEST(ensemble, qutrit_fixture_with_explicit_state) {
    const Protocol p = fixture("qutrit_matrix.protocol");
    const EnsembleStats s = run_ensemble(p, 20000, 99);
    const Comparison cmp = compare_mc_exact(s, p);
    ASSERT_TRUE(cmp.all_pass());
}

TEST(ensemble, coverage_across_seeds) {
    const Protocol p = spin();
    int passing = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        passing += compare_mc_exact(run_ensemble(p, 4000, seed), p).all_pass();
    }
    // Four rows at 3 sigma; an all-pass rate below 18/20 would be suspicious.
    ASSERT_GE(passing, 18);
}

TEST(ensemble, error_shrinks_with_trials) {
    const Protocol p = spin();
    auto worst = [&](std::uint64_t n) {
        double w = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            for (const auto& row : compare_mc_exact(run_ensemble(p, n, seed, {.threads = 4}), p).rows) {
                w = std::max(w, std::abs(*row.deviation));
            }
        }
        return w;
    };
    ASSERT_LT(worst(40000), worst(1000));
}
