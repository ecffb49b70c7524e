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
 * Monte Carlo ensembles of measurement protocols.
 *
 * Each trial prepares the initial state and samples A, C_1..C_n, B in order,
 * collapsing after every measurement. Trials whose first outcome is not a, or
 * whose last outcome is not b, are discarded (never reweighted). Trial i
 * draws from RandomStream::stream(seed, i), so counts do not depend on the
 * number of worker threads.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abl_lab/protocol.hpp"
#include "abl_lab/random.hpp"

namespace abl {

inline constexpr std::uint64_t kDefaultTrials = 10'000;

struct TrialRecord {
    std::uint64_t trial_index = 0;
    /// Outcome indices for A, C_1..C_n, B (n + 2 entries).
    std::vector<std::size_t> outcomes;

    std::vector<std::string> labels(const Protocol& p) const;
};

TrialRecord run_trial(const Protocol& p, RandomStream& stream, std::uint64_t trial_index = 0);

struct EnsembleOptions {
    /// When false, ratios use N_a instead of N_ab as the denominator: the
    /// fraction of pre-selected trials showing the full record (a, c, b).
    bool postselect = true;
    unsigned threads = 1;
};

struct EnsembleStats {
    std::uint64_t n_total = 0;
    /// N_a: trials whose first outcome is a.
    std::uint64_t n_pre = 0;
    /// N_ab: trials with first outcome a and last outcome b.
    std::uint64_t n_selected = 0;
    bool postselected = true;
    std::uint64_t seed = 0;
    std::string protocol_fingerprint;
    /// All intermediate sequences in for_each_sequence order.
    std::vector<OutcomeSequence> sequences;
    /// N_{a c b} for each entry of `sequences`.
    std::vector<std::uint64_t> counts;

    /// N_ab when post-selected, otherwise N_a.
    std::uint64_t denominator() const noexcept { return postselected ? n_selected : n_pre; }
    /// counts[k] / denominator(), or nullopt (undefined) when nothing survived.
    std::optional<double> ratio(std::size_t k) const;
    std::uint64_t count(const OutcomeSequence& seq) const;

    friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

EnsembleStats run_ensemble(const Protocol& p, std::uint64_t n_trials, std::uint64_t seed,
                           EnsembleOptions options = {});

struct ComparisonRow {
    OutcomeSequence sequence;
    std::uint64_t count = 0;
    std::optional<double> ratio;
    std::optional<double> exact;
    std::optional<double> deviation;
    /// 3 sigma binomial half-width around the exact value.
    std::optional<double> ci_halfwidth;
    std::optional<bool> ci_pass;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    /// "abl" (post-selected) or "preselected_joint" (no post-selection).
    std::string exact_kind;
    /// Why exact values are missing, e.g. impossible post-selection.
    std::string exact_error;

    /// True when every row with both values passes its interval.
    bool all_pass() const;
};

/**
 * Tabulates empirical ratios against exact values: abl_probability when the
 * stats were post-selected, preselected_joint_probability otherwise. Throws
 * ValidationError if `stats` were not produced from `p`.
 */
Comparison compare_mc_exact(const EnsembleStats& stats, const Protocol& p);

}  // namespace abl
