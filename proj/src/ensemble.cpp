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

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "abl_lab/abl.hpp"
#include "abl_lab/errors.hpp"

namespace abl {

namespace {

struct Tally {
    std::uint64_t n_pre = 0;
    std::uint64_t n_selected = 0;
    std::vector<std::uint64_t> counts;
};

Tally tally_range(const Protocol& p, std::uint64_t seed, std::uint64_t begin, std::uint64_t end) {
    Tally t;
    t.counts.assign(static_cast<std::size_t>(p.sequence_count()), 0);
    for (std::uint64_t i = begin; i < end; ++i) {
        RandomStream stream = RandomStream::stream(seed, i);
        const TrialRecord record = run_trial(p, stream, i);
        if (record.outcomes.front() != p.pre_index()) {
            continue;
        }
        ++t.n_pre;
        if (record.outcomes.back() != p.post_index()) {
            continue;
        }
        ++t.n_selected;
        const std::span<const std::size_t> mids(record.outcomes.data() + 1, p.n());
        ++t.counts[sequence_ordinal(p, mids)];
    }
    return t;
}

}  // namespace

std::vector<std::string> TrialRecord::labels(const Protocol& p) const {
    std::vector<std::string> out;
    out.reserve(outcomes.size());
    out.push_back(p.pre().observable.outcome(outcomes.front()).label);
    for (std::size_t i = 0; i < p.n(); ++i) {
        out.push_back(p.intermediates()[i].outcome(outcomes[i + 1]).label);
    }
    out.push_back(p.post().observable.outcome(outcomes.back()).label);
    return out;
}

TrialRecord run_trial(const Protocol& p, RandomStream& stream, std::uint64_t trial_index) {
    TrialRecord record{trial_index, {}};
    record.outcomes.reserve(p.n() + 2);
    MeasurementResult step = measure_sample(p.initial_state(), p.pre().observable, stream);
    record.outcomes.push_back(step.outcome_index);
    for (const Observable& c : p.intermediates()) {
        step = measure_sample(step.state, c, stream);
        record.outcomes.push_back(step.outcome_index);
    }
    step = measure_sample(step.state, p.post().observable, stream);
    record.outcomes.push_back(step.outcome_index);
    return record;
}

std::optional<double> EnsembleStats::ratio(std::size_t k) const {
    const std::uint64_t d = denominator();
    if (d == 0) {
        return std::nullopt;
    }
    return static_cast<double>(counts.at(k)) / static_cast<double>(d);
}

std::uint64_t EnsembleStats::count(const OutcomeSequence& seq) const {
    auto it = std::find(sequences.begin(), sequences.end(), seq);
    if (it == sequences.end()) {
        throw ValidationError("sequence " + to_string(seq) + " is not part of this ensemble");
    }
    return counts[static_cast<std::size_t>(it - sequences.begin())];
}

EnsembleStats run_ensemble(const Protocol& p, std::uint64_t n_trials, std::uint64_t seed, EnsembleOptions options) {
    if (n_trials == 0) {
        throw ValidationError("run_ensemble: need at least one trial");
    }
    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::uint64_t>(std::max(1u, options.threads), 1, n_trials));

    std::vector<Tally> partial(threads);
    if (threads == 1) {
        partial[0] = tally_range(p, seed, 0, n_trials);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        {
            std::vector<std::jthread> workers;
            workers.reserve(threads);
            for (unsigned w = 0; w < threads; ++w) {
                const std::uint64_t begin = n_trials * w / threads;
                const std::uint64_t end = n_trials * (w + 1) / threads;
                workers.emplace_back([&, w, begin, end] {
                    try {
                        partial[w] = tally_range(p, seed, begin, end);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    EnsembleStats stats;
    stats.n_total = n_trials;
    stats.postselected = options.postselect;
    stats.seed = seed;
    stats.protocol_fingerprint = fingerprint(p);
    stats.sequences = all_sequences(p);
    stats.counts.assign(stats.sequences.size(), 0);
    // Fold in trial-index order.
    for (const Tally& t : partial) {
        stats.n_pre += t.n_pre;
        stats.n_selected += t.n_selected;
        for (std::size_t k = 0; k < t.counts.size(); ++k) {
            stats.counts[k] += t.counts[k];
        }
    }
    return stats;
}

bool Comparison::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.ci_pass.value_or(true); });
}

Comparison compare_mc_exact(const EnsembleStats& stats, const Protocol& p) {
    if (stats.protocol_fingerprint != fingerprint(p) || stats.sequences.size() != p.sequence_count() ||
        stats.counts.size() != stats.sequences.size()) {
        throw ValidationError("ensemble statistics were not produced from this protocol");
    }
    Comparison out;
    out.exact_kind = stats.postselected ? "abl" : "preselected_joint";

    std::vector<std::optional<double>> exact(stats.sequences.size());
    try {
        const auto dist = stats.postselected ? abl_distribution(p) : preselected_joint_distribution(p);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            exact[k] = dist[k].probability;
        }
    } catch (const ImpossibleBranch& e) {
        std::fill(exact.begin(), exact.end(), std::nullopt);
        out.exact_error = e.what();
    }

    const double n = static_cast<double>(stats.denominator());
    for (std::size_t k = 0; k < stats.sequences.size(); ++k) {
        ComparisonRow row{stats.sequences[k], stats.counts[k], stats.ratio(k), exact[k], {}, {}, {}};
        if (row.ratio && row.exact) {
            const double q = *row.exact;
            row.deviation = std::abs(*row.ratio - q);
            row.ci_halfwidth = 3.0 * std::sqrt(q * (1.0 - q) / n);
            row.ci_pass = *row.deviation <= *row.ci_halfwidth + 1e-12;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace abl
