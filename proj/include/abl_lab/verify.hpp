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
 * Randomized sweeps that check the closed-form engine against its invariants
 * and against the full-chain oracle.
 *
 * Instance i of a sweep draws everything from RandomStream::stream(seed, i),
 * so a failing instance can be replayed on its own.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abl_lab/protocol.hpp"
#include "abl_lab/random.hpp"

namespace abl {

// Individual checks. Each returns the largest absolute deviation it saw.
namespace checks {

/// |sum_c abl(c) - 1|
double normalization(const Protocol& p);
/// max_c |abl(p, c) - abl(reverse(p), reversed(c))|
double reverse_ordering_symmetry(const Protocol& p);
/// max_c |oracle device probability - conditional_probability|. `engine` is
/// normally `p` itself; the fault-injection sweep passes a corrupted copy.
double oracle_equivalence(const Protocol& p, const Protocol& engine, std::optional<std::uint64_t> pointer_seed);
/// Second eigenvalue of the oracle's reduced device density matrix.
double device_rank_one(const Protocol& p);
/// |observer Born probability of (a, b) from the oracle - overall_probability|
double observer_born_rule(const Protocol& p);
/// |sum_c joint(c) - overall|
double marginalization(const Protocol& p);
/// max_c |conditional(c) * overall - joint(c)|
double bayes(const Protocol& p);
/// max_c |conditional under psi1 - conditional under psi2|
double psi_independence(const Protocol& p, const QuantumState& psi1, const QuantumState& psi2);
/// max(0, bound - Delta C Delta D)
double robertson_shortfall(const Observable& c, const Observable& d, const QuantumState& state);

}  // namespace checks

/// A pure state with |<a|psi>|^2 bounded away from zero.
QuantumState random_overlapping_state(const Protocol& p, RandomStream& rng);

/// Copy of `p` whose first intermediate observable is complex-conjugated.
/// Used to show the sweep catches a dropped conjugation.
Protocol conjugation_fault(const Protocol& p);

struct VerifyOptions {
    std::size_t max_dim = 3;
    std::size_t max_n = 2;
    std::size_t instances = 200;
    std::uint64_t seed = 0;
    /// Run only this instance index (replay).
    std::optional<std::uint64_t> only_instance;
    bool inject_fault = false;
};

struct CheckResult {
    std::string name;
    double tolerance = 0;
    std::size_t evaluated = 0;
    std::size_t failures = 0;
    double max_deviation = 0;

    bool passed() const noexcept { return failures == 0; }
};

struct FailureRecord {
    std::string check;
    std::uint64_t seed = 0;
    std::uint64_t instance = 0;
    double deviation = 0;
    double tolerance = 0;
    /// Protocol of the failing instance in protocol-file syntax.
    std::string protocol_text;
};

struct VerifyReport {
    VerifyOptions options;
    std::vector<CheckResult> checks;
    std::vector<FailureRecord> failures;
    std::vector<std::string> warnings;
    /// Instances skipped because (a, b) was impossible.
    std::size_t skipped = 0;

    bool passed() const noexcept { return failures.empty(); }
};

/// Throws ValidationError for max_dim < 1 or max_dim > 6, max_n > 4.
VerifyReport run_verify(const VerifyOptions& options);

struct RobertsonSweep {
    std::size_t triples = 0;
    std::size_t max_dim = 0;
    std::uint64_t seed = 0;
    std::size_t violations = 0;
    /// Largest bound - product seen (negative when always slack).
    double worst_margin = 0;
};

/// Random self-adjoint C, D and a random pure or mixed state per triple,
/// dimension uniform in [2, max_dim]; triple t uses stream(seed, t).
RobertsonSweep robertson_sweep(std::size_t triples, std::size_t max_dim, std::uint64_t seed);

}  // namespace abl
