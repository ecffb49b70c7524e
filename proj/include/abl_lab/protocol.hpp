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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abl_lab/quantum.hpp"

namespace abl {

/// Protocols whose intermediate outcome sequences outnumber this are rejected.
inline constexpr std::uint64_t kMaxSequences = 10'000'000;

/// An observable with one designated outcome (the pre- or post-selection).
struct Selection {
    Observable observable;
    std::string label;
};

/**
 * A sequence of projective measurements A, C_1, ..., C_n, B with a
 * pre-selected outcome a of A and a post-selected outcome b of B.
 *
 * Every observable must be complete (rank-one projectors) and share the same
 * dimension. Without an explicit initial state the system starts in the
 * eigenvector |a> of the pre-selected outcome.
 */
class Protocol {
   public:
    Protocol(Selection pre, std::vector<Observable> intermediates, Selection post,
             std::optional<QuantumState> initial_state = std::nullopt);

    std::size_t dim() const noexcept { return pre_.observable.dim(); }
    std::size_t n() const noexcept { return intermediates_.size(); }

    const Selection& pre() const noexcept { return pre_; }
    const Selection& post() const noexcept { return post_; }
    const std::vector<Observable>& intermediates() const noexcept { return intermediates_; }
    std::size_t pre_index() const noexcept { return pre_index_; }
    std::size_t post_index() const noexcept { return post_index_; }
    const ComplexOperator& pre_projector() const { return pre_.observable.outcome(pre_index_).projector; }
    const ComplexOperator& post_projector() const { return post_.observable.outcome(post_index_).projector; }

    bool has_explicit_initial_state() const noexcept { return initial_state_.has_value(); }
    const std::optional<QuantumState>& explicit_initial_state() const noexcept { return initial_state_; }
    /// The explicit initial state, or |a> by default.
    QuantumState initial_state() const;

    /// Number of outcomes of each intermediate observable.
    std::vector<std::size_t> radices() const;
    /// Product of radices(); 1 when n == 0.
    std::uint64_t sequence_count() const;

    /// Same measurements and selections with a different initial state.
    Protocol with_initial_state(std::optional<QuantumState> state) const;

   private:
    Selection pre_;
    std::vector<Observable> intermediates_;
    Selection post_;
    std::optional<QuantumState> initial_state_;
    std::size_t pre_index_ = 0;
    std::size_t post_index_ = 0;
};

/// Intermediate outcome labels (c_1, ..., c_n), matched positionally to the
/// protocol's intermediate observables.
struct OutcomeSequence {
    std::vector<std::string> labels;

    friend bool operator==(const OutcomeSequence&, const OutcomeSequence&) = default;
    friend auto operator<=>(const OutcomeSequence&, const OutcomeSequence&) = default;
};

std::string to_string(const OutcomeSequence& seq);

/// Outcome indices for `seq`; throws ValidationError on a length mismatch or
/// unknown label.
std::vector<std::size_t> resolve(const Protocol& p, const OutcomeSequence& seq);
OutcomeSequence sequence_from_indices(const Protocol& p, std::span<const std::size_t> indices);

/// Visits every index tuple (c_1, ..., c_n) in lexicographic order of stored
/// outcome order, last position fastest. Visits the empty tuple once for n == 0.
template <class Fn>
void for_each_sequence(const Protocol& p, Fn&& fn) {
    const std::vector<std::size_t> radix = p.radices();
    std::vector<std::size_t> digits(radix.size(), 0);
    for (;;) {
        fn(std::span<const std::size_t>(digits));
        std::size_t pos = digits.size();
        while (pos > 0) {
            --pos;
            if (++digits[pos] < radix[pos]) {
                break;
            }
            digits[pos] = 0;
            if (pos == 0) {
                return;
            }
        }
        if (digits.empty()) {
            return;
        }
    }
}

std::vector<OutcomeSequence> all_sequences(const Protocol& p);

/// Flat index of a sequence in for_each_sequence order.
std::size_t sequence_ordinal(const Protocol& p, std::span<const std::size_t> indices);

/// (A, C_1..C_n, B) -> (B, C_n..C_1, A) with pre/post selections swapped and
/// the initial state reset to the new default.
Protocol reverse_protocol(const Protocol& p);
OutcomeSequence reversed(const OutcomeSequence& seq);

/// Exact structural equality: names, operators, labels, selections and
/// initial state.
bool structurally_equal(const Protocol& x, const Protocol& y);

/// Stable hex digest of the protocol's structure; identifies which protocol an
/// ensemble was drawn from.
std::string fingerprint(const Protocol& p);

}  // namespace abl
