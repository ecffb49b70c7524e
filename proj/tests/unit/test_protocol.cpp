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

#include "abl_lab/protocol.hpp"

#include "abl_lab/errors.hpp"
#include "abl_lab/random_models.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace abl;
using namespace abl::testing;

namespace {

Protocol spin() { return Protocol({pauli_z(), "z+"}, {pauli_x(), pauli_y()}, {pauli_z(), "z-"}); }

}  // namespace

TEST(protocol, accessors_and_default_state) {
    const Protocol p = spin();
    ASSERT_EQ(p.dim(), 2u);
    ASSERT_EQ(p.n(), 2u);
    ASSERT_EQ(p.pre_index(), 1u);
    ASSERT_EQ(p.post_index(), 0u);
    ASSERT_EQ(p.sequence_count(), 4u);
    ASSERT_FALSE(p.has_explicit_initial_state());
    ASSERT_LE(max_abs_diff(p.initial_state().vector(), ket({1, 0})), 1e-15);
}

TEST(protocol, validation) {
    ASSERT_THROW(Protocol({pauli_z(), "up"}, {}, {pauli_z(), "z-"}), ValidationError);
    ASSERT_THROW(Protocol({pauli_z(), "z+"}, {}, {pauli_z(), "nope"}), ValidationError);
    ASSERT_THROW(Protocol({pauli_z(), "z+"}, {identity_observable(2)}, {pauli_z(), "z-"}), ValidationError);
    ASSERT_THROW(Protocol({pauli_z(), "z+"}, {identity_observable(3)}, {pauli_z(), "z-"}), DimensionError);
    ASSERT_THROW(Protocol({pauli_z(), "z+"}, {}, {pauli_z(), "z-"}, QuantumState::pure(ket({1, 0, 0}))),
                 DimensionError);
    // 2^24 sequences exceeds the enumeration guard.
    ASSERT_THROW(Protocol({pauli_z(), "z+"}, std::vector<Observable>(24, pauli_x()), {pauli_z(), "z-"}),
                 ValidationError);
}

TEST(protocol, sequence_enumeration_order) {
    const auto seqs = all_sequences(spin());
    ASSERT_EQ(seqs.size(), 4u);
    ASSERT_EQ(to_string(seqs[0]), "(x-,y-)");
    ASSERT_EQ(to_string(seqs[1]), "(x-,y+)");
    ASSERT_EQ(to_string(seqs[2]), "(x+,y-)");
    ASSERT_EQ(to_string(seqs[3]), "(x+,y+)");
    const Protocol p = spin();
    for (std::size_t k = 0; k < seqs.size(); ++k) {
        ASSERT_EQ(sequence_ordinal(p, resolve(p, seqs[k])), k);
    }
    ASSERT_THROW(resolve(p, {{"x+"}}), ValidationError);
    ASSERT_THROW(resolve(p, {{"x+", "z+"}}), ValidationError);
}

TEST(protocol, empty_intermediates_give_one_empty_sequence) {
    const Protocol p({pauli_z(), "z+"}, {}, {pauli_x(), "x+"});
    const auto seqs = all_sequences(p);
    ASSERT_EQ(seqs.size(), 1u);
    ASSERT_TRUE(seqs[0].labels.empty());
}

TEST(protocol, reverse_structure_and_involution) {
    const Protocol p({pauli_z(), "z+"}, {pauli_x(), pauli_y()}, {pauli_x(), "x-"});
    const Protocol r = reverse_protocol(p);
    ASSERT_EQ(r.pre().label, "x-");
    ASSERT_EQ(r.post().label, "z+");
    ASSERT_EQ(r.intermediates()[0].name(), "pauli_y");
    ASSERT_EQ(r.intermediates()[1].name(), "pauli_x");
    ASSERT_TRUE(structurally_equal(reverse_protocol(r), p));
    ASSERT_EQ(fingerprint(reverse_protocol(r)), fingerprint(p));
    ASSERT_EQ(reversed(OutcomeSequence{{"a", "b", "c"}}).labels, (std::vector<std::string>{"c", "b", "a"}));

    for (std::uint64_t s = 0; s < 50; ++s) {
        RandomStream rng = RandomStream::stream(31, s);
        const Protocol q = random_protocol(2 + rng.below(3), rng.below(4), rng);
        ASSERT_TRUE(structurally_equal(reverse_protocol(reverse_protocol(q)), q));
    }
}

TEST(protocol, reverse_resets_initial_state) {
    const Protocol p = spin().with_initial_state(QuantumState::pure(ket({0.6, 0.8})));
    ASSERT_TRUE(p.has_explicit_initial_state());
    ASSERT_FALSE(reverse_protocol(p).has_explicit_initial_state());
}

TEST(protocol, fingerprint_distinguishes_protocols) {
    const Protocol a = spin();
    const Protocol b({pauli_z(), "z+"}, {pauli_y(), pauli_x()}, {pauli_z(), "z-"});
    ASSERT_NE(fingerprint(a), fingerprint(b));
    ASSERT_FALSE(structurally_equal(a, b));
    ASSERT_NE(fingerprint(a), fingerprint(a.with_initial_state(QuantumState::pure(ket({0.6, 0.8})))));
}
