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

// Random instances for property sweeps. Everything is driven by a
// RandomStream, so an instance is reproducible from (seed, index).

#pragma once

#include "abl_lab/protocol.hpp"
#include "abl_lab/random.hpp"

namespace abl {

/// Haar-distributed unitary (Gram-Schmidt on a complex Ginibre matrix).
ComplexOperator random_unitary(std::size_t dim, RandomStream& rng);
/// (G + G^dagger) / 2 for a complex Ginibre matrix G.
ComplexOperator random_self_adjoint(std::size_t dim, RandomStream& rng);
ComplexVector random_unit_vector(std::size_t dim, RandomStream& rng);
/// G G^dagger / tr(G G^dagger): full rank almost surely.
QuantumState random_mixed_state(std::size_t dim, RandomStream& rng);
/// Non-degenerate observable with a Haar-random eigenbasis; neighbouring
/// eigenvalues are at least 0.5 apart.
Observable random_complete_observable(std::size_t dim, RandomStream& rng, std::string name = "R");

struct RandomProtocolOptions {
    /// Chance that an intermediate or post-selection observable reuses an
    /// earlier one, producing repeated-measurement structure.
    double reuse_probability = 0.2;
};

/// Random complete observables, random pre/post outcome labels, default
/// initial state.
Protocol random_protocol(std::size_t dim, std::size_t n, RandomStream& rng, RandomProtocolOptions options = {});

}  // namespace abl
