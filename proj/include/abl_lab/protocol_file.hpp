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
 * Line-oriented protocol files. See docs/protocol_format.md for the grammar.
 *
 *     dim: 2
 *
 *     [observables]
 *     sz: pauli_z
 *     m: matrix
 *       2
 *       1+0i 0+0i
 *       0+0i -1+0i
 *     m.labels: up down
 *
 *     [protocol]
 *     pre: sz z+
 *     intermediates: m
 *     post: sz z-
 *
 *     [mc]
 *     n_trials: 10000
 *     seed: 7
 *
 * Parsing only checks syntax and name resolution; build_protocol() runs the
 * full validation.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abl_lab/linalg.hpp"
#include "abl_lab/protocol.hpp"

namespace abl {

struct ObservableSpec {
    std::string name;
    /// Builtin name (pauli_x, ...) or empty when `matrix` is set.
    std::string builtin;
    std::optional<ComplexOperator> matrix;
    std::optional<std::vector<std::string>> labels;

    friend bool operator==(const ObservableSpec&, const ObservableSpec&) = default;
};

/// A state written either as a `vector` or as a `density` block.
struct StateSpec {
    std::optional<ComplexVector> vector;
    std::optional<ComplexOperator> density;

    friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

struct SelectionSpec {
    std::string observable;
    std::string label;

    friend bool operator==(const SelectionSpec&, const SelectionSpec&) = default;
};

struct ProtocolSection {
    SelectionSpec pre;
    std::vector<std::string> intermediates;
    SelectionSpec post;
    std::optional<StateSpec> initial_state;

    friend bool operator==(const ProtocolSection&, const ProtocolSection&) = default;
};

struct McSection {
    std::optional<std::uint64_t> n_trials;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const McSection&, const McSection&) = default;
};

struct UncertaintySection {
    std::string c;
    std::string d;
    std::optional<StateSpec> state;

    friend bool operator==(const UncertaintySection&, const UncertaintySection&) = default;
};

struct ProtocolFile {
    std::size_t dim = 0;
    std::vector<ObservableSpec> observables;
    std::optional<ProtocolSection> protocol;
    McSection mc;
    /// Designated middle outcome for `aad`.
    std::optional<std::string> aad_mid;
    std::optional<UncertaintySection> uncertainty;

    friend bool operator==(const ProtocolFile&, const ProtocolFile&) = default;

    const ObservableSpec* find(std::string_view name) const;
};

/// Throws ValidationError with a line number on malformed input or
/// unresolved names.
ProtocolFile parse_protocol_file(std::string_view text);
ProtocolFile load_protocol_file(const std::string& path);

/// Canonical text; parse_protocol_file(serialize(f)) == f.
std::string serialize(const ProtocolFile& file);

Observable build_observable(const ProtocolFile& file, std::string_view name);
QuantumState build_state(const StateSpec& spec);
/// Throws ValidationError when the file has no [protocol] section.
Protocol build_protocol(const ProtocolFile& file);

/// Writes every observable of `p` as a labelled matrix block. Observables
/// sharing a name are written once; differing ones get a numeric suffix.
ProtocolFile to_protocol_file(const Protocol& p);

}  // namespace abl
