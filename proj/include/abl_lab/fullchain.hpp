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
 * Brute-force subject (x) device (x) observer model of a measurement protocol.
 *
 * The observer records the outcomes of A and B, a measuring device records
 * the intermediate outcomes of C_1..C_n, and every measurement is an explicit
 * map on the total state vector. Probabilities are then read off with the
 * Born rule on the record subsystems and the device state conditioned on the
 * observer's record is obtained by a partial trace.
 *
 * This module deliberately does not call into abl.hpp: it exists to check the
 * closed-form engine along an independent route.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "abl_lab/protocol.hpp"

namespace abl {

/// Largest total (subject x device x observer) dimension the oracle accepts.
inline constexpr std::size_t kMaxChainDim = 10'000;

/**
 * Pointer bases for the device and observer records.
 *
 * Device pointers are indexed by every prefix of an intermediate outcome
 * sequence: dev(), dev(c1), dev(c1,c2), ... so the device dimension is
 * 1 + sum_k prod_{i<=k} |C_i|. Observer pointers are obs(), obs(a) and
 * obs(a,b). By default the pointers are computational basis vectors; a seed
 * rotates both bases by Haar-random unitaries (any orthonormal embedding
 * gives the same probabilities).
 */
class ChainModel {
   public:
    explicit ChainModel(const Protocol& p, std::optional<std::uint64_t> pointer_seed = std::nullopt);

    std::size_t subject_dim() const noexcept { return subject_dim_; }
    std::size_t device_dim() const noexcept { return device_pointers_.size(); }
    std::size_t observer_dim() const noexcept { return observer_pointers_.size(); }
    std::size_t total_dim() const noexcept { return subject_dim_ * device_dim() * observer_dim(); }
    std::vector<std::size_t> factor_dims() const { return {subject_dim_, device_dim(), observer_dim()}; }

    /// Slot of dev(prefix) in the device pointer list.
    std::size_t device_slot(std::span<const std::size_t> prefix) const;
    const ComplexVector& device_pointer(std::span<const std::size_t> prefix) const;
    const ComplexVector& observer_ready() const { return observer_pointers_[0]; }
    const ComplexVector& observer_pointer(std::size_t a) const;
    const ComplexVector& observer_pointer(std::size_t a, std::size_t b) const;

   private:
    std::size_t subject_dim_;
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> level_offsets_;  // first slot of each prefix length
    std::size_t pre_outcomes_;
    std::size_t post_outcomes_;
    std::vector<ComplexVector> device_pointers_;
    std::vector<ComplexVector> observer_pointers_;
};

/// |Psi> (x) |dev()> (x) |obs()>; the initial state must be pure.
ComplexVector initial_total_state(const ChainModel& model, const Protocol& p);

/**
 * Total state after each measurement: element 0 is the ready state, element
 * 1 follows the observer's measurement of A, elements 2..n+1 follow the
 * device's measurements of C_1..C_n, and the last follows the observer's
 * measurement of B.
 */
std::vector<ComplexVector> evolve_chain_steps(const ChainModel& model, const Protocol& p);

/// Final total state |Psi'_tot>. Throws ValidationError when the total
/// dimension exceeds kMaxChainDim.
ComplexVector evolve_chain(const ChainModel& model, const Protocol& p);

/// <Psi'| (1 x 1 x P_obs(a,b)) |Psi'> for outcome indices a, b.
double observer_probability(const ChainModel& model, const ComplexVector& final_state, std::size_t a,
                            std::size_t b);

/// <Psi'| (1 x P_dev(c) x P_obs(a,b)) |Psi'>.
double observer_device_probability(const ChainModel& model, const ComplexVector& final_state, std::size_t a,
                                   std::size_t b, std::span<const std::size_t> sequence);

struct DeviceState {
    /// Device state vector conditioned on obs(a,b), phase fixed.
    ComplexVector vector;
    /// Second-largest eigenvalue of the reduced device density matrix.
    double second_eigenvalue;
    /// |<dev(c)|vector>|^2 for every full sequence c in for_each_sequence order.
    std::vector<double> sequence_probabilities;
};

/// Maximum second eigenvalue tolerated before the conditioned device state
/// is declared not rank one.
inline constexpr double kRankOneTol = 1e-9;

/**
 * Collapses the final total state on the observer record obs(a,b), traces
 * out subject and observer, checks the reduced device matrix is rank one and
 * extracts its state vector. Throws ImpossibleBranch when the observer
 * record has zero probability.
 */
DeviceState device_state_given_obs(const ChainModel& model, const Protocol& p, const ComplexVector& final_state,
                                   const std::string& a, const std::string& b);
DeviceState device_state_given_obs(const ChainModel& model, const Protocol& p, const std::string& a,
                                   const std::string& b);

}  // namespace abl
