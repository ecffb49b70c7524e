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
 * Closed-form probabilities for pre- and post-selected measurement sequences.
 *
 * Notation: for a protocol (A, C_1, ..., C_n, B) with selected outcomes a and
 * b, and an intermediate sequence c = (c_1, ..., c_n), write
 *
 *     T_c[M] = tr(P_b P_cn ... P_c1  M  P_c1 ... P_cn).
 *
 *   abl_probability(c)         = T_c[P_a] / sum_c' T_c'[P_a]
 *   joint_probability(c)       = T_c[P_a rho P_a]
 *   overall_probability        = sum_c T_c[P_a rho P_a]
 *   conditional_probability(c) = joint(c) / overall
 *
 * where rho is the protocol's initial state. The conditional probability is
 * independent of rho whenever <a|rho|a> > 0 and then equals the ABL value.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abl_lab/protocol.hpp"

namespace abl {

struct SequenceProbability {
    OutcomeSequence sequence;
    double probability;
};

/// sum_c T_c[P_a]: the normalisation H(a, b) of the ABL rule. Zero exactly
/// when the (a, b) pair cannot occur.
double abl_normalization(const Protocol& p);

/// Throws ImpossibleBranch when abl_normalization(p) <= kImpossibleTol.
double abl_probability(const Protocol& p, const OutcomeSequence& seq);
/// ABL probabilities of every sequence in for_each_sequence order.
std::vector<SequenceProbability> abl_distribution(const Protocol& p);

double overall_probability(const Protocol& p);
double joint_probability(const Protocol& p, const OutcomeSequence& seq);
std::vector<SequenceProbability> joint_distribution(const Protocol& p);

/// Throws ImpossibleBranch when overall_probability(p) <= kImpossibleTol.
double conditional_probability(const Protocol& p, const OutcomeSequence& seq);
std::vector<SequenceProbability> conditional_distribution(const Protocol& p);

/**
 * Probability of the full record (a, c, b) among trials that showed a, with
 * no post-selection: joint(c) / <a|rho|a>. This is what the frequency
 * N_acb / N_a estimates. Throws ImpossibleBranch when <a|rho|a> is zero.
 */
double preselected_joint_probability(const Protocol& p, const OutcomeSequence& seq);
std::vector<SequenceProbability> preselected_joint_distribution(const Protocol& p);

/// One of the three ensembles compared by aad_compare().
struct AadBranch {
    std::string protocol;    // "(A,C,B)", "(A,A,B)" or "(A,B,B)"
    std::string mid_label;   // designated intermediate outcome
    int ensemble = 0;        // 1, 2, 3: each branch is its own physical ensemble
    std::optional<double> conditional;                // ABL value, post-selected on b
    std::optional<double> without_postselection;      // N_acb / N_a
    std::string error;                                // set when the branch is impossible
};

struct AadReport {
    std::vector<AadBranch> branches;
    /// Pairs of branches, e.g. "(A,C,B) vs (A,A,B)", whose protocols differ and
    /// therefore describe distinct ensembles.
    std::vector<std::string> cross_ensemble_comparisons;
};

/**
 * Evaluates the protocols (A,C,B), (A,A,B) and (A,B,B), pre-selected on `a`
 * and post-selected on `b`, at the designated middle outcomes c, a and b
 * respectively. Each starts from |a>. Impossible branches are reported, not
 * thrown.
 */
AadReport aad_compare(const Observable& A, const Observable& B, const Observable& C, const std::string& a,
                      const std::string& b, const std::string& c);

struct RobertsonReport {
    double delta_c;
    double delta_d;
    double product;
    /// (1/2) |tr((CD - DC) rho)|
    double bound;
    bool satisfied;
};

/// Slack allowed below the Robertson bound before reporting a violation.
inline constexpr double kRobertsonSlack = 1e-10;

/// Standard deviations of the Born outcome distributions of C and D in
/// `state`, compared against the commutator bound.
RobertsonReport robertson_check(const Observable& C, const Observable& D, const QuantumState& state);

}  // namespace abl
