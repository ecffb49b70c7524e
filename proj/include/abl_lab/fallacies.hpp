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
 * Classical ensembles that show how post-selection manufactures statistics
 * no individual member possesses: collider (Berkson) bias, darkening coins,
 * a shutter over a field of holes, and a two-of-three-boxes detector.
 *
 * Every scenario has an exact solution and a Monte Carlo counterpart. Trial i
 * draws from RandomStream::stream(seed, i). Undefined conditional frequencies
 * (nothing survived the selection) are std::nullopt.
 */

#pragma once

#include <cstdint>
#include <optional>

namespace abl {

/// Context every fallacy report carries so consumers cannot drop it.
struct FallacyFlags {
    /// The headline numbers are conditioned on a post-selection.
    bool post_selected = true;
    /// The headline numbers are ensemble frequencies, not properties of any
    /// single member.
    bool ensemble_level = true;
    /// The report juxtaposes numbers taken from different sub-ensembles.
    bool distinct_ensembles = false;
};

// ---------------------------------------------------------------- Berkson

/// Two independent conditions A and B; the symptom S appears iff A or B.
struct BerksonParams {
    double p_a = 0.1;
    double p_b = 0.1;
    std::uint64_t n = 10'000;
};

struct BerksonExact {
    /// P(A | S), P(B | S), P(A and B | S)
    double frac_a;
    double frac_b;
    double frac_ab;
    /// frac_ab - frac_a * frac_b; negative means selection-induced
    /// anticorrelation.
    double independence_gap;
    /// P(S) = p_a + p_b - p_a p_b
    double selected_fraction;
    /// p_ab - p_a p_b in the whole population (zero by construction).
    double population_gap;
    FallacyFlags flags;
};

/// Throws ValidationError unless both probabilities lie in [0, 1] and P(S) > 0.
BerksonExact berkson_exact(const BerksonParams& params);

struct BerksonSample {
    std::uint64_t n = 0;
    std::uint64_t n_a = 0;
    std::uint64_t n_b = 0;
    std::uint64_t n_ab = 0;
    /// N_S = N_A + N_B - N_AB
    std::uint64_t n_s = 0;
    std::optional<double> frac_a;
    std::optional<double> frac_b;
    std::optional<double> frac_ab;
    std::optional<double> independence_gap;
    FallacyFlags flags;
};

BerksonSample berkson_mc(const BerksonParams& params, std::uint64_t seed);

// ------------------------------------------------------------------ coins

/// Each tail darkens the coin additively by darken_per_tail (capped at fully
/// dark); trials are kept when the final darkness reaches the threshold.
struct CoinParams {
    unsigned n_flips = 100;
    double darken_per_tail = 0.01;
    double darkness_threshold = 0.70;
    double p_heads = 0.5;
    std::uint64_t n = 10'000;
};

struct CoinResult {
    std::uint64_t n = 0;
    std::uint64_t n_selected = 0;
    double selected_fraction = 0;
    /// Heads per flip among the kept coins.
    std::optional<double> heads_frequency_in_selected;
    /// Heads per flip over every coin (no selection).
    double heads_frequency_all = 0;
    FallacyFlags flags;
};

/// Exact values by summing the binomial distribution of tails.
CoinResult coin_darkening_exact(const CoinParams& params);
CoinResult coin_darkening_mc(const CoinParams& params, std::uint64_t seed);

// ---------------------------------------------------------------- shutter

/// One hole out of n_holes is covered at random and the stone is aimed at a
/// uniformly random hole (an assumption: the aim distribution is not fixed
/// by the scenario). A blocked stone clangs with probability
/// clang_prob_if_blocked; trials are kept when a clang is heard.
struct ShutterParams {
    unsigned n_holes = 5;
    double clang_prob_if_blocked = 1.0;
    std::uint64_t n = 10'000;
};

struct ShutterResult {
    std::uint64_t n = 0;
    std::uint64_t n_selected = 0;
    std::uint64_t n_blocked = 0;
    /// Fraction of kept trials in which the stone was blocked (always 1).
    std::optional<double> blocked_fraction_in_selected;
    /// Fraction of all trials in which the stone was blocked (~ 1 / n_holes).
    double blocked_fraction_all = 0;
    FallacyFlags flags;
};

ShutterResult shutter_exact(const ShutterParams& params);
ShutterResult shutter_mc(const ShutterParams& params, std::uint64_t seed);

// ------------------------------------------------------------ three boxes

/// One object in one of three boxes uniformly; a detector checks box 1 or box
/// 2 with even odds and lights green iff it finds the object.
struct BoxesResult {
    std::uint64_t n = 0;
    std::uint64_t n_checked1_green = 0;
    std::uint64_t n_checked2_green = 0;
    /// P(object in box 1 | checked box 1 and green)
    std::optional<double> p_box1_given_checked1_green;
    /// P(object in box 2 | checked box 2 and green)
    std::optional<double> p_box2_given_checked2_green;
    /// P(object in box 1) with no selection.
    double p_box1_unconditioned = 0;
    FallacyFlags flags;
};

BoxesResult three_boxes_exact();
BoxesResult three_boxes_mc(std::uint64_t n, std::uint64_t seed);

}  // namespace abl
