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

#include "abl_lab/fallacies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "abl_lab/errors.hpp"
#include "abl_lab/random.hpp"

namespace abl {

namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

void validate(const CoinParams& p) {
    if (p.n_flips == 0) {
        throw ValidationError("coins: n_flips must be positive");
    }
    require_probability(p.darken_per_tail, "darken_per_tail");
    require_probability(p.p_heads, "p_heads");
    if (!(p.darkness_threshold >= 0.0)) {
        throw ValidationError("coins: darkness_threshold must be non-negative");
    }
}

// Same predicate for the exact sum and the simulation, so both cut at the
// same tail count despite round-off in k * darken_per_tail.
bool dark_enough(const CoinParams& p, unsigned tails) {
    const double darkness = std::min(1.0, tails * p.darken_per_tail);
    return darkness >= p.darkness_threshold - 1e-12;
}

}  // namespace

BerksonExact berkson_exact(const BerksonParams& params) {
    const double pa = params.p_a;
    const double pb = params.p_b;
    require_probability(pa, "p_A");
    require_probability(pb, "p_B");
    const double p_ab = pa * pb;
    const double p_s = pa + pb - p_ab;
    if (p_s <= 0.0) {
        throw ValidationError("berkson: P(S) = p_A + p_B - p_AB is zero, nothing to condition on");
    }

    BerksonExact out{};
    if (pa > 0.0 && pb > 0.0) {
        // Divided through by p_A p_B; this form is exact for p = 0.1.
        const double d = 1.0 / pa + 1.0 / pb - 1.0;
        out.frac_a = (1.0 / pb) / d;
        out.frac_b = (1.0 / pa) / d;
        out.frac_ab = 1.0 / d;
    } else {
        out.frac_a = pa / p_s;
        out.frac_b = pb / p_s;
        out.frac_ab = p_ab / p_s;
    }
    out.independence_gap = out.frac_ab - out.frac_a * out.frac_b;
    out.selected_fraction = p_s;
    out.population_gap = p_ab - pa * pb;
    out.flags = {true, true, false};
    return out;
}

BerksonSample berkson_mc(const BerksonParams& params, std::uint64_t seed) {
    require_probability(params.p_a, "p_A");
    require_probability(params.p_b, "p_B");
    BerksonSample out;
    out.n = params.n;
    for (std::uint64_t i = 0; i < params.n; ++i) {
        RandomStream rng = RandomStream::stream(seed, i);
        const bool a = rng.bernoulli(params.p_a);
        const bool b = rng.bernoulli(params.p_b);
        out.n_a += a;
        out.n_b += b;
        out.n_ab += a && b;
    }
    out.n_s = out.n_a + out.n_b - out.n_ab;
    out.frac_a = ratio(out.n_a, out.n_s);
    out.frac_b = ratio(out.n_b, out.n_s);
    out.frac_ab = ratio(out.n_ab, out.n_s);
    if (out.n_s > 0) {
        out.independence_gap = *out.frac_ab - *out.frac_a * *out.frac_b;
    }
    out.flags = {true, true, false};
    return out;
}

CoinResult coin_darkening_exact(const CoinParams& params) {
    validate(params);
    const unsigned n = params.n_flips;
    const double q = 1.0 - params.p_heads;  // tails
    double p_sel = 0;
    double heads_sel = 0;
    for (unsigned k = 0; k <= n; ++k) {
        if (!dark_enough(params, k)) {
            continue;
        }
        double pk;
        if (q == 0.0 || q == 1.0) {
            pk = (k == (q == 0.0 ? 0u : n)) ? 1.0 : 0.0;
        } else {
            const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            pk = std::exp(log_choose + k * std::log(q) + (n - k) * std::log1p(-q));
        }
        p_sel += pk;
        heads_sel += pk * static_cast<double>(n - k) / n;
    }

    CoinResult out;
    out.n = params.n;
    out.selected_fraction = std::min(1.0, p_sel);
    if (p_sel > 0.0) {
        out.heads_frequency_in_selected = heads_sel / p_sel;
    }
    out.heads_frequency_all = params.p_heads;
    out.flags = {true, true, false};
    return out;
}

CoinResult coin_darkening_mc(const CoinParams& params, std::uint64_t seed) {
    validate(params);
    std::uint64_t heads_all = 0;
    std::uint64_t heads_sel = 0;
    CoinResult out;
    out.n = params.n;
    for (std::uint64_t i = 0; i < params.n; ++i) {
        RandomStream rng = RandomStream::stream(seed, i);
        unsigned heads = 0;
        for (unsigned f = 0; f < params.n_flips; ++f) {
            heads += rng.bernoulli(params.p_heads);
        }
        heads_all += heads;
        if (dark_enough(params, params.n_flips - heads)) {
            ++out.n_selected;
            heads_sel += heads;
        }
    }
    const std::uint64_t flips = static_cast<std::uint64_t>(params.n_flips);
    out.selected_fraction = params.n == 0 ? 0.0 : static_cast<double>(out.n_selected) / params.n;
    out.heads_frequency_in_selected = ratio(heads_sel, out.n_selected * flips);
    out.heads_frequency_all = ratio(heads_all, params.n * flips).value_or(0.0);
    out.flags = {true, true, false};
    return out;
}

ShutterResult shutter_exact(const ShutterParams& params) {
    if (params.n_holes == 0) {
        throw ValidationError("shutter: n_holes must be at least 1");
    }
    require_probability(params.clang_prob_if_blocked, "clang_prob_if_blocked");
    ShutterResult out;
    out.n = params.n;
    out.blocked_fraction_all = 1.0 / params.n_holes;
    if (params.clang_prob_if_blocked > 0.0) {
        out.blocked_fraction_in_selected = 1.0;
    }
    out.flags = {true, true, false};
    return out;
}

ShutterResult shutter_mc(const ShutterParams& params, std::uint64_t seed) {
    if (params.n_holes == 0) {
        throw ValidationError("shutter: n_holes must be at least 1");
    }
    require_probability(params.clang_prob_if_blocked, "clang_prob_if_blocked");
    ShutterResult out;
    out.n = params.n;
    std::uint64_t blocked_selected = 0;
    for (std::uint64_t i = 0; i < params.n; ++i) {
        RandomStream rng = RandomStream::stream(seed, i);
        const std::uint64_t covered = rng.below(params.n_holes);
        const std::uint64_t aimed = rng.below(params.n_holes);
        const bool blocked = covered == aimed;
        // Only a blocked stone can clang.
        const bool clang = blocked && rng.bernoulli(params.clang_prob_if_blocked);
        out.n_blocked += blocked;
        if (clang) {
            ++out.n_selected;
            blocked_selected += blocked;
        }
    }
    out.blocked_fraction_in_selected = ratio(blocked_selected, out.n_selected);
    out.blocked_fraction_all = ratio(out.n_blocked, params.n).value_or(0.0);
    out.flags = {true, true, false};
    return out;
}

BoxesResult three_boxes_exact() {
    BoxesResult out;
    out.p_box1_given_checked1_green = 1.0;
    out.p_box2_given_checked2_green = 1.0;
    out.p_box1_unconditioned = 1.0 / 3.0;
    out.flags = {true, true, true};
    return out;
}

BoxesResult three_boxes_mc(std::uint64_t n, std::uint64_t seed) {
    if (n == 0) {
        throw ValidationError("boxes: need at least one trial");
    }
    BoxesResult out;
    out.n = n;
    std::uint64_t in_box1 = 0;
    std::uint64_t box1_sel = 0;
    std::uint64_t box2_sel = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RandomStream rng = RandomStream::stream(seed, i);
        const std::uint64_t box = rng.below(3);
        const std::uint64_t checked = rng.below(2);
        const bool green = box == checked;
        in_box1 += box == 0;
        if (green && checked == 0) {
            ++out.n_checked1_green;
            box1_sel += box == 0;
        }
        if (green && checked == 1) {
            ++out.n_checked2_green;
            box2_sel += box == 1;
        }
    }
    out.p_box1_given_checked1_green = ratio(box1_sel, out.n_checked1_green);
    out.p_box2_given_checked2_green = ratio(box2_sel, out.n_checked2_green);
    out.p_box1_unconditioned = static_cast<double>(in_box1) / n;
    out.flags = {true, true, true};
    return out;
}

}  // namespace abl
